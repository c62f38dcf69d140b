#include "quootstrap.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include "quootstrap/bootstrap.hpp"
#include "quootstrap/eval.hpp"
#include "quootstrap/io.hpp"
#include "quootstrap/options.hpp"
#include "quootstrap/pipeline.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

/// Configuration errors carry QS_ERR_CONFIG through the catch-all.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Missing/unreadable inputs carry QS_ERR_IO.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename Fn>
qs_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return QS_OK;
  } catch (const ConfigError& e) {
    set_error(e.what());
    return QS_ERR_CONFIG;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return QS_ERR_CONFIG;
  } catch (const std::domain_error& e) {
    set_error(e.what());
    return QS_ERR_CONFIG;
  } catch (const IoError& e) {
    set_error(e.what());
    return QS_ERR_IO;
  } catch (const std::exception& e) {
    // File-open failures in the core surface as runtime_errors with a
    // "cannot open/write" prefix; keep them distinguishable.
    const std::string what = e.what();
    set_error(what);
    if (what.rfind("cannot open", 0) == 0 || what.rfind("cannot write", 0) == 0) {
      return QS_ERR_IO;
    }
    if (what.rfind("malformed", 0) == 0 || what.rfind("invalid seed", 0) == 0) {
      return QS_ERR_CONFIG;
    }
    return QS_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return QS_ERR_INTERNAL;
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

bool parse_bool(const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw ConfigError("not a boolean: " + value);
}

long parse_int(const std::string& value) {
  std::size_t pos = 0;
  long out = 0;
  try {
    out = std::stol(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError("not an integer: " + value);
  }
  if (pos != value.size()) throw ConfigError("not an integer: " + value);
  return out;
}

double parse_double(const std::string& value) {
  std::size_t pos = 0;
  double out = 0;
  try {
    out = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw ConfigError("not a number: " + value);
  }
  if (pos != value.size()) throw ConfigError("not a number: " + value);
  return out;
}

}  // namespace

struct qs_options {
  quootstrap::Options options;
  std::map<std::string, std::string> paths;  // corpus, aliases, seeds, ...
  std::vector<quootstrap::Pattern> inline_seeds;

  void set(const std::string& key, const std::string& value) {
    using quootstrap::parse_pattern;
    if (key == "corpus" || key == "aliases" || key == "seeds" ||
        key == "ground_truth" || key == "out") {
      paths[key] = value;
    } else if (key == "seed") {
      std::size_t begin = 0;
      while (begin <= value.size()) {
        auto end = value.find('\n', begin);
        const std::string line =
            value.substr(begin, end == std::string::npos ? end : end - begin);
        if (!line.empty()) {
          auto p = parse_pattern(line, 0);
          if (!p || !quootstrap::is_valid(*p)) {
            throw ConfigError("invalid seed pattern: " + line);
          }
          inline_seeds.push_back(std::move(*p));
        }
        if (end == std::string::npos) break;
        begin = end + 1;
      }
    } else if (key == "max_iterations") {
      options.max_iterations = static_cast<int>(parse_int(value));
    } else if (key == "filter_threshold") {
      options.filter_threshold = parse_double(value);
    } else if (key == "min_support") {
      options.min_support = static_cast<int>(parse_int(value));
    } else if (key == "window") {
      options.window = static_cast<int>(parse_int(value));
    } else if (key == "group_len") {
      options.group_len = static_cast<int>(parse_int(value));
    } else if (key == "min_quote_len") {
      options.min_quote_len = static_cast<int>(parse_int(value));
    } else if (key == "max_quote_len") {
      options.max_quote_len = static_cast<int>(parse_int(value));
    } else if (key == "tau") {
      options.tau = parse_double(value);
    } else if (key == "max_wildcard_run") {
      options.max_wildcard_run = static_cast<int>(parse_int(value));
    } else if (key == "threads") {
      options.threads = static_cast<int>(parse_int(value));
    } else if (key == "max_line_bytes") {
      options.max_line_bytes = static_cast<std::size_t>(parse_int(value));
    } else if (key == "cluster_thresholds") {
      std::vector<double> thresholds;
      std::size_t begin = 0;
      while (begin <= value.size()) {
        auto end = value.find(',', begin);
        const std::string item =
            value.substr(begin, end == std::string::npos ? end : end - begin);
        if (!item.empty()) thresholds.push_back(parse_double(item));
        if (end == std::string::npos) break;
        begin = end + 1;
      }
      if (thresholds.empty()) throw ConfigError("empty cluster_thresholds");
      options.cluster_thresholds = std::move(thresholds);
    } else if (key == "weight_by_chars") {
      options.weight_by_chars = parse_bool(value);
    } else if (key == "alias_case_insensitive") {
      options.alias_case_insensitive = parse_bool(value);
    } else if (key == "cluster_case_insensitive") {
      options.cluster_case_insensitive = parse_bool(value);
    } else if (key == "z_disjunctive") {
      options.z_disjunctive = parse_bool(value);
    } else {
      throw ConfigError("unknown option: " + key);
    }
  }

  quootstrap::Options resolved() const {
    quootstrap::Options out = options;
    if (auto it = paths.find("seeds"); it != paths.end()) {
      try {
        out.seeds = quootstrap::load_seed_file(it->second);
      } catch (const std::runtime_error& e) {
        throw IoError(e.what());
      }
      if (out.seeds.empty()) throw ConfigError("seed file contains no patterns");
    }
    for (const auto& seed : inline_seeds) out.seeds.push_back(seed);
    if (out.seeds.empty()) out.seeds.push_back(quootstrap::default_seed());
    if (!(out.filter_threshold > 0.0) || out.filter_threshold > 1.0) {
      throw ConfigError("filter_threshold must lie in (0, 1]");
    }
    if (out.max_iterations < 1) throw ConfigError("max_iterations must be positive");
    if (out.min_support < 0) throw ConfigError("min_support must be non-negative");
    if (out.window < 1) throw ConfigError("window must be positive");
    return out;
  }
};

struct qs_pipeline {
  quootstrap::PreprocessedCorpus corpus;
  quootstrap::Options options;
  std::unique_ptr<quootstrap::GroundTruth> ground_truth;
};

struct qs_result {
  quootstrap::BootstrapResult result;
  const qs_pipeline* pipeline = nullptr;  // owner outlives results in this API
};

extern "C" {

const char* qs_version(void) { return "1.0.0"; }

const char* qs_last_error(void) { return g_last_error.c_str(); }

void qs_string_free(char* s) { std::free(s); }

qs_options_t* qs_options_new(void) { return new (std::nothrow) qs_options{}; }

void qs_options_free(qs_options_t* opts) { delete opts; }

qs_status qs_options_set(qs_options_t* opts, const char* key, const char* value) {
  return guarded([&] {
    if (!opts || !key || !value) throw ConfigError("null argument");
    opts->set(key, value);
  });
}

qs_status qs_options_load_file(qs_options_t* opts, const char* path) {
  return guarded([&] {
    if (!opts || !path) throw ConfigError("null argument");
    std::map<std::string, std::string> kv;
    try {
      kv = quootstrap::load_options_file(path);
    } catch (const std::runtime_error& e) {
      throw IoError(e.what());
    }
    for (const auto& [key, value] : kv) opts->set(key, value);
  });
}

qs_status qs_pipeline_open(const qs_options_t* opts, qs_pipeline_t** out) {
  return guarded([&] {
    if (!opts || !out) throw ConfigError("null argument");
    auto corpus_path = opts->paths.find("corpus");
    auto alias_path = opts->paths.find("aliases");
    if (corpus_path == opts->paths.end()) throw ConfigError("corpus path not set");
    if (alias_path == opts->paths.end()) throw ConfigError("aliases path not set");

    auto pipeline = std::make_unique<qs_pipeline>();
    pipeline->options = opts->resolved();

    quootstrap::IngestReport report;
    std::vector<quootstrap::Document> docs;
    quootstrap::AliasDictionary dict;
    try {
      docs = quootstrap::ingest_file(corpus_path->second,
                                     pipeline->options.max_line_bytes, report);
      dict = quootstrap::AliasDictionary::load_tsv(
          alias_path->second, pipeline->options.alias_case_insensitive);
    } catch (const std::runtime_error& e) {
      throw IoError(e.what());
    }
    pipeline->corpus =
        quootstrap::preprocess(std::move(docs), std::move(dict), pipeline->options);
    pipeline->corpus.ingest = report;

    if (auto gt = opts->paths.find("ground_truth"); gt != opts->paths.end()) {
      std::vector<quootstrap::GroundTruthRow> rows;
      try {
        rows = quootstrap::load_ground_truth_tsv(gt->second);
      } catch (const std::runtime_error& e) {
        throw IoError(e.what());
      }
      pipeline->ground_truth = std::make_unique<quootstrap::GroundTruth>(
          quootstrap::align_ground_truth(rows, pipeline->corpus.clusters,
                                         pipeline->corpus.spans,
                                         pipeline->options.group_len,
                                         pipeline->options.cluster_case_insensitive));
    }
    *out = pipeline.release();
  });
}

void qs_pipeline_free(qs_pipeline_t* p) { delete p; }

size_t qs_pipeline_document_count(const qs_pipeline_t* p) {
  return p ? p->corpus.documents.size() : 0;
}

size_t qs_pipeline_cluster_count(const qs_pipeline_t* p) {
  return p ? p->corpus.clusters.size() : 0;
}

qs_status qs_extract(qs_pipeline_t* p, qs_result_t** out) {
  return guarded([&] {
    if (!p || !out) throw ConfigError("null argument");
    auto result = std::make_unique<qs_result>();
    result->pipeline = p;
    result->result =
        quootstrap::run_bootstrap(p->corpus, p->options, p->ground_truth.get());
    *out = result.release();
  });
}

qs_status qs_baseline(qs_pipeline_t* p, qs_result_t** out) {
  return guarded([&] {
    if (!p || !out) throw ConfigError("null argument");
    auto result = std::make_unique<qs_result>();
    result->pipeline = p;
    quootstrap::BootstrapResult r;
    r.pairs = quootstrap::nearest_speaker_baseline(p->corpus, p->options.window);
    r.converged = true;
    quootstrap::IterationReport report;
    report.iteration = 1;
    report.pairs = r.pairs.size();
    report.new_pairs = r.pairs.size();
    r.iterations.push_back(report);
    result->result = std::move(r);
    *out = result.release();
  });
}

void qs_result_free(qs_result_t* r) { delete r; }

size_t qs_result_pair_count(const qs_result_t* r) {
  return r ? r->result.pairs.size() : 0;
}

size_t qs_result_pattern_count(const qs_result_t* r) {
  return r ? r->result.patterns.size() : 0;
}

size_t qs_result_iteration_count(const qs_result_t* r) {
  return r ? r->result.iterations.size() : 0;
}

int qs_result_converged(const qs_result_t* r) {
  return r && r->result.converged ? 1 : 0;
}

qs_status qs_result_write_pairs(const qs_result_t* r, const char* path) {
  return guarded([&] {
    if (!r || !path) throw ConfigError("null argument");
    quootstrap::write_pairs_ndjson(r->result, r->pipeline->corpus, path);
  });
}

qs_status qs_result_write_patterns(const qs_result_t* r, const char* path) {
  return guarded([&] {
    if (!r || !path) throw ConfigError("null argument");
    quootstrap::write_patterns(r->result, path);
  });
}

qs_status qs_result_write_report(const qs_result_t* r, const char* path) {
  return guarded([&] {
    if (!r || !path) throw ConfigError("null argument");
    quootstrap::write_report(r->result, r->pipeline->corpus, path);
  });
}

qs_status qs_result_patterns_text(const qs_result_t* r, char** out) {
  return guarded([&] {
    if (!r || !out) throw ConfigError("null argument");
    *out = copy_string(quootstrap::patterns_table(r->result));
  });
}

qs_status qs_evaluate_files(const char* pairs_path, const char* ground_truth_path,
                            const qs_options_t* opts, char** report_json_out) {
  return guarded([&] {
    if (!pairs_path || !ground_truth_path || !report_json_out) {
      throw ConfigError("null argument");
    }
    quootstrap::Options options = opts ? opts->options : quootstrap::Options{};
    std::string report;
    try {
      report = quootstrap::evaluate_files_json(pairs_path, ground_truth_path, options);
    } catch (const std::runtime_error& e) {
      const std::string what = e.what();
      if (what.rfind("cannot open", 0) == 0) throw IoError(what);
      throw;
    }
    *report_json_out = copy_string(report);
  });
}

qs_status qs_stats_csv(const char* pairs_path, const char* which, char** csv_out) {
  return guarded([&] {
    if (!pairs_path || !which || !csv_out) throw ConfigError("null argument");
    std::vector<quootstrap::PairRow> rows;
    try {
      rows = quootstrap::read_pairs_ndjson(pairs_path);
    } catch (const std::runtime_error& e) {
      const std::string what = e.what();
      if (what.rfind("cannot open", 0) == 0) throw IoError(what);
      throw;
    }
    *csv_out = copy_string(quootstrap::stats_csv(rows, which));
  });
}

}  // extern "C"
