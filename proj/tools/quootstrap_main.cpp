// Command-line front end for the quootstrap engine. All engine work goes
// through the C API in quootstrap.h; this file only parses flags, moves
// files around and formats output.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "quootstrap.h"

namespace {

namespace fs = std::filesystem;

int exit_code(qs_status status) {
  switch (status) {
    case QS_OK: return 0;
    case QS_ERR_CONFIG: return 2;
    case QS_ERR_IO: return 2;
    case QS_ERR_INTERNAL: return 1;
  }
  return 1;
}

int fail(qs_status status) {
  std::cerr << "error: " << qs_last_error() << "\n";
  return exit_code(status);
}

struct OptionsHandle {
  qs_options_t* ptr = qs_options_new();
  ~OptionsHandle() { qs_options_free(ptr); }
};

struct CommonFlags {
  std::string config;
  std::string corpus;
  std::string aliases;
  std::string seeds;
  std::string ground_truth;
  std::string out = ".";
  std::string pairs;
  int max_iterations = -1;
  double filter_threshold = -1;
  int min_support = -1;
  int window = -1;
  int group_len = -1;
  int min_quote_len = -1;
  int max_quote_len = -1;
  int threads = -1;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", config, "flat key=value configuration file");
    cmd->add_option("--corpus", corpus, "NDJSON corpus file");
    cmd->add_option("--aliases", aliases, "alias dictionary TSV");
    cmd->add_option("--seeds", seeds, "seed pattern file (one pattern per line)");
    cmd->add_option("--ground-truth", ground_truth, "ground-truth TSV");
    cmd->add_option("--out", out, "output directory");
    cmd->add_option("--pairs", pairs, "pairs NDJSON file (eval/stats input)");
    cmd->add_option("--max-iterations", max_iterations, "bootstrap iteration cap");
    cmd->add_option("--filter-threshold", filter_threshold,
                    "pattern precision cutoff");
    cmd->add_option("--min-support", min_support,
                    "known pairs a pattern must re-extract");
    cmd->add_option("--window", window, "context window in units");
    cmd->add_option("--group-len", group_len,
                    "shared-run length for quotation grouping (0 disables)");
    cmd->add_option("--min-quote-len", min_quote_len, "minimum quotation tokens");
    cmd->add_option("--max-quote-len", max_quote_len, "maximum quotation tokens");
    cmd->add_option("--threads", threads, "worker threads");
  }

  // Precedence: flags > config file > defaults.
  qs_status apply(qs_options_t* opts) const {
    qs_status s = QS_OK;
    auto set = [&](const char* key, const std::string& value) {
      if (s == QS_OK && !value.empty()) s = qs_options_set(opts, key, value.c_str());
    };
    auto set_int = [&](const char* key, int value) {
      if (s == QS_OK && value >= 0) {
        s = qs_options_set(opts, key, std::to_string(value).c_str());
      }
    };
    if (!config.empty()) s = qs_options_load_file(opts, config.c_str());
    set("corpus", corpus);
    set("aliases", aliases);
    set("seeds", seeds);
    set("ground_truth", ground_truth);
    set_int("max_iterations", max_iterations);
    if (s == QS_OK && filter_threshold >= 0) {
      s = qs_options_set(opts, "filter_threshold",
                         std::to_string(filter_threshold).c_str());
    }
    set_int("min_support", min_support);
    set_int("window", window);
    set_int("group_len", group_len);
    set_int("min_quote_len", min_quote_len);
    set_int("max_quote_len", max_quote_len);
    set_int("threads", threads);
    return s;
  }
};

struct RunOutputs {
  fs::path pairs;
  fs::path patterns;
  fs::path report;
};

int run_pipeline(const CommonFlags& flags, bool baseline, bool print_patterns) {
  OptionsHandle opts;
  if (qs_status s = flags.apply(opts.ptr); s != QS_OK) return fail(s);

  qs_pipeline_t* pipeline = nullptr;
  if (qs_status s = qs_pipeline_open(opts.ptr, &pipeline); s != QS_OK) return fail(s);
  std::unique_ptr<qs_pipeline_t, decltype(&qs_pipeline_free)> pipeline_guard(
      pipeline, qs_pipeline_free);

  qs_result_t* result = nullptr;
  qs_status s = baseline ? qs_baseline(pipeline, &result) : qs_extract(pipeline, &result);
  if (s != QS_OK) return fail(s);
  std::unique_ptr<qs_result_t, decltype(&qs_result_free)> result_guard(result,
                                                                       qs_result_free);

  if (print_patterns) {
    char* text = nullptr;
    if (qs_status ps = qs_result_patterns_text(result, &text); ps != QS_OK) {
      return fail(ps);
    }
    std::cout << text;
    qs_string_free(text);
    return 0;
  }

  std::error_code ec;
  fs::create_directories(flags.out, ec);
  RunOutputs outputs{fs::path(flags.out) / "pairs.ndjson",
                     fs::path(flags.out) / "patterns.tsv",
                     fs::path(flags.out) / "report.json"};
  if (qs_status ws = qs_result_write_pairs(result, outputs.pairs.string().c_str());
      ws != QS_OK) {
    return fail(ws);
  }
  if (qs_status ws = qs_result_write_patterns(result, outputs.patterns.string().c_str());
      ws != QS_OK) {
    return fail(ws);
  }
  if (qs_status ws = qs_result_write_report(result, outputs.report.string().c_str());
      ws != QS_OK) {
    return fail(ws);
  }
  std::cout << "documents=" << qs_pipeline_document_count(pipeline)
            << " clusters=" << qs_pipeline_cluster_count(pipeline)
            << " pairs=" << qs_result_pair_count(result)
            << " patterns=" << qs_result_pattern_count(result)
            << " iterations=" << qs_result_iteration_count(result)
            << " converged=" << (qs_result_converged(result) ? "true" : "false")
            << "\n";
  std::cout << "wrote " << outputs.pairs.string() << ", " << outputs.patterns.string()
            << ", " << outputs.report.string() << "\n";
  return 0;
}

void print_metric_row(const std::string& name, const nlohmann::json& metrics) {
  auto cell = [](const nlohmann::json& v) {
    if (v.is_null()) return std::string("undefined");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v.get<double>());
    return std::string(buf);
  };
  std::printf("%-28s %-10s %-10s\n", name.c_str(),
              cell(metrics["precision"]).c_str(), cell(metrics["recall"]).c_str());
}

int run_eval(const CommonFlags& flags, bool as_json) {
  if (flags.pairs.empty() || flags.ground_truth.empty()) {
    std::cerr << "error: eval needs --pairs and --ground-truth\n";
    return 2;
  }
  OptionsHandle opts;
  if (qs_status s = flags.apply(opts.ptr); s != QS_OK) return fail(s);
  char* report_text = nullptr;
  if (qs_status s = qs_evaluate_files(flags.pairs.c_str(), flags.ground_truth.c_str(),
                                      opts.ptr, &report_text);
      s != QS_OK) {
    return fail(s);
  }
  if (as_json) {
    std::cout << report_text;
    qs_string_free(report_text);
    return 0;
  }
  nlohmann::json report = nlohmann::json::parse(report_text);
  qs_string_free(report_text);

  std::printf("%-28s %-10s %-10s\n", "", "precision", "recall");
  print_metric_row("micro", report["micro"]);
  print_metric_row("macro", report["macro"]);
  std::printf("\n");
  for (auto& [speaker, row] : report["per_speaker"].items()) {
    const std::string name = row["name"].get<std::string>();
    print_metric_row(name.empty() ? speaker : speaker + " (" + name + ")", row);
  }
  return 0;
}

int run_stats(const CommonFlags& flags) {
  if (flags.pairs.empty()) {
    std::cerr << "error: stats needs --pairs\n";
    return 2;
  }
  std::error_code ec;
  fs::create_directories(flags.out, ec);
  for (const char* which : {"quotations_per_speaker", "occurrences_per_quotation"}) {
    char* csv = nullptr;
    if (qs_status s = qs_stats_csv(flags.pairs.c_str(), which, &csv); s != QS_OK) {
      return fail(s);
    }
    const fs::path path = fs::path(flags.out) / (std::string(which) + ".csv");
    std::ofstream out(path);
    if (!out) {
      qs_string_free(csv);
      std::cerr << "error: cannot write " << path << "\n";
      return 2;
    }
    out << csv;
    qs_string_free(csv);
    std::cout << "wrote " << path.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quotation-speaker pair extraction by pattern bootstrapping"};
  app.require_subcommand(1);

  CommonFlags extract_flags;
  CommonFlags eval_flags;
  CommonFlags baseline_flags;
  CommonFlags stats_flags;
  CommonFlags patterns_flags;

  auto* cmd_extract =
      app.add_subcommand("extract", "run the bootstrap loop and write pairs");
  extract_flags.add_to(cmd_extract);
  auto* cmd_eval = app.add_subcommand("eval", "score a pairs file against ground truth");
  eval_flags.add_to(cmd_eval);
  bool eval_json = false;
  cmd_eval->add_flag("--json", eval_json, "emit the raw JSON report");
  auto* cmd_baseline =
      app.add_subcommand("baseline", "nearest-speaker attribution for comparison");
  baseline_flags.add_to(cmd_baseline);
  auto* cmd_stats = app.add_subcommand("stats", "CCDF tables from a pairs file");
  stats_flags.add_to(cmd_stats);
  auto* cmd_patterns = app.add_subcommand("patterns", "print the learned pattern table");
  patterns_flags.add_to(cmd_patterns);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (cmd_extract->parsed()) return run_pipeline(extract_flags, false, false);
    if (cmd_baseline->parsed()) return run_pipeline(baseline_flags, true, false);
    if (cmd_patterns->parsed()) return run_pipeline(patterns_flags, false, true);
    if (cmd_eval->parsed()) return run_eval(eval_flags, eval_json);
    if (cmd_stats->parsed()) return run_stats(stats_flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
