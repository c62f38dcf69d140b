#include "quootstrap/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

namespace quootstrap {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  return out;
}

}  // namespace

void write_pairs_ndjson(const BootstrapResult& result, const PreprocessedCorpus& corpus,
                        const std::string& path) {
  std::ofstream out = open_out(path);
  for (const PairRecord& pair : result.pairs) {
    json rec;
    rec["quotation"] = corpus.cluster_text(pair.cluster);
    rec["speaker_id"] = pair.speaker;
    rec["speaker_name"] = corpus.dictionary.canonical_name_string(pair.speaker);
    rec["confidence"] = pair.confidence;
    rec["iteration"] = pair.first_iteration;
    json occurrences = json::array();
    for (const Candidate& c : pair.occurrences) {
      json occ;
      occ["doc"] = corpus.documents[c.doc_index].doc_id;
      occ["site"] = corpus.documents[c.doc_index].site;
      occ["pattern"] =
          c.pattern >= 0 && static_cast<std::size_t>(c.pattern) < result.patterns.size()
              ? to_string(result.patterns[static_cast<std::size_t>(c.pattern)].pattern)
              : std::string("<nearest-speaker>");
      occurrences.push_back(std::move(occ));
    }
    rec["occurrences"] = std::move(occurrences);
    out << rec.dump() << "\n";
  }
}

std::vector<PairRow> read_pairs_ndjson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pairs file: " + path);
  std::vector<PairRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object()) {
      throw std::runtime_error("malformed pairs line: " + path);
    }
    PairRow row;
    row.quotation = rec.value("quotation", std::string{});
    row.speaker_id = rec.value("speaker_id", std::string{});
    row.speaker_name = rec.value("speaker_name", std::string{});
    row.confidence = rec.value("confidence", 0.0);
    row.iteration = rec.value("iteration", 1);
    if (rec.contains("occurrences") && rec["occurrences"].is_array()) {
      row.occurrence_count = rec["occurrences"].size();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string patterns_table(const BootstrapResult& result) {
  struct Row {
    std::string text;
    double precision;
    int support;
    int origin;
  };
  std::vector<Row> rows;
  rows.reserve(result.patterns.size());
  for (const ActivePattern& ap : result.patterns) {
    rows.push_back(
        {to_string(ap.pattern), ap.precision, ap.stats.support, ap.pattern.origin_iteration});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.origin, a.text) < std::tie(b.origin, b.text);
  });
  std::ostringstream out;
  for (const Row& r : rows) {
    char precision[32];
    std::snprintf(precision, sizeof precision, "%.6f", r.precision);
    out << r.text << "\t" << precision << "\t" << r.support << "\t"
        << (r.origin == 0 ? std::string("seed")
                          : "iteration " + std::to_string(r.origin))
        << "\n";
  }
  return out.str();
}

void write_patterns(const BootstrapResult& result, const std::string& path) {
  open_out(path) << patterns_table(result);
}

std::string report_json(const BootstrapResult& result, const PreprocessedCorpus& corpus) {
  json report;
  report["documents"] = corpus.documents.size();
  report["clusters"] = corpus.clusters.size();
  report["unbalanced_documents"] = corpus.unbalanced_documents;
  report["pairs"] = result.pairs.size();
  report["patterns"] = result.patterns.size();
  report["converged"] = result.converged;
  report["ingest"] = {{"lines_read", corpus.ingest.lines_read},
                      {"duplicates", corpus.ingest.duplicates},
                      {"duplicate_ids", corpus.ingest.duplicate_ids},
                      {"malformed", corpus.ingest.malformed},
                      {"oversized", corpus.ingest.oversized}};
  json iterations = json::array();
  for (const IterationReport& it : result.iterations) {
    json row;
    row["iteration"] = it.iteration;
    row["active_patterns"] = it.active_patterns;
    row["new_patterns"] = it.admitted_patterns;
    row["pairs"] = it.pairs;
    row["new_pairs"] = it.new_pairs;
    row["precision"] = it.precision ? json(*it.precision) : json(nullptr);
    row["recall"] = it.recall ? json(*it.recall) : json(nullptr);
    iterations.push_back(std::move(row));
  }
  report["iterations"] = std::move(iterations);
  return report.dump(2) + "\n";
}

void write_report(const BootstrapResult& result, const PreprocessedCorpus& corpus,
                  const std::string& path) {
  open_out(path) << report_json(result, corpus);
}

std::vector<Pattern> load_seed_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open seed file: " + path);
  std::vector<Pattern> seeds;
  std::string line;
  while (std::getline(in, line)) {
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    auto p = parse_pattern(text, 0);
    if (!p || !is_valid(*p)) {
      throw std::runtime_error("invalid seed pattern: " + text);
    }
    seeds.push_back(std::move(*p));
  }
  return seeds;
}

std::map<std::string, std::string> load_options_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    auto sep = text.find('=');
    if (sep == std::string::npos) sep = text.find_first_of(" \t");
    if (sep == std::string::npos) {
      throw std::runtime_error("malformed config line: " + text);
    }
    kv[trim(text.substr(0, sep))] = trim(text.substr(sep + 1));
  }
  return kv;
}

std::string stats_csv(const std::vector<PairRow>& rows, const std::string& which) {
  std::vector<std::int64_t> counts;
  if (which == "quotations_per_speaker") {
    std::map<std::string, std::int64_t> per_speaker;
    for (const PairRow& row : rows) ++per_speaker[row.speaker_id];
    for (const auto& [speaker, count] : per_speaker) {
      (void)speaker;
      counts.push_back(count);
    }
  } else if (which == "occurrences_per_quotation") {
    for (const PairRow& row : rows) {
      counts.push_back(static_cast<std::int64_t>(row.occurrence_count));
    }
  } else {
    throw std::invalid_argument("unknown statistic: " + which);
  }
  std::ostringstream out;
  out << "k,count\n";
  for (const auto& [k, count] : ccdf(counts)) {
    out << k << "," << count << "\n";
  }
  return out.str();
}

std::string evaluate_files_json(const std::string& pairs_path,
                                const std::string& ground_truth_path,
                                const Options& options) {
  const std::vector<PairRow> pairs = read_pairs_ndjson(pairs_path);
  const std::vector<GroundTruthRow> gt_rows = load_ground_truth_tsv(ground_truth_path);
  if (gt_rows.empty() ||
      std::none_of(gt_rows.begin(), gt_rows.end(),
                   [](const GroundTruthRow& r) { return r.label; })) {
    throw std::invalid_argument("ground truth has no positive rows");
  }

  // Joint keying so abridged variants align across both files.
  std::vector<std::string> texts;
  texts.reserve(pairs.size() + gt_rows.size());
  for (const PairRow& row : pairs) texts.push_back(row.quotation);
  for (const GroundTruthRow& row : gt_rows) texts.push_back(row.quotation);
  const std::vector<QuoteKey> keys =
      key_quotation_texts(texts, options.group_len, options.cluster_case_insensitive);

  std::vector<std::pair<QuoteKey, SpeakerId>> retrieved;
  std::set<QuoteKey> seen;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!seen.insert(keys[i]).second) continue;  // keep first on key merges
    retrieved.emplace_back(keys[i], pairs[i].speaker_id);
  }
  GroundTruth gt;
  for (std::size_t i = 0; i < gt_rows.size(); ++i) {
    const QuoteKey key = keys[pairs.size() + i];
    gt.relevant_quotes.insert(key);
    gt.relevant_speakers.insert(gt_rows[i].speaker);
    if (gt_rows[i].label) gt.relevant_pairs.emplace(key, gt_rows[i].speaker);
  }

  const EvalResult micro =
      evaluate(retrieved, gt, EvalMode::micro, options.z_disjunctive);
  const EvalResult macro =
      evaluate(retrieved, gt, EvalMode::macro, options.z_disjunctive);

  std::map<std::string, std::string> display_names;
  for (const PairRow& row : pairs) {
    if (!row.speaker_name.empty()) display_names.emplace(row.speaker_id, row.speaker_name);
  }

  json report;
  auto metric = [](const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
  };
  report["micro"] = {{"precision", metric(micro.precision)},
                     {"recall", metric(micro.recall)}};
  report["macro"] = {{"precision", metric(macro.precision)},
                     {"recall", metric(macro.recall)}};
  report["retrieved"] = retrieved.size();
  report["relevant"] = gt.relevant_pairs.size();
  json per_speaker = json::object();
  for (const auto& [speaker, metrics] : macro.per_speaker) {
    json row;
    row["precision"] = metric(metrics.precision);
    row["recall"] = metric(metrics.recall);
    row["retrieved"] = metrics.retrieved;
    row["relevant"] = metrics.relevant;
    auto name = display_names.find(speaker);
    row["name"] = name == display_names.end() ? std::string{} : name->second;
    per_speaker[speaker] = std::move(row);
  }
  report["per_speaker"] = std::move(per_speaker);
  return report.dump(2) + "\n";
}

}  // namespace quootstrap
