#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quootstrap/bootstrap.hpp"
#include "quootstrap/eval.hpp"
#include "quootstrap/options.hpp"

namespace quootstrap {

/// Writes one NDJSON line per resolved pair, sorted by cluster id:
/// {"quotation","speaker_id","speaker_name","confidence","occurrences":
/// [{"doc","site","pattern"}],"iteration"}.
void write_pairs_ndjson(const BootstrapResult& result, const PreprocessedCorpus& corpus,
                        const std::string& path);

struct PairRow {
  std::string quotation;
  SpeakerId speaker_id;
  std::string speaker_name;
  double confidence = 0;
  std::size_t occurrence_count = 0;
  int iteration = 1;
};

std::vector<PairRow> read_pairs_ndjson(const std::string& path);

/// One pattern per line: text, precision, support, origin.
std::string patterns_table(const BootstrapResult& result);
void write_patterns(const BootstrapResult& result, const std::string& path);

std::string report_json(const BootstrapResult& result, const PreprocessedCorpus& corpus);
void write_report(const BootstrapResult& result, const PreprocessedCorpus& corpus,
                  const std::string& path);

/// Seed file: one pattern per line, blank lines and #-comments skipped.
/// Throws on missing file or any unparsable pattern.
std::vector<Pattern> load_seed_file(const std::string& path);

/// Flat `key = value` configuration file (also accepts `key value` and
/// `key=value`); #-comments skipped.
std::map<std::string, std::string> load_options_file(const std::string& path);

/// CCDF of pairs-per-speaker or occurrences-per-quotation as CSV.
std::string stats_csv(const std::vector<PairRow>& rows, const std::string& which);

/// Evaluation of a pairs file against a ground-truth file, with both
/// sides keyed by joint quotation clustering. Returns a JSON report with
/// micro, macro and per-speaker tables.
std::string evaluate_files_json(const std::string& pairs_path,
                                const std::string& ground_truth_path,
                                const Options& options);

}  // namespace quootstrap
