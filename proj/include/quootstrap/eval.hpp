#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "quootstrap/bootstrap.hpp"
#include "quootstrap/pipeline.hpp"

namespace quootstrap {

/// Quotations are compared by key: a cluster id when aligned to the
/// corpus, or a fresh negative key for ground-truth-only quotations.
using QuoteKey = std::int64_t;

struct GroundTruth {
  std::map<QuoteKey, SpeakerId> relevant_pairs;  // label-1 rows, conflict-free
  std::set<QuoteKey> relevant_quotes;            // every labeled quotation
  std::set<SpeakerId> relevant_speakers;
};

struct SpeakerMetrics {
  std::optional<double> precision;
  std::optional<double> recall;
  std::size_t retrieved = 0;
  std::size_t relevant = 0;
};

enum class EvalMode { micro, macro };

struct EvalResult {
  std::optional<double> precision;  // nullopt when the denominator is zero
  std::optional<double> recall;
  std::map<SpeakerId, SpeakerMetrics> per_speaker;
};

/// Precision |X∩Y| / |Y∖Z| and recall |X∩Y| / |X|, where Z is the set of
/// retrieved pairs whose quotation and speaker are both unknown to the
/// ground truth (z_disjunctive widens Z to either-unknown). Macro mode
/// averages per-speaker metrics, skipping undefined cells.
EvalResult evaluate(const std::vector<std::pair<QuoteKey, SpeakerId>>& retrieved,
                    const GroundTruth& gt, EvalMode mode, bool z_disjunctive = false);

struct GroundTruthRow {
  std::string quotation;
  SpeakerId speaker;
  bool label = false;
};

/// TSV `quotation_text<TAB>speaker_id<TAB>label(1|0)`. Throws on missing
/// file; malformed lines are skipped.
std::vector<GroundTruthRow> load_ground_truth_tsv(const std::string& path,
                                                  std::size_t* skipped = nullptr);

/// Aligns ground-truth rows to corpus clusters through the shared-run
/// criterion used for quotation grouping; unaligned rows receive fresh
/// negative keys.
GroundTruth align_ground_truth(const std::vector<GroundTruthRow>& rows,
                               const std::vector<QuotationCluster>& clusters,
                               const std::vector<QuotationSpan>& cluster_spans,
                               int group_len, bool case_insensitive);

/// Joint keying of arbitrary quotation texts (retrieved + ground truth)
/// by clustering them together; returns one key per input text.
std::vector<QuoteKey> key_quotation_texts(const std::vector<std::string>& texts,
                                          int group_len, bool case_insensitive);

/// Attributes each quotation to the nearest resolvable speaker within the
/// window (ties: preceding side), then runs conflict resolution with all
/// attributions at precision 1.
std::vector<PairRecord> nearest_speaker_baseline(const PreprocessedCorpus& corpus,
                                                 int window);

struct CoverageSolution {
  double x = 0;
  bool degenerate = false;  // no root in (0,1]; x reported as 0
};

/// Unique root in (0,1] of x = 1 - (1 - p*x)^n, by bisection to 1e-9.
/// Throws std::domain_error for n < 2 or p outside (0,1].
CoverageSolution explicit_coverage(double p, int n);

/// Unnormalized complementary cumulative distribution: for k = 1..max,
/// the number of items with count >= k.
std::vector<std::pair<std::int64_t, std::size_t>> ccdf(
    const std::vector<std::int64_t>& counts);

}  // namespace quootstrap
