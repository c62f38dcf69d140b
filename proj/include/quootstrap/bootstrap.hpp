#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "quootstrap/options.hpp"
#include "quootstrap/pipeline.hpp"

namespace quootstrap {

struct GroundTruth;  // eval.hpp

/// One pattern match occurrence: a (quotation cluster, speaker) candidate
/// with its location and the pattern that produced it.
struct Candidate {
  ClusterId cluster = -1;
  SpeakerId speaker;
  int pattern = -1;  // index into the active pattern list
  std::size_t doc_index = 0;
  std::size_t begin = 0;
  std::size_t end = 0;           // exclusive unit span of the full match
  std::size_t quote_unit = 0;    // unit index of the quotation
  std::size_t speaker_unit = 0;  // unit index of the speaker
};

struct ActivePattern {
  Pattern pattern;
  PatternStats stats;      // classified against the pre-iteration table
  double precision = 1.0;  // derived, seed-pinned until evidence exists
};

/// A resolved attribution: one speaker per quotation cluster.
struct PairRecord {
  ClusterId cluster = -1;
  SpeakerId speaker;
  double confidence = 0;  // probability at least one extracting pattern was right
  int first_iteration = 1;
  std::vector<int> patterns;          // distinct extracting patterns
  std::vector<Candidate> occurrences; // every extraction of this pair
};

struct IterationReport {
  int iteration = 0;
  std::size_t active_patterns = 0;
  std::size_t admitted_patterns = 0;
  std::size_t pairs = 0;
  std::size_t new_pairs = 0;
  std::optional<double> precision;  // vs ground truth, when supplied
  std::optional<double> recall;
};

struct BootstrapResult {
  std::vector<ActivePattern> patterns;  // seeds first, then admissions in order
  std::vector<PairRecord> pairs;        // sorted by cluster id
  std::vector<IterationReport> iterations;
  bool converged = false;
};

/// Confidence that speaker S uttered Q given the precisions of the
/// distinct patterns that extracted (Q, S).
double pair_confidence(const std::vector<double>& pattern_precisions);

struct ResolvedPair {
  SpeakerId speaker;
  double confidence = 0;
};

/// Assigns each cluster to the speaker with the highest confidence.
/// Ties break by occurrence count for that quotation, then by the
/// lexicographically smallest speaker id.
std::map<ClusterId, ResolvedPair> resolve_conflicts(
    const std::vector<Candidate>& candidates,
    const std::vector<double>& precision_by_pattern);

/// Per-pattern weighted tallies of candidates against the previous
/// table: positive when the table maps Q to S, negative when it maps Q
/// elsewhere, neutral otherwise. Weights are tanh(canonical length / tau),
/// with length in tokens or (optionally) characters.
std::vector<PatternStats> classify_matches(const std::vector<Candidate>& candidates,
                                           const std::map<ClusterId, SpeakerId>& previous,
                                           std::size_t pattern_count,
                                           const PreprocessedCorpus& corpus, double tau,
                                           bool weight_by_chars = false);

using ConsumedContext = std::tuple<std::size_t, std::size_t, std::size_t>;  // doc, q, s

/// The minimal valid pattern for every unconsumed co-occurrence of a
/// resolved pair within the window. Contexts containing a third
/// quote/speaker unit between the pair are discarded.
std::vector<Pattern> extract_candidate_patterns(
    const PreprocessedCorpus& corpus, const std::map<ClusterId, SpeakerId>& table,
    const std::set<ConsumedContext>& consumed, int window, int threads);

/// The full loop: match, resolve, infer, repeat until no new pair and no
/// new pattern or max_iterations. Ground truth, when given, only feeds
/// the per-iteration report.
BootstrapResult run_bootstrap(const PreprocessedCorpus& corpus, const Options& options,
                              const GroundTruth* ground_truth = nullptr);

}  // namespace quootstrap
