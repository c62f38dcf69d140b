#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace synth {

/// Deterministic synthetic news corpus with planted quotation-speaker
/// pairs, heavy-tailed redundancy, 30 attribution templates (exactly one
/// matching the default-style seed «$Q , $S said») and optional
/// distractor names near the quotes.
struct SynthConfig {
  std::uint32_t seed = 1;
  std::size_t pairs = 500;
  std::size_t documents = 2000;
  std::size_t speakers = 120;
  // Fraction of occurrences that get a harmless distractor mention in a
  // leading clause (confuses proximity, not patterns).
  double distractor_rate = 0.10;
  // When true, roughly half the planted pairs have a distractor strictly
  // nearer to the quote than the true speaker in every occurrence.
  bool nearer_distractors = false;
};

struct PlantedPair {
  std::string quote_text;  // full (canonical) quotation
  std::string speaker_id;
  std::size_t occurrences = 0;
  bool distractor_nearer = false;
};

struct SynthCorpus {
  std::string corpus_ndjson;
  std::string aliases_tsv;
  std::string ground_truth_tsv;  // one label-1 row per planted pair
  std::vector<PlantedPair> pairs;
};

SynthCorpus generate(const SynthConfig& config);

}  // namespace synth
