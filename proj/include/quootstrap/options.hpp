#pragma once

#include <cstddef>
#include <vector>

#include "quootstrap/pattern.hpp"

namespace quootstrap {

/// Knobs for the whole pipeline. Defaults follow the engine's production
/// settings; fixtures and experiments override per run.
struct Options {
  // ingestion
  std::size_t max_line_bytes = std::size_t{1} << 20;

  // quotation spans
  int min_quote_len = 3;
  int max_quote_len = 300;

  // quotation grouping
  int group_len = 8;  // shared-run length; 0 disables grouping
  bool cluster_case_insensitive = true;

  // alias matching
  bool alias_case_insensitive = false;

  // bootstrap loop
  std::vector<Pattern> seeds;
  int max_iterations = 5;
  std::vector<double> cluster_thresholds{0.0, 0.0002, 0.001, 0.005};  // × N
  int max_wildcard_run = 5;      // m
  double filter_threshold = 0.7; // pattern precision cutoff
  int min_support = 5;           // M: distinct known pairs a pattern must re-extract
  double tau = 10.0;             // tanh weighting scale
  bool weight_by_chars = false;  // weight by characters instead of tokens
  int window = 15;               // context window, in units

  // evaluation
  bool z_disjunctive = false;  // alternative reading of the neutral set

  // execution
  int threads = 1;
};

/// The single default seed used when a run supplies none.
Pattern default_seed();

}  // namespace quootstrap
