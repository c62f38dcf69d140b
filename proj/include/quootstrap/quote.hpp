#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "quootstrap/corpus.hpp"

namespace quootstrap {

using ClusterId = std::int32_t;

/// A quotation occurrence: the tokens between one balanced pair of quote
/// delimiters (delimiters excluded). Nested quotes inside the span are
/// kept as plain tokens of the outer span.
struct QuotationSpan {
  std::string doc_id;
  std::size_t doc_index = 0;   // ordinal of the document in the corpus
  std::size_t open_token = 0;  // index of the opening delimiter token
  std::size_t close_token = 0; // index of the closing delimiter token
  std::vector<std::string> tokens;  // interior surfaces
};

struct QuoteDetectStats {
  std::size_t dropped_length = 0;  // spans outside [min_len, max_len]
  std::size_t stray_closes = 0;    // quote_close with no matching open
  bool balanced = true;
};

/// Outermost balanced delimiter pairs as (open, close) token indices.
std::vector<std::pair<std::size_t, std::size_t>> balanced_quote_pairs(
    const TokenStream& stream, std::size_t* stray_closes = nullptr);

/// One span per outermost balanced pair whose interior length lies in
/// [min_len, max_len]; spans are returned in document order.
std::vector<QuotationSpan> detect_quotations(const TokenStream& stream, int min_len,
                                             int max_len,
                                             QuoteDetectStats* stats = nullptr);

struct QuotationCluster {
  ClusterId id = -1;
  std::vector<std::string> canonical_tokens;  // longest member, ties lexicographic
  std::vector<std::size_t> members;           // indices into the input span list
  std::size_t occurrence_count = 0;
};

/// Groups spans that share at least one contiguous run of `group_len`
/// identical tokens (connected components). Spans shorter than group_len
/// cluster by exact text. group_len == 0 disables run-based grouping
/// entirely (exact text only). Token comparison is optionally
/// case-insensitive (ASCII folding).
std::vector<QuotationCluster> cluster_quotations(const std::vector<QuotationSpan>& spans,
                                                 int group_len, bool case_insensitive);

/// Folded form of a token used for cluster comparisons.
std::string fold_token(const std::string& surface, bool case_insensitive);

}  // namespace quootstrap
