#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quootstrap/entity.hpp"
#include "quootstrap/quote.hpp"

namespace quootstrap {

enum class ElementKind : std::uint8_t { literal, wildcard, quote, speaker };

struct PatternToken {
  ElementKind kind = ElementKind::literal;
  std::string text;  // literal surface; empty otherwise

  friend bool operator==(const PatternToken&, const PatternToken&) = default;
  friend auto operator<=>(const PatternToken&, const PatternToken&) = default;
};

inline PatternToken literal(std::string s) {
  return {ElementKind::literal, std::move(s)};
}
inline PatternToken wildcard() { return {ElementKind::wildcard, {}}; }
inline PatternToken quote_placeholder() { return {ElementKind::quote, {}}; }
inline PatternToken speaker_placeholder() { return {ElementKind::speaker, {}}; }

/// A token-level extraction template: exactly one quotation placeholder,
/// exactly one speaker placeholder, optional single-token wildcards.
/// origin_iteration 0 marks a seed; inferred patterns carry the iteration
/// that admitted them.
struct Pattern {
  std::vector<PatternToken> elements;
  int origin_iteration = 0;

  bool is_seed() const { return origin_iteration == 0; }
  bool quote_first() const;  // quotation placeholder precedes the speaker's

  friend bool operator==(const Pattern& a, const Pattern& b) {
    return a.elements == b.elements;
  }
};

/// Every violated format constraint, empty when the pattern is valid.
std::vector<std::string> validate(const Pattern& p);
inline bool is_valid(const Pattern& p) { return validate(p).empty(); }

/// Text syntax: whitespace-separated elements, `$Q` `$S` `*` reserved.
std::string to_string(const Pattern& p);
std::optional<Pattern> parse_pattern(std::string_view text, int origin_iteration = 0);

/// Weighted match tallies for one pattern.
struct PatternStats {
  double w_plus = 0;   // weighted positive matches
  double w_minus = 0;  // weighted negative matches
  int support = 0;     // distinct previously-known pairs re-extracted
};

/// w+/(w+ + w-); 1 for virgin seeds, 0 for virgin inferred patterns.
double pattern_precision(const PatternStats& stats, bool seed_origin);

/// tanh(length / tau): 0 at length 0, monotone, tends to 1.
double match_weight(int quote_length_tokens, double tau);

/// A document rewritten as matching units: plain tokens, plus atomic
/// units for quotation spans (with their cluster) and resolved speaker
/// mentions.
struct Unit {
  enum class Kind : std::uint8_t { token, quote, speaker };
  Kind kind = Kind::token;
  std::string text;        // kind == token
  ClusterId cluster = -1;  // kind == quote
  SpeakerId speaker;       // kind == speaker
  std::size_t first_token = 0;
  std::size_t last_token = 0;  // inclusive token span in the source stream
};

struct AnnotatedStream {
  std::string doc_id;
  std::size_t doc_index = 0;
  std::vector<Unit> units;
};

struct MatchResult {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive unit span
  ClusterId cluster = -1;
  SpeakerId speaker;
};

/// All non-overlapping matches of one validated pattern in left-to-right
/// scan order. Literals match plain tokens with equal surface; a wildcard
/// matches exactly one plain token and never a quote/speaker unit.
std::vector<MatchResult> match(const Pattern& p, const AnnotatedStream& s);

/// Shared prefix trie so a whole pattern set is matched in one pass per
/// stream. Per pattern, hits equal match(p, s).
class MatchTrie {
 public:
  explicit MatchTrie(const std::vector<Pattern>& patterns);

  struct Hit {
    int pattern = -1;
    std::size_t begin = 0;
    std::size_t end = 0;
    ClusterId cluster = -1;
    SpeakerId speaker;
  };

  std::vector<Hit> match_stream(const AnnotatedStream& s) const;
  std::size_t pattern_count() const { return pattern_count_; }

 private:
  struct Node {
    std::map<PatternToken, int> next;
    std::vector<int> terminals;
  };
  std::vector<Node> nodes_;
  std::size_t pattern_count_ = 0;
};

}  // namespace quootstrap
