#include <algorithm>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "quootstrap/dawg.hpp"

using namespace quootstrap;
using namespace testing;

namespace {

// The nine candidate patterns of the worked clustering example.
std::vector<Pattern> worked_example_patterns() {
  const std::vector<std::string> texts = {
      "$Q , said $S .",
      "$Q , said writer $S .",
      "$Q , said Italian writer $S .",
      "$Q , said Bavarian writer $S .",
      "$Q , announced writer $S .",
      "$Q , announced Mayor $S .",
      "$Q , said Mayor $S .",
      "$Q , said Mayor of Rome $S .",
      "$Q , said Mayor of London $S .",
  };
  std::vector<Pattern> out;
  for (const auto& t : texts) out.push_back(*parse_pattern(t));
  return out;
}

std::set<std::string> texts_of(const std::vector<Pattern>& patterns) {
  std::set<std::string> out;
  for (const Pattern& p : patterns) out.insert(to_string(p));
  return out;
}

// Independent oracle for the full-wildcarding regime (n_min above every
// possible count): wildcard every literal of every input pattern, trim,
// cap the wildcard run, validate, dedup. No graph needed.
std::set<std::string> oracle_all_wildcarded(const std::vector<Pattern>& patterns,
                                            int max_run) {
  std::set<std::string> out;
  for (const Pattern& p : patterns) {
    std::vector<PatternToken> elements;
    for (const PatternToken& e : p.elements) {
      elements.push_back(e.kind == ElementKind::literal ? wildcard() : e);
    }
    std::size_t lo = 0;
    std::size_t hi = elements.size();
    while (lo < hi && elements[lo].kind == ElementKind::wildcard) ++lo;
    while (hi > lo && elements[hi - 1].kind == ElementKind::wildcard) --hi;
    Pattern trimmed;
    trimmed.elements.assign(elements.begin() + static_cast<std::ptrdiff_t>(lo),
                            elements.begin() + static_cast<std::ptrdiff_t>(hi));
    int run = 0;
    int longest = 0;
    for (const auto& e : trimmed.elements) {
      run = e.kind == ElementKind::wildcard ? run + 1 : 0;
      longest = std::max(longest, run);
    }
    if (longest > max_run) continue;
    if (!is_valid(trimmed)) continue;
    out.insert(to_string(trimmed));
  }
  return out;
}

}  // namespace

TEST_CASE("build records the worked example's prefix counts") {
  auto dawg = Dawg::build(worked_example_patterns());
  REQUIRE(dawg.has_value());
  CHECK(dawg->total_insertions() == 9);
  CHECK(dawg->prefix_count({}) == 9);
  const auto q = quote_placeholder();
  const auto comma = literal(",");
  CHECK(dawg->prefix_count({q}) == 9);
  CHECK(dawg->prefix_count({q, comma, literal("said")}) == 7);
  CHECK(dawg->prefix_count({q, comma, literal("announced")}) == 2);
  CHECK(dawg->prefix_count({q, comma, literal("said"), literal("Mayor")}) == 3);
  CHECK(dawg->prefix_count({q, comma, literal("said"), literal("Mayor"),
                            literal("of")}) == 2);
}

TEST_CASE("empty input builds a root-only graph") {
  auto dawg = Dawg::build({});
  REQUIRE(dawg.has_value());
  CHECK(dawg->total_insertions() == 0);
  CHECK(dawg->prefix_count({}) == 0);
  CHECK(dawg->generalize(0, 5).empty());
}

TEST_CASE("repeated insertion accumulates counts along one path") {
  // Oracle: replaying the multiset by hand gives count 3 on every vertex.
  const auto p = *parse_pattern("$Q , said $S .");
  auto dawg = Dawg::build({p, p, p});
  REQUIRE(dawg.has_value());
  CHECK(dawg->total_insertions() == 3);
  CHECK(dawg->prefix_count({quote_placeholder()}) == 3);
  CHECK(dawg->prefix_count({quote_placeholder(), literal(","), literal("said"),
                            speaker_placeholder(), literal(".")}) == 3);
  auto extracted = dawg->generalize(0, 5);
  REQUIRE(extracted.size() == 1);
  CHECK(to_string(extracted[0]) == "$Q , said $S .");
}

TEST_CASE("mixed orientation input is rejected") {
  auto mixed = Dawg::build(
      {*parse_pattern("$Q , said $S ."), *parse_pattern("Mr . $S proclaimed : $Q")});
  CHECK_FALSE(mixed.has_value());
}

TEST_CASE("invalid patterns are rejected by build") {
  CHECK_FALSE(Dawg::build({*parse_pattern("$Q said $S")}).has_value());
}

TEST_CASE("the worked example generalizes to exactly the six clustered patterns") {
  auto dawg = Dawg::build(worked_example_patterns());
  REQUIRE(dawg.has_value());
  auto generalized = dawg->generalize(2, 5);
  CHECK(texts_of(generalized) ==
        std::set<std::string>{
            "$Q , said $S .",
            "$Q , said writer $S .",
            "$Q , said * writer $S .",
            "$Q , announced * $S .",
            "$Q , said Mayor $S .",
            "$Q , said Mayor of * $S .",
        });
}

TEST_CASE("threshold zero is lossless") {
  auto patterns = worked_example_patterns();
  auto dawg = Dawg::build(patterns);
  REQUIRE(dawg.has_value());
  CHECK(texts_of(dawg->generalize(0, 5)) == texts_of(patterns));
}

TEST_CASE("threshold zero is lossless on random pattern sets") {
  Rng rng(555);
  const std::vector<std::string> words = {"said", "told", "Mr", ".", ",", "writer"};
  for (int round = 0; round < 40; ++round) {
    std::vector<Pattern> patterns;
    const std::size_t count = 1 + rng.next(8);
    for (std::size_t i = 0; i < count; ++i) {
      Pattern p;
      p.elements.push_back(quote_placeholder());
      const std::size_t mid = rng.next(4);
      for (std::size_t j = 0; j < mid; ++j) {
        if (rng.next(4) == 0) {
          p.elements.push_back(wildcard());
        } else {
          p.elements.push_back(
              literal(words[rng.next(static_cast<std::uint32_t>(words.size()))]));
        }
      }
      p.elements.push_back(speaker_placeholder());
      p.elements.push_back(
          literal(words[rng.next(static_cast<std::uint32_t>(words.size()))]));
      if (!is_valid(p)) continue;
      patterns.push_back(std::move(p));
    }
    if (patterns.empty()) continue;
    auto dawg = Dawg::build(patterns);
    REQUIRE(dawg.has_value());
    CHECK(texts_of(dawg->generalize(0, 5)) == texts_of(patterns));
  }
}

TEST_CASE("a threshold above every count wildcards all literals") {
  const std::vector<Pattern> toy = {
      *parse_pattern("$Q , said $S ."),
      *parse_pattern("$Q told $S"),            // drops: ends with $S
      *parse_pattern("$S said : $Q"),          // invalid anyway (starts with $S)
      *parse_pattern("$Q , $S said"),
      *parse_pattern("Mr . $S proclaimed : $Q"),
  };
  std::vector<Pattern> quote_first;
  std::vector<Pattern> speaker_first;
  for (const Pattern& p : toy) {
    if (!is_valid(p)) continue;
    (p.quote_first() ? quote_first : speaker_first).push_back(p);
  }
  for (const auto& side : {quote_first, speaker_first}) {
    if (side.empty()) continue;
    auto dawg = Dawg::build(side);
    REQUIRE(dawg.has_value());
    auto extracted = dawg->generalize(1000, 5);
    CHECK(texts_of(extracted) == oracle_all_wildcarded(side, 5));
  }
}

TEST_CASE("the wildcard-run cap discards long gaps") {
  const auto p = *parse_pattern("$Q one two three four five six $S end");
  auto dawg = Dawg::build({p});
  REQUIRE(dawg.has_value());
  // All six middle literals fall below the threshold; seven total between
  // placeholders exceed a run cap of 5... the "end" literal is also
  // wildcarded and trimmed, leaving "$Q * * * * * * $S" which is invalid
  // (ends with $S) after trimming, so nothing survives.
  CHECK(dawg->generalize(2, 5).empty());
  // With the cap raised the same path still dies on the boundary rule.
  CHECK(dawg->generalize(2, 10).empty());
}

TEST_CASE("speaker-first patterns survive a generalize round-trip") {
  const std::vector<Pattern> side = {
      *parse_pattern("Mr . $S proclaimed : $Q"),
      *parse_pattern("Mr . $S shouted : $Q"),
      *parse_pattern("Ms . $S proclaimed : $Q"),
  };
  auto dawg = Dawg::build(side);
  REQUIRE(dawg.has_value());
  CHECK(dawg->speaker_first());
  CHECK(texts_of(dawg->generalize(0, 5)) == texts_of(side));
  // Counting anchors at the quotation side: ": " and the verbs pool from
  // the right, "Mr"/"Ms" diverge near the far end.
  auto generalized = dawg->generalize(2, 5);
  for (const Pattern& p : generalized) CHECK(is_valid(p));
}

TEST_CASE("raising the threshold never adds literal diversity") {
  auto patterns = worked_example_patterns();
  auto dawg = Dawg::build(patterns);
  REQUIRE(dawg.has_value());
  auto distinct_literals = [](const std::vector<Pattern>& set) {
    std::set<std::string> literals;
    for (const Pattern& p : set) {
      for (const PatternToken& e : p.elements) {
        if (e.kind == ElementKind::literal) literals.insert(e.text);
      }
    }
    return literals;
  };
  std::size_t previous = distinct_literals(dawg->generalize(0, 5)).size();
  for (double n_min : {1.0, 2.0, 3.0, 5.0, 9.0, 100.0}) {
    const std::size_t current = distinct_literals(dawg->generalize(n_min, 5)).size();
    CHECK(current <= previous);
    previous = current;
  }
}

TEST_CASE("every output pattern matches at least one input pattern") {
  auto patterns = worked_example_patterns();
  auto dawg = Dawg::build(patterns);
  REQUIRE(dawg.has_value());
  for (double n_min : {0.0, 2.0, 3.0}) {
    for (const Pattern& out : dawg->generalize(n_min, 5)) {
      bool covered = false;
      for (const Pattern& in : patterns) {
        if (in.elements.size() != out.elements.size()) continue;
        bool all = true;
        for (std::size_t i = 0; i < in.elements.size(); ++i) {
          if (out.elements[i].kind == ElementKind::wildcard) {
            if (in.elements[i].kind != ElementKind::literal) all = false;
          } else if (!(out.elements[i] == in.elements[i])) {
            all = false;
          }
          if (!all) break;
        }
        if (all) {
          covered = true;
          break;
        }
      }
      CHECK(covered);
    }
  }
}

TEST_CASE("count conservation per depth") {
  auto patterns = worked_example_patterns();
  auto dawg = Dawg::build(patterns);
  REQUIRE(dawg.has_value());
  // Walk the trie via prefix_count: at depth 1 and 2 all nine insertions
  // pass through a single chain.
  CHECK(dawg->prefix_count({quote_placeholder()}) == 9);
  CHECK(dawg->prefix_count({quote_placeholder(), literal(",")}) == 9);
  // Depth 3 splits 7 + 2 = 9.
  const auto q = quote_placeholder();
  const auto c = literal(",");
  CHECK(dawg->prefix_count({q, c, literal("said")}) +
            dawg->prefix_count({q, c, literal("announced")}) ==
        9);
}

TEST_CASE("dot dump carries labels and counts") {
  auto dawg = Dawg::build(worked_example_patterns());
  REQUIRE(dawg.has_value());
  const std::string dot = dawg->to_dot();
  CHECK(dot.find("said [7]") != std::string::npos);
  CHECK(dot.find("announced [2]") != std::string::npos);
  CHECK(dot.find("digraph") != std::string::npos);
}
