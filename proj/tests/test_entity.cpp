#include <set>

#include "doctest.h"
#include "helpers.hpp"

using namespace quootstrap;
using namespace testing;

namespace {

TokenStream stream_of(const std::string& text) {
  Document doc;
  doc.doc_id = "doc";
  doc.text = text;
  return tokenize(doc);
}

AliasDictionary load_dict(const std::string& tsv, bool fold = false,
                          AliasLoadReport* report = nullptr) {
  TempDir dir("alias");
  return AliasDictionary::load_tsv(dir.file("aliases.tsv", tsv), fold, report);
}

// All-substrings dictionary lookup oracle for leftmost-longest checking.
std::vector<std::pair<std::size_t, std::size_t>> oracle_mentions(
    const TokenStream& s, const std::set<std::vector<std::string>>& aliases) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t i = 0;
  while (i < s.tokens.size()) {
    std::size_t best = 0;
    for (std::size_t len = 1; i + len <= s.tokens.size(); ++len) {
      std::vector<std::string> window;
      for (std::size_t j = 0; j < len; ++j) window.push_back(s.tokens[i + j].surface);
      if (aliases.count(window)) best = len;
    }
    if (best > 0) {
      out.emplace_back(i, i + best);
      i += best;
    } else {
      ++i;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("alias load collapses duplicates and unions ids") {
  AliasLoadReport report;
  auto dict = load_dict(
      "John McCain\tQ123\t1\n"
      "McCain\tQ123\t0\n"
      "McCain\tQ123\t0\n"
      "McCain\tQ999\t0\n"
      "Shadow Q999\tQ999\t1\n",
      false, &report);
  const TokenStream s = stream_of("said McCain today");
  auto mentions = detect_mentions(s, dict);
  REQUIRE(mentions.size() == 1);
  CHECK(mentions[0].candidates == std::vector<SpeakerId>{"Q123", "Q999"});
}

TEST_CASE("empty alias file yields an empty dictionary and no mentions") {
  auto dict = load_dict("");
  CHECK(dict.empty());
  auto mentions = detect_mentions(stream_of("anyone could say anything"), dict);
  CHECK(mentions.empty());
}

TEST_CASE("aliases without a canonical row are dropped with a warning count") {
  AliasLoadReport report;
  auto dict = load_dict("Ghost Name\tQ404\t0\n", false, &report);
  CHECK(report.dropped_no_canonical == 1);
  CHECK(detect_mentions(stream_of("Ghost Name spoke"), dict).empty());
}

TEST_CASE("malformed alias lines are skipped") {
  AliasLoadReport report;
  auto dict = load_dict("no tabs here\nJohn\tQ1\t1\nbad\tQ2\t7\n", false, &report);
  CHECK(report.skipped == 2);
  CHECK(dict.alias_count() == 1);
}

TEST_CASE("leftmost-longest matching agrees with the all-substrings oracle") {
  auto dict = load_dict(
      "John McCain\tQ1\t1\n"
      "McCain\tQ1\t0\n"
      "John\tQ7\t1\n");
  const TokenStream s = stream_of("said John McCain yesterday");
  auto mentions = detect_mentions(s, dict);
  REQUIRE(mentions.size() == 1);
  CHECK(mentions[0].surface == std::vector<std::string>{"John", "McCain"});

  auto expected = oracle_mentions(
      s, {{"John", "McCain"}, {"McCain"}, {"John"}});
  REQUIRE(expected.size() == 1);
  CHECK(mentions[0].begin_token == expected[0].first);
  CHECK(mentions[0].end_token == expected[0].second);
}

TEST_CASE("no alias in the stream means no mentions") {
  auto dict = load_dict("Queequeg\tQ1\t1\n");
  CHECK(detect_mentions(stream_of("nothing relevant appears here"), dict).empty());
}

TEST_CASE("single-token mention is detected") {
  auto dict = load_dict("Queequeg\tQ1\t1\n");
  auto mentions = detect_mentions(stream_of("said Queequeg."), dict);
  REQUIRE(mentions.size() == 1);
  CHECK(mentions[0].surface == std::vector<std::string>{"Queequeg"});
  REQUIRE(mentions[0].resolved.has_value());
  CHECK(*mentions[0].resolved == "Q1");
}

TEST_CASE("mentions inside quotation spans are suppressed") {
  auto dict = load_dict("Queequeg\tQ1\t1\n");
  auto mentions = detect_mentions(stream_of("\"Queequeg is great\" we heard"), dict);
  CHECK(mentions.empty());
}

TEST_CASE("mentions never overlap") {
  auto dict = load_dict(
      "Ann Bee\tQ1\t1\n"
      "Bee Cee\tQ2\t1\n");
  auto mentions = detect_mentions(stream_of("Ann Bee Cee spoke"), dict);
  REQUIRE(mentions.size() == 1);  // leftmost-longest takes Ann Bee
  CHECK(mentions[0].surface == std::vector<std::string>{"Ann", "Bee"});
  for (std::size_t i = 1; i < mentions.size(); ++i) {
    CHECK(mentions[i - 1].end_token <= mentions[i].begin_token);
  }
}

TEST_CASE("detection is deterministic") {
  auto dict = load_dict("John McCain\tQ1\t1\nMcCain\tQ1\t0\n");
  const TokenStream s = stream_of("McCain met John McCain and McCain left");
  auto first = detect_mentions(s, dict);
  auto second = detect_mentions(s, dict);
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].begin_token == second[i].begin_token);
    CHECK(first[i].candidates == second[i].candidates);
  }
}

TEST_CASE("partial mention expands through a unique superstring") {
  auto dict = load_dict(
      "John McCain\tQ_john\t1\n"
      "Cindy McCain\tQ_cindy\t1\n"
      "McCain\tQ_john\t0\n"
      "McCain\tQ_cindy\t0\n");
  const TokenStream s = stream_of("John McCain spoke. Later McCain added more.");
  auto mentions = detect_mentions(s, dict);
  REQUIRE(mentions.size() == 2);
  const EntityMention& partial = mentions[1];
  REQUIRE(partial.candidates.size() == 2);
  auto resolved = resolve_partial(partial, mentions, dict);
  REQUIRE(resolved.has_value());
  CHECK(*resolved == "Q_john");
}

TEST_CASE("two distinct superstrings discard the mention") {
  auto dict = load_dict(
      "John McCain\tQ_john\t1\n"
      "Cindy McCain\tQ_cindy\t1\n"
      "McCain\tQ_john\t0\n"
      "McCain\tQ_cindy\t0\n");
  const TokenStream s =
      stream_of("John McCain and Cindy McCain arrived. McCain spoke.");
  auto mentions = detect_mentions(s, dict);
  REQUIRE(mentions.size() == 3);
  auto resolved = resolve_partial(mentions[2], mentions, dict);
  CHECK_FALSE(resolved.has_value());
}

TEST_CASE("unambiguous aliases resolve regardless of context") {
  auto dict = load_dict("Queequeg\tQ1\t1\n");
  auto mentions = detect_mentions(stream_of("Queequeg alone"), dict);
  REQUIRE(mentions.size() == 1);
  auto resolved = resolve_partial(mentions[0], mentions, dict);
  REQUIRE(resolved.has_value());
  CHECK(*resolved == "Q1");
}

TEST_CASE("resolution soundness: result comes from candidates or superstring ids") {
  auto dict = load_dict(
      "Major Tom\tQ_tom\t1\n"
      "Tom\tQ_tom\t0\n"
      "Tom\tQ_thumb\t0\n"
      "Tom Thumb\tQ_thumb\t1\n");
  const TokenStream s = stream_of("Major Tom called while Tom waited");
  auto mentions = detect_mentions(s, dict);
  for (const EntityMention& m : mentions) {
    auto resolved = resolve_partial(m, mentions, dict);
    if (!resolved) continue;
    std::set<SpeakerId> allowed(m.candidates.begin(), m.candidates.end());
    for (const EntityMention& other : mentions) {
      if (other.candidates.size() == 1) allowed.insert(other.candidates.front());
    }
    CHECK(allowed.count(*resolved) == 1);
  }
}

TEST_CASE("token-level superstring test does not match inside a word") {
  auto dict = load_dict(
      "McCain\tQ_mc\t1\n"
      "Cain\tQ_cain\t0\n"
      "Abel Cain\tQ_cain\t1\n"
      "Cain\tQ_other\t0\n"
      "Old Cain\tQ_other\t1\n");
  // "Cain" is ambiguous; "McCain" is a single token, not a superstring
  // of the token sequence [Cain].
  const TokenStream s = stream_of("McCain spoke before Cain did");
  auto mentions = detect_mentions(s, dict);
  REQUIRE(mentions.size() == 2);
  CHECK_FALSE(resolve_partial(mentions[1], mentions, dict).has_value());
}

TEST_CASE("alias matching honors the case switch") {
  const std::string tsv = "mark\tQ1\t1\n";
  auto exact = load_dict(tsv, false);
  auto folded = load_dict(tsv, true);
  CHECK(detect_mentions(stream_of("Mark spoke"), exact).empty());
  CHECK(detect_mentions(stream_of("Mark spoke"), folded).size() == 1);
}
