#include "quootstrap/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace quootstrap {

bool Pattern::quote_first() const {
  for (const PatternToken& e : elements) {
    if (e.kind == ElementKind::quote) return true;
    if (e.kind == ElementKind::speaker) return false;
  }
  return true;
}

namespace {
// Longest allowed run of consecutive wildcards in a valid pattern.
constexpr int kMaxWildcardRun = 5;
}  // namespace

std::vector<std::string> validate(const Pattern& p) {
  std::vector<std::string> violations;
  std::size_t quotes = 0;
  std::size_t speakers = 0;
  int run = 0;
  int longest_run = 0;
  for (const PatternToken& e : p.elements) {
    if (e.kind == ElementKind::quote) ++quotes;
    if (e.kind == ElementKind::speaker) ++speakers;
    if (e.kind == ElementKind::literal && e.text.empty()) {
      violations.push_back("empty literal element");
    }
    run = e.kind == ElementKind::wildcard ? run + 1 : 0;
    longest_run = std::max(longest_run, run);
  }
  if (longest_run > kMaxWildcardRun) {
    violations.push_back("more than " + std::to_string(kMaxWildcardRun) +
                         " consecutive wildcards");
  }
  if (p.elements.empty()) {
    violations.push_back("empty pattern");
    return violations;
  }
  if (quotes != 1) violations.push_back("must contain exactly one quotation placeholder");
  if (speakers != 1) violations.push_back("must contain exactly one speaker placeholder");
  const ElementKind first = p.elements.front().kind;
  const ElementKind last = p.elements.back().kind;
  if (first == ElementKind::wildcard) violations.push_back("starts with a wildcard");
  if (last == ElementKind::wildcard) violations.push_back("ends with a wildcard");
  if (first == ElementKind::speaker) {
    violations.push_back("starts with the speaker placeholder");
  }
  if (last == ElementKind::speaker) {
    violations.push_back("ends with the speaker placeholder");
  }
  return violations;
}

std::string to_string(const Pattern& p) {
  std::string out;
  for (std::size_t i = 0; i < p.elements.size(); ++i) {
    if (i) out.push_back(' ');
    const PatternToken& e = p.elements[i];
    switch (e.kind) {
      case ElementKind::literal: out += e.text; break;
      case ElementKind::wildcard: out.push_back('*'); break;
      case ElementKind::quote: out += "$Q"; break;
      case ElementKind::speaker: out += "$S"; break;
    }
  }
  return out;
}

std::optional<Pattern> parse_pattern(std::string_view text, int origin_iteration) {
  Pattern p;
  p.origin_iteration = origin_iteration;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    if (tok == "$Q") {
      p.elements.push_back(quote_placeholder());
    } else if (tok == "$S") {
      p.elements.push_back(speaker_placeholder());
    } else if (tok == "*") {
      p.elements.push_back(wildcard());
    } else {
      p.elements.push_back(literal(tok));
    }
  }
  if (p.elements.empty()) return std::nullopt;
  return p;
}

double pattern_precision(const PatternStats& stats, bool seed_origin) {
  const double total = stats.w_plus + stats.w_minus;
  if (total <= 0) return seed_origin ? 1.0 : 0.0;
  return stats.w_plus / total;
}

double match_weight(int quote_length_tokens, double tau) {
  return std::tanh(static_cast<double>(quote_length_tokens) / tau);
}

namespace {

// True when `e` accepts the unit.
bool element_matches(const PatternToken& e, const Unit& u) {
  switch (e.kind) {
    case ElementKind::literal:
      return u.kind == Unit::Kind::token && u.text == e.text;
    case ElementKind::wildcard:
      return u.kind == Unit::Kind::token;  // placeholder units are excluded
    case ElementKind::quote:
      return u.kind == Unit::Kind::quote;
    case ElementKind::speaker:
      return u.kind == Unit::Kind::speaker;
  }
  return false;
}

}  // namespace

std::vector<MatchResult> match(const Pattern& p, const AnnotatedStream& s) {
  std::vector<MatchResult> out;
  const std::size_t len = p.elements.size();
  if (len == 0 || s.units.size() < len) return out;
  std::size_t i = 0;
  while (i + len <= s.units.size()) {
    bool ok = true;
    MatchResult r;
    for (std::size_t j = 0; j < len; ++j) {
      const Unit& u = s.units[i + j];
      if (!element_matches(p.elements[j], u)) {
        ok = false;
        break;
      }
      if (p.elements[j].kind == ElementKind::quote) r.cluster = u.cluster;
      if (p.elements[j].kind == ElementKind::speaker) r.speaker = u.speaker;
    }
    if (ok) {
      r.begin = i;
      r.end = i + len;
      out.push_back(std::move(r));
      i += len;  // left-to-right scan, non-overlapping
    } else {
      ++i;
    }
  }
  return out;
}

MatchTrie::MatchTrie(const std::vector<Pattern>& patterns) {
  nodes_.emplace_back();
  pattern_count_ = patterns.size();
  for (std::size_t pi = 0; pi < patterns.size(); ++pi) {
    int node = 0;
    for (const PatternToken& e : patterns[pi].elements) {
      auto [it, inserted] =
          nodes_[static_cast<std::size_t>(node)].next.emplace(e, static_cast<int>(nodes_.size()));
      if (inserted) nodes_.emplace_back();
      node = it->second;
    }
    nodes_[static_cast<std::size_t>(node)].terminals.push_back(static_cast<int>(pi));
  }
}

std::vector<MatchTrie::Hit> MatchTrie::match_stream(const AnnotatedStream& s) const {
  std::vector<Hit> all;
  const std::size_t n = s.units.size();

  // DFS aligned at every start; a literal, a wildcard, and a placeholder
  // branch can all be viable for the same unit.
  struct Frame {
    int node;
    std::size_t pos;
    ClusterId cluster;
    const SpeakerId* speaker;
  };
  std::vector<Frame> stack;
  for (std::size_t start = 0; start < n; ++start) {
    stack.push_back({0, start, -1, nullptr});
    while (!stack.empty()) {
      Frame f = stack.back();
      stack.pop_back();
      const Node& node = nodes_[static_cast<std::size_t>(f.node)];
      for (int pattern : node.terminals) {
        Hit h;
        h.pattern = pattern;
        h.begin = start;
        h.end = f.pos;
        h.cluster = f.cluster;
        if (f.speaker) h.speaker = *f.speaker;
        all.push_back(std::move(h));
      }
      if (f.pos >= n) continue;
      const Unit& u = s.units[f.pos];
      if (u.kind == Unit::Kind::token) {
        auto lit = node.next.find(PatternToken{ElementKind::literal, u.text});
        if (lit != node.next.end()) {
          stack.push_back({lit->second, f.pos + 1, f.cluster, f.speaker});
        }
        auto wild = node.next.find(wildcard());
        if (wild != node.next.end()) {
          stack.push_back({wild->second, f.pos + 1, f.cluster, f.speaker});
        }
      } else if (u.kind == Unit::Kind::quote) {
        auto q = node.next.find(quote_placeholder());
        if (q != node.next.end()) {
          stack.push_back({q->second, f.pos + 1, u.cluster, f.speaker});
        }
      } else {
        auto sp = node.next.find(speaker_placeholder());
        if (sp != node.next.end()) {
          stack.push_back({sp->second, f.pos + 1, f.cluster, &u.speaker});
        }
      }
    }
  }

  // Per pattern, keep the left-to-right non-overlapping subset, matching
  // the single-pattern scan semantics.
  std::stable_sort(all.begin(), all.end(), [](const Hit& a, const Hit& b) {
    if (a.pattern != b.pattern) return a.pattern < b.pattern;
    if (a.begin != b.begin) return a.begin < b.begin;
    return a.end < b.end;
  });
  std::vector<Hit> kept;
  kept.reserve(all.size());
  int current = -1;
  std::size_t last_end = 0;
  for (Hit& h : all) {
    if (h.pattern != current) {
      current = h.pattern;
      last_end = 0;
    }
    if (h.begin >= last_end) {
      last_end = h.end;
      kept.push_back(std::move(h));
    }
  }
  std::stable_sort(kept.begin(), kept.end(), [](const Hit& a, const Hit& b) {
    if (a.begin != b.begin) return a.begin < b.begin;
    if (a.end != b.end) return a.end < b.end;
    return a.pattern < b.pattern;
  });
  return kept;
}

}  // namespace quootstrap
