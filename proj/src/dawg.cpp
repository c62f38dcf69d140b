#include "quootstrap/dawg.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace quootstrap {

namespace {

std::string label_text(const PatternToken& t) {
  switch (t.kind) {
    case ElementKind::literal: return t.text;
    case ElementKind::wildcard: return "*";
    case ElementKind::quote: return "$Q";
    case ElementKind::speaker: return "$S";
  }
  return {};
}

}  // namespace

void Dawg::insert(const std::vector<PatternToken>& seq) {
  int node = 0;
  ++total_;
  ++vertices_[0].count;
  for (const PatternToken& e : seq) {
    auto [it, inserted] = vertices_[static_cast<std::size_t>(node)].children.emplace(
        e, static_cast<int>(vertices_.size()));
    if (inserted) {
      Vertex v;
      v.label = e;
      vertices_.push_back(std::move(v));
    }
    node = it->second;
    ++vertices_[static_cast<std::size_t>(node)].count;
  }
  ++vertices_[static_cast<std::size_t>(node)].terminal;
}

std::optional<Dawg> Dawg::build(const std::vector<Pattern>& patterns) {
  Dawg d;
  d.vertices_.emplace_back();
  bool oriented = false;
  for (const Pattern& p : patterns) {
    if (!is_valid(p)) return std::nullopt;
    const bool speaker_first = !p.quote_first();
    if (!oriented) {
      d.speaker_first_ = speaker_first;
      oriented = true;
    } else if (speaker_first != d.speaker_first_) {
      return std::nullopt;  // mixed orientation fragments the counts
    }
    std::vector<PatternToken> seq = p.elements;
    if (speaker_first) std::reverse(seq.begin(), seq.end());
    d.insert(seq);
  }
  return d;
}

std::size_t Dawg::prefix_count(const std::vector<PatternToken>& prefix) const {
  int node = 0;
  for (const PatternToken& e : prefix) {
    const auto& children = vertices_[static_cast<std::size_t>(node)].children;
    auto it = children.find(e);
    if (it == children.end()) return 0;
    node = it->second;
  }
  return vertices_[static_cast<std::size_t>(node)].count;
}

std::vector<Pattern> Dawg::generalize(double n_min, int max_wildcard_run) const {
  // Pool traversal counts across vertices with identical labels and
  // identical suffix subtrees (the word-graph's shared suffixes), so a
  // token kept by several branches is counted once per traversal, not
  // once per branch.
  std::vector<int> signature(vertices_.size(), -1);
  std::map<std::string, int> intern;
  std::vector<std::size_t> pooled;

  std::function<int(int)> sign = [&](int idx) -> int {
    const Vertex& v = vertices_[static_cast<std::size_t>(idx)];
    std::string key;
    key += static_cast<char>('0' + static_cast<int>(v.label.kind));
    key += v.label.text;
    key += v.terminal ? "\x01T" : "\x01F";
    for (const auto& [label, child] : v.children) {
      key += '\x02';
      key += std::to_string(sign(child));
    }
    auto [it, inserted] = intern.emplace(std::move(key), static_cast<int>(pooled.size()));
    if (inserted) pooled.push_back(0);
    signature[static_cast<std::size_t>(idx)] = it->second;
    pooled[static_cast<std::size_t>(it->second)] += v.count;
    return it->second;
  };
  for (const auto& [label, child] : vertices_[0].children) {
    (void)label;
    sign(child);
  }

  struct Extracted {
    std::vector<PatternToken> elements;
    std::vector<bool> introduced;  // wildcard freshly inserted here
  };
  std::vector<Extracted> raw;

  std::vector<PatternToken> path;
  std::vector<bool> introduced;
  std::function<void(int)> dfs = [&](int idx) {
    const Vertex& v = vertices_[static_cast<std::size_t>(idx)];
    const bool wildcarded =
        v.label.kind == ElementKind::literal &&
        static_cast<double>(pooled[static_cast<std::size_t>(
            signature[static_cast<std::size_t>(idx)])]) < n_min;
    path.push_back(wildcarded ? wildcard() : v.label);
    introduced.push_back(wildcarded);
    if (v.terminal) raw.push_back({path, introduced});
    for (const auto& [label, child] : v.children) {
      (void)label;
      dfs(child);
    }
    path.pop_back();
    introduced.pop_back();
  };
  for (const auto& [label, child] : vertices_[0].children) {
    (void)label;
    dfs(child);
  }

  // Trim, enforce the wildcard-run cap, restore orientation, validate.
  struct Candidate {
    Pattern pattern;
    std::vector<bool> introduced;
  };
  std::map<std::string, Candidate> unique;
  for (Extracted& e : raw) {
    std::size_t lo = 0;
    std::size_t hi = e.elements.size();
    while (lo < hi && e.elements[lo].kind == ElementKind::wildcard) ++lo;
    while (hi > lo && e.elements[hi - 1].kind == ElementKind::wildcard) --hi;
    if (lo >= hi) continue;
    Candidate c;
    c.pattern.elements.assign(e.elements.begin() + static_cast<std::ptrdiff_t>(lo),
                              e.elements.begin() + static_cast<std::ptrdiff_t>(hi));
    c.introduced.assign(e.introduced.begin() + static_cast<std::ptrdiff_t>(lo),
                        e.introduced.begin() + static_cast<std::ptrdiff_t>(hi));
    if (speaker_first_) {
      std::reverse(c.pattern.elements.begin(), c.pattern.elements.end());
      std::reverse(c.introduced.begin(), c.introduced.end());
    }
    int run = 0;
    int longest = 0;
    for (const PatternToken& t : c.pattern.elements) {
      run = t.kind == ElementKind::wildcard ? run + 1 : 0;
      longest = std::max(longest, run);
    }
    if (longest > max_wildcard_run) continue;
    if (!is_valid(c.pattern)) continue;
    auto it = unique.find(to_string(c.pattern));
    if (it == unique.end()) {
      unique.emplace(to_string(c.pattern), std::move(c));
    } else {
      // Same pattern reached along several paths: a position licenses
      // subsumption if any path introduced its wildcard.
      for (std::size_t i = 0; i < it->second.introduced.size(); ++i) {
        it->second.introduced[i] = it->second.introduced[i] || c.introduced[i];
      }
    }
  }

  // Drop patterns that are instances of an extracted generalization:
  // equal length, equal everywhere except at freshly introduced
  // wildcards of the more general pattern.
  auto subsumes = [](const Candidate& g, const Candidate& p) {
    if (g.pattern.elements.size() != p.pattern.elements.size()) return false;
    bool strict = false;
    for (std::size_t i = 0; i < g.pattern.elements.size(); ++i) {
      if (g.pattern.elements[i] == p.pattern.elements[i]) continue;
      if (g.introduced[i] && p.pattern.elements[i].kind == ElementKind::literal) {
        strict = true;
        continue;
      }
      return false;
    }
    return strict;
  };

  std::vector<Pattern> out;
  for (const auto& [text, cand] : unique) {
    (void)text;
    bool dropped = false;
    for (const auto& [otext, other] : unique) {
      (void)otext;
      if (&other != &cand && subsumes(other, cand)) {
        dropped = true;
        break;
      }
    }
    if (!dropped) out.push_back(cand.pattern);
  }
  return out;
}

std::string Dawg::to_dot() const {
  std::ostringstream out;
  out << "digraph dawg {\n  rankdir=LR;\n";
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Vertex& v = vertices_[i];
    if (i == 0) {
      out << "  n0 [label=\"root [" << v.count << "]\"];\n";
    } else {
      out << "  n" << i << " [label=\"" << label_text(v.label) << " [" << v.count
          << "]\"" << (v.terminal ? ", peripheries=2" : "") << "];\n";
    }
  }
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    for (const auto& [label, child] : vertices_[i].children) {
      (void)label;
      out << "  n" << i << " -> n" << child << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace quootstrap
