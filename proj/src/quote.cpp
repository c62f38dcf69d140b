#include "quootstrap/quote.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace quootstrap {

namespace {

// Union-find over span indices.
struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

std::string joined(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace

std::string fold_token(const std::string& surface, bool case_insensitive) {
  if (!case_insensitive) return surface;
  std::string out = surface;
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> balanced_quote_pairs(
    const TokenStream& stream, std::size_t* stray_closes) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> open_stack;
  std::size_t stray = 0;
  for (std::size_t i = 0; i < stream.tokens.size(); ++i) {
    const TokenKind k = stream.tokens[i].kind;
    if (k == TokenKind::quote_open) {
      open_stack.push_back(i);
    } else if (k == TokenKind::quote_close) {
      if (open_stack.empty()) {
        ++stray;
        continue;
      }
      const std::size_t open = open_stack.back();
      open_stack.pop_back();
      // Only outermost pairs become spans; inner pairs are plain tokens
      // of the enclosing span.
      if (open_stack.empty()) pairs.emplace_back(open, i);
    }
  }
  if (stray_closes) *stray_closes = stray;
  return pairs;
}

std::vector<QuotationSpan> detect_quotations(const TokenStream& stream, int min_len,
                                             int max_len, QuoteDetectStats* stats) {
  std::vector<QuotationSpan> spans;
  std::size_t stray = 0;
  const auto pairs = balanced_quote_pairs(stream, &stray);
  std::size_t dropped = 0;
  for (const auto& [open, close] : pairs) {
    const std::size_t interior = close - open - 1;
    if (interior < static_cast<std::size_t>(min_len) ||
        interior > static_cast<std::size_t>(max_len)) {
      ++dropped;
      continue;
    }
    QuotationSpan span;
    span.doc_id = stream.doc_id;
    span.open_token = open;
    span.close_token = close;
    span.tokens.reserve(interior);
    for (std::size_t i = open + 1; i < close; ++i) {
      span.tokens.push_back(stream.tokens[i].surface);
    }
    spans.push_back(std::move(span));
  }
  if (stats) {
    stats->dropped_length += dropped;
    stats->stray_closes += stray;
    stats->balanced = stream.balanced_quotes;
  }
  return spans;
}

std::vector<QuotationCluster> cluster_quotations(const std::vector<QuotationSpan>& spans,
                                                 int group_len, bool case_insensitive) {
  DisjointSets sets(spans.size());

  // Run-sharing spans union through the first owner of each run key;
  // short spans (and everything when grouping is off) union by exact
  // folded text. Keys are the literal token strings, so there are no
  // hash-collision merges.
  std::map<std::string, std::size_t> run_owner;
  std::map<std::string, std::size_t> text_owner;
  for (std::size_t s = 0; s < spans.size(); ++s) {
    const auto& tokens = spans[s].tokens;
    std::vector<std::string> folded;
    folded.reserve(tokens.size());
    for (const auto& t : tokens) folded.push_back(fold_token(t, case_insensitive));

    const bool use_runs =
        group_len > 0 && tokens.size() >= static_cast<std::size_t>(group_len);
    if (use_runs) {
      const auto glen = static_cast<std::size_t>(group_len);
      for (std::size_t i = 0; i + glen <= folded.size(); ++i) {
        std::string key;
        for (std::size_t j = 0; j < glen; ++j) {
          key += folded[i + j];
          key.push_back('\x1f');
        }
        auto [it, inserted] = run_owner.emplace(std::move(key), s);
        if (!inserted) sets.unite(it->second, s);
      }
    } else {
      std::string key;
      for (const auto& t : folded) {
        key += t;
        key.push_back('\x1f');
      }
      auto [it, inserted] = text_owner.emplace(std::move(key), s);
      if (!inserted) sets.unite(it->second, s);
    }
  }

  // Components in order of their first member.
  std::map<std::size_t, std::vector<std::size_t>> components;
  for (std::size_t s = 0; s < spans.size(); ++s) {
    components[sets.find(s)].push_back(s);
  }

  std::vector<QuotationCluster> clusters;
  clusters.reserve(components.size());
  for (auto& [root, members] : components) {
    (void)root;
    QuotationCluster cluster;
    cluster.id = static_cast<ClusterId>(clusters.size());
    cluster.members = members;
    cluster.occurrence_count = members.size();
    const std::vector<std::string>* best = nullptr;
    std::string best_text;
    for (std::size_t m : members) {
      const auto& tokens = spans[m].tokens;
      std::string text = joined(tokens);
      if (!best || tokens.size() > best->size() ||
          (tokens.size() == best->size() && text < best_text)) {
        best = &tokens;
        best_text = std::move(text);
      }
    }
    if (best) cluster.canonical_tokens = *best;
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

}  // namespace quootstrap
