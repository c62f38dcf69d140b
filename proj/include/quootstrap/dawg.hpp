#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quootstrap/pattern.hpp"

namespace quootstrap {

/// Counted word graph over candidate patterns, used to generalize
/// infrequent tokens into wildcards.
///
/// Structure: a prefix trie whose vertices carry the number of inserted
/// patterns traversing them. Patterns whose speaker placeholder precedes
/// the quotation placeholder are stored reversed, so paths always grow
/// outward from the quotation; extraction un-reverses them.
///
/// For generalization, vertices with identical labels and identical
/// suffix subtrees are pooled (the word-graph's shared suffixes), and a
/// vertex is wildcarded when its pooled traversal count falls below
/// n_min. Placeholder vertices are never wildcarded.
class Dawg {
 public:
  /// Builds from validated patterns of uniform placeholder orientation.
  /// Returns nullopt on invalid or mixed-orientation input.
  static std::optional<Dawg> build(const std::vector<Pattern>& patterns);

  /// Wildcard-generalizes and extracts the pattern set: DFS over all
  /// root-to-terminal paths, leading/trailing wildcards trimmed, paths
  /// with more than max_wildcard_run consecutive wildcards discarded,
  /// invalid results dropped, exact duplicates removed. A pattern that
  /// only differs from another extracted pattern at freshly introduced
  /// wildcard positions is dropped as an instance of the more general
  /// one. Output is sorted by pattern text.
  std::vector<Pattern> generalize(double n_min, int max_wildcard_run) const;

  std::size_t total_insertions() const { return total_; }
  bool speaker_first() const { return speaker_first_; }
  std::size_t vertex_count() const { return vertices_.size(); }

  /// Trie prefix count of the vertex reached by `prefix` (in insertion
  /// orientation), or 0 when no such path exists. Root count equals the
  /// total number of insertions.
  std::size_t prefix_count(const std::vector<PatternToken>& prefix) const;

  /// Graphviz dump with `label [count]` vertices.
  std::string to_dot() const;

 private:
  struct Vertex {
    PatternToken label;
    std::size_t count = 0;     // insertions traversing this vertex
    std::size_t terminal = 0;  // insertions ending here
    std::map<PatternToken, int> children;
  };
  std::vector<Vertex> vertices_;  // [0] is the root (label unused)
  std::size_t total_ = 0;
  bool speaker_first_ = false;

  void insert(const std::vector<PatternToken>& seq);
};

}  // namespace quootstrap
