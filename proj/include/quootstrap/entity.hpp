#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "quootstrap/corpus.hpp"

namespace quootstrap {

using SpeakerId = std::string;

struct AliasLoadReport {
  std::size_t lines_read = 0;
  std::size_t aliases = 0;
  std::size_t skipped = 0;           // malformed lines
  std::size_t dropped_no_canonical = 0;  // aliases whose id has no canonical row
};

/// Token-level alias dictionary. Lookup walks a trie over token surfaces;
/// aliases are stored case-preserved and matched exactly unless
/// case_insensitive folding is enabled at load time.
class AliasDictionary {
 public:
  AliasDictionary() { nodes_.emplace_back(); }

  /// Loads the TSV format `alias<TAB>speaker_id<TAB>is_canonical(0|1)`.
  /// Throws std::runtime_error when the file cannot be opened; malformed
  /// lines are skipped and counted. Aliases of ids that never get a
  /// canonical row are dropped after the load.
  static AliasDictionary load_tsv(const std::string& path, bool case_insensitive,
                                  AliasLoadReport* report = nullptr);

  void add_alias(const std::vector<std::string>& alias_tokens, const SpeakerId& id);
  void set_canonical(const SpeakerId& id, const std::vector<std::string>& name_tokens);
  void drop_entries_without_canonical(AliasLoadReport* report = nullptr);

  bool case_insensitive() const { return case_insensitive_; }
  void set_case_insensitive(bool v) { case_insensitive_ = v; }
  bool empty() const { return alias_count_ == 0; }
  std::size_t alias_count() const { return alias_count_; }

  const std::vector<std::string>* canonical_name(const SpeakerId& id) const;
  std::string canonical_name_string(const SpeakerId& id) const;

  /// Longest alias starting at `start` over `tokens`, stopping before
  /// `limit`. Returns (end index, candidate ids) or nullopt.
  std::optional<std::pair<std::size_t, const std::vector<SpeakerId>*>> longest_match(
      const std::vector<Token>& tokens, std::size_t start, std::size_t limit,
      const std::vector<bool>& blocked) const;

 private:
  struct Node {
    std::map<std::string, int> next;
    std::vector<SpeakerId> ids;  // sorted unique; non-empty marks a terminal
  };
  std::vector<Node> nodes_;
  std::map<SpeakerId, std::vector<std::string>> canonical_;
  bool case_insensitive_ = false;
  std::size_t alias_count_ = 0;

  std::string key(const std::string& surface) const;
};

struct EntityMention {
  std::size_t begin_token = 0;
  std::size_t end_token = 0;  // exclusive
  std::vector<std::string> surface;  // original-case token surfaces
  std::vector<SpeakerId> candidates; // sorted unique, non-empty
  std::optional<SpeakerId> resolved;
};

/// Leftmost-longest dictionary matching over the stream. Mentions never
/// overlap and are suppressed inside quotation spans.
std::vector<EntityMention> detect_mentions(const TokenStream& stream,
                                           const AliasDictionary& dict);

/// Expands a partial mention to a canonical identity: a unique candidate
/// wins outright; otherwise a unique unambiguous strict token-superstring
/// mention elsewhere in the document decides; otherwise nullopt (the
/// mention is discarded from attribution).
std::optional<SpeakerId> resolve_partial(const EntityMention& mention,
                                         const std::vector<EntityMention>& doc_mentions,
                                         const AliasDictionary& dict);

}  // namespace quootstrap
