#include "quootstrap/entity.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include "quootstrap/quote.hpp"

namespace quootstrap {

namespace {

std::vector<std::string> tokenize_alias(const std::string& text) {
  Document doc;
  doc.text = text;
  TokenStream stream = tokenize(doc);
  std::vector<std::string> tokens;
  tokens.reserve(stream.tokens.size());
  for (const Token& t : stream.tokens) {
    if (t.kind == TokenKind::quote_open || t.kind == TokenKind::quote_close) {
      return {};  // quote delimiters cannot appear in a name
    }
    tokens.push_back(t.surface);
  }
  return tokens;
}

}  // namespace

std::string AliasDictionary::key(const std::string& surface) const {
  return fold_token(surface, case_insensitive_);
}

void AliasDictionary::add_alias(const std::vector<std::string>& alias_tokens,
                                const SpeakerId& id) {
  if (alias_tokens.empty()) return;
  int node = 0;
  for (const std::string& tok : alias_tokens) {
    auto [it, inserted] = nodes_[static_cast<std::size_t>(node)].next.emplace(
        key(tok), static_cast<int>(nodes_.size()));
    if (inserted) nodes_.emplace_back();
    node = it->second;
  }
  auto& ids = nodes_[static_cast<std::size_t>(node)].ids;
  if (ids.empty()) ++alias_count_;
  if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
    ids.push_back(id);
    std::sort(ids.begin(), ids.end());
  }
}

void AliasDictionary::set_canonical(const SpeakerId& id,
                                    const std::vector<std::string>& name_tokens) {
  canonical_.emplace(id, name_tokens);  // first canonical row wins
}

void AliasDictionary::drop_entries_without_canonical(AliasLoadReport* report) {
  for (Node& node : nodes_) {
    if (node.ids.empty()) continue;
    std::vector<SpeakerId> kept;
    for (const SpeakerId& id : node.ids) {
      if (canonical_.count(id)) {
        kept.push_back(id);
      } else if (report) {
        ++report->dropped_no_canonical;
      }
    }
    if (kept.empty() && !node.ids.empty()) --alias_count_;
    node.ids = std::move(kept);
  }
}

const std::vector<std::string>* AliasDictionary::canonical_name(
    const SpeakerId& id) const {
  auto it = canonical_.find(id);
  return it == canonical_.end() ? nullptr : &it->second;
}

std::string AliasDictionary::canonical_name_string(const SpeakerId& id) const {
  const auto* tokens = canonical_name(id);
  if (!tokens) return {};
  std::string out;
  for (std::size_t i = 0; i < tokens->size(); ++i) {
    if (i) out.push_back(' ');
    out += (*tokens)[i];
  }
  return out;
}

AliasDictionary AliasDictionary::load_tsv(const std::string& path, bool case_insensitive,
                                          AliasLoadReport* report) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open alias file: " + path);
  AliasDictionary dict;
  dict.case_insensitive_ = case_insensitive;
  AliasLoadReport local;
  std::string line;
  std::vector<std::pair<std::vector<std::string>, SpeakerId>> pending;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++local.lines_read;
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? std::string::npos
                                                : line.find('\t', tab1 + 1);
    if (tab1 == std::string::npos || tab2 == std::string::npos) {
      ++local.skipped;
      continue;
    }
    const std::string alias = line.substr(0, tab1);
    const std::string id = line.substr(tab1 + 1, tab2 - tab1 - 1);
    const std::string flag = line.substr(tab2 + 1);
    if (alias.empty() || id.empty() || (flag != "0" && flag != "1")) {
      ++local.skipped;
      continue;
    }
    std::vector<std::string> tokens = tokenize_alias(alias);
    if (tokens.empty()) {
      ++local.skipped;
      continue;
    }
    if (flag == "1") dict.set_canonical(id, tokens);
    pending.emplace_back(std::move(tokens), id);
  }
  for (auto& [tokens, id] : pending) dict.add_alias(tokens, id);
  local.aliases = dict.alias_count_;
  dict.drop_entries_without_canonical(&local);
  local.aliases = dict.alias_count_;
  if (report) *report = local;
  return dict;
}

std::optional<std::pair<std::size_t, const std::vector<SpeakerId>*>>
AliasDictionary::longest_match(const std::vector<Token>& tokens, std::size_t start,
                               std::size_t limit, const std::vector<bool>& blocked) const {
  int node = 0;
  std::optional<std::pair<std::size_t, const std::vector<SpeakerId>*>> best;
  for (std::size_t j = start; j < limit; ++j) {
    if (blocked[j]) break;
    const Token& t = tokens[j];
    if (t.kind == TokenKind::quote_open || t.kind == TokenKind::quote_close) break;
    const auto& next = nodes_[static_cast<std::size_t>(node)].next;
    auto it = next.find(key(t.surface));
    if (it == next.end()) break;
    node = it->second;
    const auto& ids = nodes_[static_cast<std::size_t>(node)].ids;
    if (!ids.empty()) best = std::make_pair(j + 1, &ids);
  }
  return best;
}

std::vector<EntityMention> detect_mentions(const TokenStream& stream,
                                           const AliasDictionary& dict) {
  std::vector<EntityMention> mentions;
  const std::size_t n = stream.tokens.size();
  std::vector<bool> blocked(n, false);
  for (const auto& [open, close] : balanced_quote_pairs(stream)) {
    for (std::size_t i = open; i <= close; ++i) blocked[i] = true;
  }
  std::size_t i = 0;
  while (i < n) {
    if (blocked[i]) {
      ++i;
      continue;
    }
    auto hit = dict.longest_match(stream.tokens, i, n, blocked);
    if (!hit) {
      ++i;
      continue;
    }
    EntityMention m;
    m.begin_token = i;
    m.end_token = hit->first;
    for (std::size_t j = i; j < hit->first; ++j) {
      m.surface.push_back(stream.tokens[j].surface);
    }
    m.candidates = *hit->second;
    if (m.candidates.size() == 1) m.resolved = m.candidates.front();
    mentions.push_back(std::move(m));
    i = hit->first;
  }
  return mentions;
}

std::optional<SpeakerId> resolve_partial(const EntityMention& mention,
                                         const std::vector<EntityMention>& doc_mentions,
                                         const AliasDictionary& dict) {
  if (mention.candidates.size() == 1) return mention.candidates.front();

  auto fold = [&](const std::vector<std::string>& tokens) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(fold_token(t, dict.case_insensitive()));
    return out;
  };
  const auto needle = fold(mention.surface);

  auto contains = [&](const std::vector<std::string>& hay) {
    if (hay.size() <= needle.size()) return false;  // strict superstring
    for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) {
      bool all = true;
      for (std::size_t j = 0; j < needle.size(); ++j) {
        if (hay[i + j] != needle[j]) {
          all = false;
          break;
        }
      }
      if (all) return true;
    }
    return false;
  };

  std::set<SpeakerId> expanded;
  for (const EntityMention& other : doc_mentions) {
    if (other.begin_token == mention.begin_token &&
        other.end_token == mention.end_token) {
      continue;
    }
    if (other.candidates.size() != 1) continue;  // must itself be unambiguous
    if (contains(fold(other.surface))) expanded.insert(other.candidates.front());
  }
  if (expanded.size() == 1) return *expanded.begin();
  return std::nullopt;  // zero or multiple possible matches: discard
}

}  // namespace quootstrap
