#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "quootstrap/bootstrap.hpp"
#include "quootstrap/eval.hpp"
#include "quootstrap/io.hpp"
#include "quootstrap/pipeline.hpp"

namespace testing {

namespace fs = std::filesystem;
using namespace quootstrap;

/// Scratch directory removed on destruction.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           ("quootstrap_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name, const std::string& content) const {
    const fs::path p = path / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string sub(const std::string& name) const { return (path / name).string(); }
};

inline std::string ndjson_record(const std::string& id, const std::string& site,
                                 const std::string& content) {
  nlohmann::json j;
  j["id"] = id;
  j["site"] = site;
  j["date"] = nullptr;
  j["content"] = content;
  return j.dump() + "\n";
}

/// The five-document corpus from the worked toy example.
inline std::string toy_corpus_ndjson() {
  std::string out;
  out += ndjson_record("d1", "alpha.example", "\"I love Quootstrap\", said Queequeg.");
  out += ndjson_record("d2", "beta.example", "\"Oops\", said Mr. Melville.");
  out += ndjson_record("d3", "gamma.example",
                       "\"I love Quootstrap\", said Mr. Queequeg.");
  out += ndjson_record("d4", "delta.example", "Queequeg, who appears in \"Moby Dick\",");
  out += ndjson_record("d5", "epsilon.example",
                       "\"I love Quootstrap\", said the queasy Queequeg.");
  return out;
}

inline std::string toy_aliases_tsv() { return "Queequeg\tQ1\t1\nMelville\tQ2\t1\n"; }

/// Toy options: single-token quotes allowed, support cutoff 1.
inline Options toy_options() {
  Options o;
  o.min_quote_len = 1;
  o.min_support = 1;
  o.seeds = {*parse_pattern("$Q , said $S .")};
  return o;
}

inline PreprocessedCorpus preprocess_ndjson(const std::string& ndjson,
                                            const std::string& aliases_tsv,
                                            const Options& options) {
  TempDir dir("pre");
  const std::string corpus_path = dir.file("corpus.ndjson", ndjson);
  const std::string alias_path = dir.file("aliases.tsv", aliases_tsv);
  IngestReport report;
  auto docs = ingest_file(corpus_path, options.max_line_bytes, report);
  auto dict = AliasDictionary::load_tsv(alias_path, options.alias_case_insensitive);
  auto corpus = preprocess(std::move(docs), std::move(dict), options);
  corpus.ingest = report;
  return corpus;
}

inline std::vector<std::string> token_surfaces(const TokenStream& s) {
  std::vector<std::string> out;
  for (const Token& t : s.tokens) out.push_back(t.surface);
  return out;
}

inline std::vector<TokenKind> token_kinds(const TokenStream& s) {
  std::vector<TokenKind> out;
  for (const Token& t : s.tokens) out.push_back(t.kind);
  return out;
}

inline AnnotatedStream units_of(std::vector<Unit> units) {
  AnnotatedStream s;
  s.doc_id = "test";
  s.units = std::move(units);
  return s;
}

inline Unit tok(std::string text) {
  Unit u;
  u.kind = Unit::Kind::token;
  u.text = std::move(text);
  return u;
}

inline Unit qunit(ClusterId cluster) {
  Unit u;
  u.kind = Unit::Kind::quote;
  u.cluster = cluster;
  return u;
}

inline Unit sunit(SpeakerId speaker) {
  Unit u;
  u.kind = Unit::Kind::speaker;
  u.speaker = std::move(speaker);
  return u;
}

/// Independent single-pattern alignment check used to re-verify match
/// results; deliberately written as the dumbest possible loop.
inline bool naive_match_at(const Pattern& p, const AnnotatedStream& s, std::size_t at) {
  if (at + p.elements.size() > s.units.size()) return false;
  for (std::size_t j = 0; j < p.elements.size(); ++j) {
    const Unit& u = s.units[at + j];
    const PatternToken& e = p.elements[j];
    switch (e.kind) {
      case ElementKind::literal:
        if (u.kind != Unit::Kind::token || u.text != e.text) return false;
        break;
      case ElementKind::wildcard:
        if (u.kind != Unit::Kind::token) return false;
        break;
      case ElementKind::quote:
        if (u.kind != Unit::Kind::quote) return false;
        break;
      case ElementKind::speaker:
        if (u.kind != Unit::Kind::speaker) return false;
        break;
    }
  }
  return true;
}

/// Deterministic PRNG for property fixtures; raw modulo keeps the draws
/// identical across standard libraries.
struct Rng {
  std::mt19937 engine;
  explicit Rng(std::uint32_t seed) : engine(seed) {}
  std::uint32_t next(std::uint32_t bound) { return engine() % bound; }
  double unit() { return static_cast<double>(engine() % 1000000) / 1000000.0; }
};

}  // namespace testing
