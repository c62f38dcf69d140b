#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace quootstrap {

/// One deduplicated news article. `text` holds the article body with
/// control characters already replaced by spaces; token character spans
/// index into it.
struct Document {
  std::string doc_id;
  std::string site;
  std::optional<std::string> published;  // ISO-8601, passed through untouched
  std::string text;
};

enum class TokenKind : std::uint8_t { word, punct, quote_open, quote_close };

struct CharSpan {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
};

struct Token {
  std::string surface;
  TokenKind kind = TokenKind::word;
  CharSpan span;
};

struct TokenStream {
  std::string doc_id;
  std::vector<Token> tokens;
  // False when quote delimiters do not pair up after normalization.
  // Quotations are still detected within the balanced prefix; trailing
  // unmatched opens are ignored downstream.
  bool balanced_quotes = true;
};

struct IngestReport {
  std::size_t lines_read = 0;
  std::size_t documents = 0;
  std::size_t duplicates = 0;     // byte-identical text, first wins
  std::size_t duplicate_ids = 0;  // same doc_id seen again, skipped
  std::size_t malformed = 0;      // unparsable / missing fields / empty text
  std::size_t oversized = 0;      // line above the size limit, skipped
};

/// Replaces C0/C1 control characters with spaces.
std::string strip_controls(std::string_view raw);

/// Reads NDJSON records ({"id","site","date","content"}) from a stream.
/// Malformed or oversized lines are skipped and counted; among documents
/// with byte-identical text the first occurrence wins and input order is
/// preserved.
std::vector<Document> ingest_ndjson(std::istream& in, std::size_t max_line_bytes,
                                    IngestReport& report);

/// Same as ingest_ndjson but from a file path. Throws std::runtime_error
/// when the file cannot be opened.
std::vector<Document> ingest_file(const std::string& path, std::size_t max_line_bytes,
                                  IngestReport& report);

/// Deterministic rule-based tokenizer. Words are maximal runs of
/// non-separator characters, punctuation characters become single-char
/// tokens, and all configured quote-delimiter variants are normalized to
/// quote_open / quote_close. Ambiguous straight double quotes alternate
/// open/close per document.
TokenStream tokenize(const Document& doc);

}  // namespace quootstrap
