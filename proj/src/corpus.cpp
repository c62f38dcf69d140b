#include "quootstrap/corpus.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

namespace quootstrap {

namespace {

struct DecodedChar {
  char32_t cp = 0;
  std::size_t len = 1;
};

// Tolerant UTF-8 decode: malformed bytes come back as single-byte
// codepoints so offsets never desynchronize.
DecodedChar decode_utf8(std::string_view s, std::size_t i) {
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
  unsigned char c = byte(i);
  if (c < 0x80) return {c, 1};
  auto cont = [&](std::size_t k) {
    return k < s.size() && (byte(k) & 0xC0) == 0x80;
  };
  if ((c & 0xE0) == 0xC0 && cont(i + 1)) {
    return {static_cast<char32_t>(((c & 0x1Fu) << 6) | (byte(i + 1) & 0x3Fu)), 2};
  }
  if ((c & 0xF0) == 0xE0 && cont(i + 1) && cont(i + 2)) {
    return {static_cast<char32_t>(((c & 0x0Fu) << 12) | ((byte(i + 1) & 0x3Fu) << 6) |
                                  (byte(i + 2) & 0x3Fu)),
            3};
  }
  if ((c & 0xF8) == 0xF0 && cont(i + 1) && cont(i + 2) && cont(i + 3)) {
    return {static_cast<char32_t>(((c & 0x07u) << 18) | ((byte(i + 1) & 0x3Fu) << 12) |
                                  ((byte(i + 2) & 0x3Fu) << 6) | (byte(i + 3) & 0x3Fu)),
            4};
  }
  return {c, 1};
}

bool is_space_cp(char32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

enum class QuoteClass { none, open, close, ambiguous };

// The normalization table: straight double quote (ambiguous), curly
// double quotes, low-9 quote, guillemets. Doubled backticks/apostrophes
// are handled as two-character sequences in the scanner.
QuoteClass quote_class(char32_t cp) {
  switch (cp) {
    case 0x22: return QuoteClass::ambiguous;   // "
    case 0x201C: return QuoteClass::open;      // “
    case 0x201D: return QuoteClass::close;     // ”
    case 0x201E: return QuoteClass::open;      // „
    case 0xAB: return QuoteClass::open;        // «
    case 0xBB: return QuoteClass::close;       // »
    default: return QuoteClass::none;
  }
}

bool is_punct_cp(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= '!' && cp <= '/') || (cp >= ':' && cp <= '@') ||
           (cp >= '[' && cp <= '`') || (cp >= '{' && cp <= '~');
  }
  switch (cp) {
    case 0xA1: case 0xB7: case 0xBF: case 0x2039: case 0x203A:
      return true;
    default:
      // General punctuation block minus the quote delimiters above.
      return cp >= 0x2010 && cp <= 0x2027 && quote_class(cp) == QuoteClass::none;
  }
}

}  // namespace

std::string strip_controls(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    auto [cp, len] = decode_utf8(raw, i);
    const bool control = cp < 0x20 || cp == 0x7F || (cp >= 0x80 && cp <= 0x9F);
    if (control && cp != 0x09 && cp != 0x0A && cp != 0x0D) {
      out.push_back(' ');
    } else {
      out.append(raw.substr(i, len));
    }
    i += len;
  }
  return out;
}

std::vector<Document> ingest_ndjson(std::istream& in, std::size_t max_line_bytes,
                                    IngestReport& report) {
  std::vector<Document> docs;
  std::unordered_set<std::string> seen_text;
  std::unordered_set<std::string> seen_id;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++report.lines_read;
    if (line.size() > max_line_bytes) {
      ++report.oversized;
      continue;
    }
    nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object() || !rec.contains("id") ||
        !rec["id"].is_string() || !rec.contains("content") ||
        !rec["content"].is_string()) {
      ++report.malformed;
      continue;
    }
    Document doc;
    doc.doc_id = rec["id"].get<std::string>();
    doc.site = rec.value("site", std::string{});
    if (rec.contains("date") && rec["date"].is_string()) {
      doc.published = rec["date"].get<std::string>();
    }
    doc.text = strip_controls(rec["content"].get<std::string>());
    if (doc.text.find_first_not_of(" \t\r\n") == std::string::npos) {
      ++report.malformed;
      continue;
    }
    if (!seen_id.insert(doc.doc_id).second) {
      ++report.duplicate_ids;
      continue;
    }
    if (!seen_text.insert(doc.text).second) {
      ++report.duplicates;
      continue;
    }
    docs.push_back(std::move(doc));
  }
  report.documents = docs.size();
  return docs;
}

std::vector<Document> ingest_file(const std::string& path, std::size_t max_line_bytes,
                                  IngestReport& report) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  return ingest_ndjson(in, max_line_bytes, report);
}

TokenStream tokenize(const Document& doc) {
  TokenStream out;
  out.doc_id = doc.doc_id;
  const std::string& s = doc.text;
  bool straight_open_next = true;  // alternates per document

  auto emit = [&](std::size_t b, std::size_t e, TokenKind k) {
    out.tokens.push_back(Token{s.substr(b, e - b), k, {b, e}});
  };

  std::size_t i = 0;
  while (i < s.size()) {
    auto [cp, len] = decode_utf8(s, i);
    if (is_space_cp(cp)) {
      i += len;
      continue;
    }
    if (cp == U'`' && i + 1 < s.size() && s[i + 1] == '`') {
      emit(i, i + 2, TokenKind::quote_open);
      i += 2;
      continue;
    }
    if (cp == U'\'' && i + 1 < s.size() && s[i + 1] == '\'') {
      emit(i, i + 2, TokenKind::quote_close);
      i += 2;
      continue;
    }
    const QuoteClass qc = quote_class(cp);
    if (qc != QuoteClass::none) {
      TokenKind kind;
      if (qc == QuoteClass::ambiguous) {
        kind = straight_open_next ? TokenKind::quote_open : TokenKind::quote_close;
        straight_open_next = !straight_open_next;
      } else {
        kind = qc == QuoteClass::open ? TokenKind::quote_open : TokenKind::quote_close;
      }
      emit(i, i + len, kind);
      i += len;
      continue;
    }
    if (is_punct_cp(cp)) {
      emit(i, i + len, TokenKind::punct);
      i += len;
      continue;
    }
    const std::size_t begin = i;
    while (i < s.size()) {
      auto next = decode_utf8(s, i);
      if (is_space_cp(next.cp) || is_punct_cp(next.cp) ||
          quote_class(next.cp) != QuoteClass::none) {
        break;
      }
      i += next.len;
    }
    emit(begin, i, TokenKind::word);
  }

  int depth = 0;
  bool stray = false;
  for (const Token& t : out.tokens) {
    if (t.kind == TokenKind::quote_open) {
      ++depth;
    } else if (t.kind == TokenKind::quote_close) {
      if (depth == 0) {
        stray = true;
      } else {
        --depth;
      }
    }
  }
  out.balanced_quotes = !stray && depth == 0;
  return out;
}

}  // namespace quootstrap
