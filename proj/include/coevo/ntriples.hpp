#pragma once
// ntriples.hpp — line-oriented N-Triples reader and canonical writer.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "coevo/dataset.hpp"
#include "coevo/errors.hpp"
#include "coevo/term.hpp"

namespace coevo {

namespace detail {

inline void append_utf8(std::string& out, uint32_t cp) {
  if (cp <= 0x7F) {
    out += static_cast<char>(cp);
  } else if (cp <= 0x7FF) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp <= 0xFFFF) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Cursor over one physical line.
class LineScanner {
 public:
  LineScanner(std::string_view line, size_t lineno) : line_(line), lineno_(lineno) {}

  void skip_ws() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
  }

  bool at_end() const { return pos_ >= line_.size(); }
  char peek() const { return pos_ < line_.size() ? line_[pos_] : '\0'; }
  void advance() { ++pos_; }

  [[noreturn]] void fail(const std::string& reason) const { throw ParseError(lineno_, reason); }

  uint32_t read_hex(int digits) {
    uint32_t cp = 0;
    for (int i = 0; i < digits; ++i) {
      if (at_end()) fail("truncated \\u escape");
      char c = line_[pos_++];
      cp <<= 4;
      if (c >= '0' && c <= '9') cp |= static_cast<uint32_t>(c - '0');
      else if (c >= 'a' && c <= 'f') cp |= static_cast<uint32_t>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') cp |= static_cast<uint32_t>(c - 'A' + 10);
      else fail("bad hex digit in escape");
    }
    return cp;
  }

  Term read_iri() {
    advance();  // consume '<'
    std::string value;
    while (true) {
      if (at_end()) fail("unterminated IRI");
      char c = line_[pos_++];
      if (c == '>') break;
      if (c == '\\') {
        if (at_end()) fail("truncated escape in IRI");
        char e = line_[pos_++];
        if (e == 'u') append_utf8(value, read_hex(4));
        else if (e == 'U') append_utf8(value, read_hex(8));
        else fail("only \\u and \\U escapes are valid in IRIs");
      } else if (c == ' ' || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' ||
                 c == '^' || c == '`' || static_cast<unsigned char>(c) <= 0x20) {
        fail("forbidden character in IRI");
      } else {
        value += c;
      }
    }
    if (value.empty()) fail("empty IRI");
    return Term::iri(std::move(value));
  }

  Term read_blank() {
    pos_ += 2;  // consume '_:'
    std::string label;
    while (!at_end()) {
      char c = line_[pos_];
      bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                c == '_' || c == '-' || c == '.';
      if (!ok) break;
      label += c;
      ++pos_;
    }
    while (!label.empty() && label.back() == '.') {
      label.pop_back();
      --pos_;
    }
    if (label.empty()) fail("empty blank node label");
    return Term::blank(std::move(label));
  }

  std::string read_quoted() {
    advance();  // consume '"'
    std::string value;
    while (true) {
      if (at_end()) fail("unterminated literal");
      char c = line_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        if (at_end()) fail("truncated escape in literal");
        char e = line_[pos_++];
        switch (e) {
          case 't': value += '\t'; break;
          case 'b': value += '\b'; break;
          case 'n': value += '\n'; break;
          case 'r': value += '\r'; break;
          case 'f': value += '\f'; break;
          case '"': value += '"'; break;
          case '\'': value += '\''; break;
          case '\\': value += '\\'; break;
          case 'u': append_utf8(value, read_hex(4)); break;
          case 'U': append_utf8(value, read_hex(8)); break;
          default: fail("unknown escape in literal");
        }
      } else {
        value += c;
      }
    }
    return value;
  }

  Term read_literal() {
    std::string lexical = read_quoted();
    if (peek() == '@') {
      advance();
      std::string lang;
      while (!at_end()) {
        char c = line_[pos_];
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                  c == '-';
        if (!ok) break;
        lang += c;
        ++pos_;
      }
      if (lang.empty()) fail("empty language tag");
      return Term::lang_literal(std::move(lexical), std::move(lang));
    }
    if (peek() == '^') {
      advance();
      if (peek() != '^') fail("expected ^^ before datatype IRI");
      advance();
      if (peek() != '<') fail("expected IRI after ^^");
      Term dt = read_iri();
      if (dt.value() == vocab::rdf_lang_string)
        fail("rdf:langString literal requires a language tag");
      return Term::literal(std::move(lexical), dt.value());
    }
    return Term::literal(std::move(lexical));
  }

  Term read_term(bool allow_literal) {
    skip_ws();
    if (at_end()) fail("unexpected end of line");
    char c = peek();
    if (c == '<') return read_iri();
    if (c == '_' && pos_ + 1 < line_.size() && line_[pos_ + 1] == ':') return read_blank();
    if (c == '"') {
      if (!allow_literal) fail("literal not allowed in this position");
      return read_literal();
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  void read_terminator() {
    skip_ws();
    if (peek() != '.') fail("expected '.' after object");
    advance();
    skip_ws();
    if (!at_end() && peek() != '#') fail("trailing content after '.'");
  }

 private:
  std::string_view line_;
  size_t lineno_;
  size_t pos_ = 0;
};

}  // namespace detail

// Parses one line; returns nullopt for blank lines and comments.
inline std::optional<Triple> parse_ntriples_line(std::string_view line, size_t lineno) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  detail::LineScanner sc(line, lineno);
  sc.skip_ws();
  if (sc.at_end() || sc.peek() == '#') return std::nullopt;
  Triple t;
  t.subject = sc.read_term(false);
  if (t.subject.is_literal()) sc.fail("literal subject");
  sc.skip_ws();
  if (sc.peek() != '<') sc.fail("predicate must be an IRI");
  t.predicate = sc.read_term(false);
  t.object = sc.read_term(true);
  sc.read_terminator();
  return t;
}

// Parses a single N-Triples term token, e.g. `<http://x>` or `"v"^^<dt>`.
inline Term parse_term_token(std::string_view token) {
  detail::LineScanner sc(token, 1);
  Term t = sc.read_term(true);
  sc.skip_ws();
  if (!sc.at_end()) throw ParseError(1, "trailing content after term token");
  return t;
}

inline Dataset parse_ntriples(std::string_view text) {
  Dataset out;
  size_t lineno = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line =
        nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
    ++lineno;
    if (!(nl == std::string_view::npos && line.empty())) {
      if (auto t = parse_ntriples_line(line, lineno)) out.insert(std::move(*t));
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

// Canonical form: lines sorted byte-lexicographically, LF-terminated.
inline std::string serialize_ntriples(const Dataset& d) {
  std::vector<std::string> lines;
  lines.reserve(d.size());
  for (const auto& t : d) lines.push_back(t.line());
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

}  // namespace coevo
