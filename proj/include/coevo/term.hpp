#pragma once
// term.hpp — RDF terms and triples with canonical N-Triples rendering.

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace coevo {

namespace vocab {
inline constexpr std::string_view rdf_type = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view rdf_lang_string = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
inline constexpr std::string_view rdfs_label = "http://www.w3.org/2000/01/rdf-schema#label";
inline constexpr std::string_view rdfs_subclass_of = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
inline constexpr std::string_view owl_same_as = "http://www.w3.org/2002/07/owl#sameAs";
inline constexpr std::string_view owl_different_from = "http://www.w3.org/2002/07/owl#differentFrom";
inline constexpr std::string_view owl_disjoint_with = "http://www.w3.org/2002/07/owl#disjointWith";
inline constexpr std::string_view owl_functional_property = "http://www.w3.org/2002/07/owl#FunctionalProperty";
inline constexpr std::string_view owl_datatype_property = "http://www.w3.org/2002/07/owl#DatatypeProperty";
inline constexpr std::string_view owl_object_property = "http://www.w3.org/2002/07/owl#ObjectProperty";
inline constexpr std::string_view xsd_string = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view xsd_decimal = "http://www.w3.org/2001/XMLSchema#decimal";
}  // namespace vocab

enum class TermKind : uint8_t { Iri, BlankNode, Literal };

// Immutable RDF term. Literals carry a datatype IRI (xsd:string when plain)
// and a language tag only for rdf:langString.
class Term {
 public:
  Term() : kind_(TermKind::Iri), value_("http://invalid.example/uninitialized") {}

  static Term iri(std::string value) {
    if (value.empty()) throw std::invalid_argument("IRI must be non-empty");
    for (char c : value) {
      if (c == '<' || c == '>' || c == '"' || c == ' ' || c == '\t' || c == '\n' || c == '\r')
        throw std::invalid_argument("IRI contains forbidden character: " + value);
    }
    Term t;
    t.kind_ = TermKind::Iri;
    t.value_ = std::move(value);
    return t;
  }

  static Term blank(std::string label) {
    if (label.empty()) throw std::invalid_argument("blank node label must be non-empty");
    Term t;
    t.kind_ = TermKind::BlankNode;
    t.value_ = std::move(label);
    return t;
  }

  static Term literal(std::string lexical, std::string datatype = std::string(vocab::xsd_string)) {
    if (datatype.empty()) datatype = std::string(vocab::xsd_string);
    if (datatype == vocab::rdf_lang_string)
      throw std::invalid_argument("rdf:langString literal requires a language tag");
    Term t;
    t.kind_ = TermKind::Literal;
    t.value_ = std::move(lexical);
    t.datatype_ = std::move(datatype);
    return t;
  }

  static Term lang_literal(std::string lexical, std::string language) {
    if (language.empty()) throw std::invalid_argument("language tag must be non-empty");
    Term t;
    t.kind_ = TermKind::Literal;
    t.value_ = std::move(lexical);
    t.datatype_ = std::string(vocab::rdf_lang_string);
    t.language_ = std::move(language);
    return t;
  }

  TermKind kind() const { return kind_; }
  bool is_iri() const { return kind_ == TermKind::Iri; }
  bool is_blank() const { return kind_ == TermKind::BlankNode; }
  bool is_literal() const { return kind_ == TermKind::Literal; }

  // IRI value, blank node label, or literal lexical form.
  const std::string& value() const { return value_; }
  const std::string& datatype() const { return datatype_; }
  const std::string& language() const { return language_; }

  // N-Triples token. xsd:string literals render without a datatype suffix,
  // so equality and ordering on tokens coincide with term identity.
  std::string token() const {
    switch (kind_) {
      case TermKind::Iri:
        return "<" + value_ + ">";
      case TermKind::BlankNode:
        return "_:" + value_;
      case TermKind::Literal: {
        std::string out = "\"" + escape_literal(value_) + "\"";
        if (!language_.empty()) {
          out += "@" + language_;
        } else if (datatype_ != vocab::xsd_string) {
          out += "^^<" + datatype_ + ">";
        }
        return out;
      }
    }
    return {};
  }

  bool operator==(const Term& o) const {
    return kind_ == o.kind_ && value_ == o.value_ && datatype_ == o.datatype_ &&
           language_ == o.language_;
  }

  // Canonical order: byte order of tokens (kind is implied by the first byte).
  std::strong_ordering operator<=>(const Term& o) const {
    if (auto c = token() <=> o.token(); c != 0) return c;
    return std::strong_ordering::equal;
  }

  static std::string escape_literal(std::string_view lexical) {
    std::string out;
    out.reserve(lexical.size());
    for (char c : lexical) {
      switch (c) {
        case '\\': out += "\\\\"; break;
        case '"': out += "\\\""; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            static const char hex[] = "0123456789ABCDEF";
            out += "\\u00";
            out += hex[(c >> 4) & 0xF];
            out += hex[c & 0xF];
          } else {
            out += c;
          }
      }
    }
    return out;
  }

 private:
  TermKind kind_;
  std::string value_;
  std::string datatype_;
  std::string language_;
};

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  bool operator==(const Triple&) const = default;

  std::string line() const {
    return subject.token() + " " + predicate.token() + " " + object.token() + " .";
  }
};

// Canonical triple order: byte order of serialized lines.
inline bool triple_less(const Triple& a, const Triple& b) { return a.line() < b.line(); }

inline uint64_t fnv1a64(std::string_view bytes, uint64_t seed = 0xCBF29CE484222325ull) {
  uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

struct TripleHash {
  size_t operator()(const Triple& t) const { return fnv1a64(t.line()); }
};

struct TermHash {
  size_t operator()(const Term& t) const { return fnv1a64(t.token()); }
};

}  // namespace coevo
