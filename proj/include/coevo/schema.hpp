#pragma once
// schema.hpp — property profiles, schema graph, object conflict test.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "coevo/dataset.hpp"
#include "coevo/term.hpp"

namespace coevo {

enum class PropertyKind : uint8_t { Unknown, Datatype, Object };
enum class SpecialRole : uint8_t { None, TypeAssertion, LabelLike, SameAsLike };

// How a predicate behaves under conflicting values. Non-functional
// properties with no special role admit coexisting values by default.
struct PropertyProfile {
  std::string iri;
  PropertyKind kind = PropertyKind::Unknown;
  bool functional = false;
  SpecialRole role = SpecialRole::None;
  double label_threshold = -1.0;  // < 0 means use the global threshold

  bool coexists_by_default() const { return !functional && role == SpecialRole::None; }
};

struct SimilarityConfig {
  double label_threshold = 0.5;
};

// Levenshtein distance over Unicode scalar values.
inline std::vector<uint32_t> decode_utf8(std::string_view s) {
  std::vector<uint32_t> cps;
  cps.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    unsigned char c = s[i];
    uint32_t cp = c;
    size_t extra = 0;
    if (c >= 0xF0) extra = 3, cp = c & 0x07;
    else if (c >= 0xE0) extra = 2, cp = c & 0x0F;
    else if (c >= 0xC0) extra = 1, cp = c & 0x1F;
    if (i + extra >= s.size()) extra = 0, cp = c;  // truncated sequence, keep raw byte
    for (size_t k = 0; k < extra; ++k) cp = (cp << 6) | (s[i + 1 + k] & 0x3F);
    cps.push_back(cp);
    i += extra + 1;
  }
  return cps;
}

inline size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<uint32_t> x = decode_utf8(a);
  std::vector<uint32_t> y = decode_utf8(b);
  if (x.size() < y.size()) std::swap(x, y);
  std::vector<size_t> row(y.size() + 1);
  for (size_t j = 0; j <= y.size(); ++j) row[j] = j;
  for (size_t i = 1; i <= x.size(); ++i) {
    size_t diag = row[0];
    row[0] = i;
    for (size_t j = 1; j <= y.size(); ++j) {
      size_t up = row[j];
      size_t cost = x[i - 1] == y[j - 1] ? 0 : 1;
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
      diag = up;
    }
  }
  return row[y.size()];
}

// 1 - dist/max(len); two empty strings are identical.
inline double normalized_label_similarity(std::string_view a, std::string_view b) {
  size_t la = decode_utf8(a).size();
  size_t lb = decode_utf8(b).size();
  size_t m = std::max(la, lb);
  if (m == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(m);
}

// Class hierarchy, disjointness axioms, and instance-level identity facts
// loaded from a schema dataset.
class SchemaGraph {
 public:
  void add_subclass(const std::string& sub, const std::string& super) {
    edges_[sub].insert(super);
    touch(sub);
    touch(super);
  }

  void add_disjoint(const std::string& a, const std::string& b) {
    disjoint_.insert(ordered(a, b));
    touch(a);
    touch(b);
  }

  void add_same_as(const std::string& a, const std::string& b) { unite(a, b); }

  void add_different_from(const std::string& a, const std::string& b) {
    different_.insert(ordered(a, b));
  }

  void add_functional(const std::string& p) { functional_.insert(p); }
  void add_datatype_property(const std::string& p) { datatype_props_.insert(p); }
  void add_object_property(const std::string& p) { object_props_.insert(p); }

  bool is_functional(const std::string& p) const { return functional_.count(p) > 0; }
  bool is_datatype_property(const std::string& p) const { return datatype_props_.count(p) > 0; }
  bool is_object_property(const std::string& p) const { return object_props_.count(p) > 0; }

  const std::unordered_set<std::string>& functional_properties() const { return functional_; }
  const std::unordered_set<std::string>& datatype_properties() const { return datatype_props_; }
  const std::unordered_set<std::string>& object_properties() const { return object_props_; }

  // Reflexive-transitive superclass set. Unknown classes map to themselves.
  std::set<std::string> superclasses(const std::string& c) const {
    std::set<std::string> seen{c};
    std::vector<std::string> queue{c};
    while (!queue.empty()) {
      std::string cur = queue.back();
      queue.pop_back();
      auto it = edges_.find(cur);
      if (it == edges_.end()) continue;
      for (const auto& super : it->second)
        if (seen.insert(super).second) queue.push_back(super);
    }
    return seen;
  }

  bool same_individual(const std::string& a, const std::string& b) const {
    if (a == b) return true;
    auto ia = parent_.find(a);
    auto ib = parent_.find(b);
    if (ia == parent_.end() || ib == parent_.end()) return false;
    return find(a) == find(b);
  }

  bool different_individuals(const std::string& a, const std::string& b) const {
    return different_.count(ordered(a, b)) > 0;
  }

  bool has_declared_disjointness() const { return !disjoint_.empty(); }

  friend bool classes_disjoint(const SchemaGraph& g, const std::string& c1,
                               const std::string& c2) {
    if (c1 == c2) return false;  // a class is never disjoint with itself
    if (g.disjoint_.empty()) return false;
    auto s1 = g.superclasses(c1);
    auto s2 = g.superclasses(c2);
    for (const auto& a : s1)
      for (const auto& b : s2)
        if (g.disjoint_.count(g.ordered(a, b)) > 0) return true;
    return false;
  }

 private:
  void touch(const std::string& c) { edges_.emplace(c, std::set<std::string>{}); }

  std::pair<std::string, std::string> ordered(const std::string& a,
                                              const std::string& b) const {
    return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
  }

  std::string find(const std::string& x) const {
    std::string cur = x;
    auto it = parent_.find(cur);
    while (it != parent_.end() && it->second != cur) {
      cur = it->second;
      it = parent_.find(cur);
    }
    return cur;
  }

  void unite(const std::string& a, const std::string& b) {
    parent_.emplace(a, a);
    parent_.emplace(b, b);
    std::string ra = find(a);
    std::string rb = find(b);
    if (ra != rb) parent_[ra] = rb;
  }

  std::unordered_map<std::string, std::set<std::string>> edges_;
  std::set<std::pair<std::string, std::string>> disjoint_;
  std::set<std::pair<std::string, std::string>> different_;
  std::unordered_map<std::string, std::string> parent_;
  std::unordered_set<std::string> functional_;
  std::unordered_set<std::string> datatype_props_;
  std::unordered_set<std::string> object_props_;
};

// Builds a SchemaGraph from rdfs/owl assertions in a dataset.
inline SchemaGraph load_schema(const Dataset& d) {
  SchemaGraph g;
  for (const auto& t : d) {
    const std::string& p = t.predicate.value();
    if (p == vocab::rdfs_subclass_of && t.subject.is_iri() && t.object.is_iri()) {
      g.add_subclass(t.subject.value(), t.object.value());
    } else if (p == vocab::owl_disjoint_with && t.subject.is_iri() && t.object.is_iri()) {
      g.add_disjoint(t.subject.value(), t.object.value());
    } else if (p == vocab::owl_same_as && t.subject.is_iri() && t.object.is_iri()) {
      g.add_same_as(t.subject.value(), t.object.value());
    } else if (p == vocab::owl_different_from && t.subject.is_iri() && t.object.is_iri()) {
      g.add_different_from(t.subject.value(), t.object.value());
    } else if (p == vocab::rdf_type && t.subject.is_iri() && t.object.is_iri()) {
      const std::string& cls = t.object.value();
      if (cls == vocab::owl_functional_property) g.add_functional(t.subject.value());
      else if (cls == vocab::owl_datatype_property) g.add_datatype_property(t.subject.value());
      else if (cls == vocab::owl_object_property) g.add_object_property(t.subject.value());
    }
  }
  return g;
}

// Predicate IRI to profile map. rdf:type and owl:sameAs carry locked roles;
// rdfs:label defaults to LabelLike but may be overridden.
class ProfileRegistry {
 public:
  ProfileRegistry() {
    PropertyProfile type;
    type.iri = vocab::rdf_type;
    type.kind = PropertyKind::Object;
    type.role = SpecialRole::TypeAssertion;
    profiles_[type.iri] = type;

    PropertyProfile same;
    same.iri = vocab::owl_same_as;
    same.kind = PropertyKind::Object;
    same.role = SpecialRole::SameAsLike;
    profiles_[same.iri] = same;

    PropertyProfile label;
    label.iri = vocab::rdfs_label;
    label.kind = PropertyKind::Datatype;
    label.role = SpecialRole::LabelLike;
    profiles_[label.iri] = label;
  }

  static bool role_locked(const std::string& iri) {
    return iri == vocab::rdf_type || iri == vocab::owl_same_as;
  }

  void set(PropertyProfile p) { profiles_[p.iri] = std::move(p); }

  // Folds owl:FunctionalProperty / owl:DatatypeProperty / owl:ObjectProperty
  // declarations into the registry without touching explicit overrides.
  void absorb_schema(const SchemaGraph& g, const std::vector<std::string>& predicates) {
    for (const auto& p : predicates) {
      PropertyProfile prof = get(p);
      if (g.is_functional(p)) prof.functional = true;
      if (prof.kind == PropertyKind::Unknown) {
        if (g.is_datatype_property(p)) prof.kind = PropertyKind::Datatype;
        else if (g.is_object_property(p)) prof.kind = PropertyKind::Object;
      }
      profiles_[p] = prof;
    }
  }

  PropertyProfile get(const std::string& iri) const {
    auto it = profiles_.find(iri);
    if (it != profiles_.end()) return it->second;
    PropertyProfile p;
    p.iri = iri;
    return p;
  }

  const std::map<std::string, PropertyProfile>& all() const { return profiles_; }

 private:
  std::map<std::string, PropertyProfile> profiles_;
};

namespace detail {

// Lexical form for literals, IRI string otherwise.
inline const std::string& display_string(const Term& t) { return t.value(); }

}  // namespace detail

// Whether two object values for the same (subject, predicate) key clash.
// Symmetric; a value never conflicts with itself.
inline bool objects_conflicting(const PropertyProfile& p, const Term& o1, const Term& o2,
                                const SchemaGraph& g, const SimilarityConfig& cfg) {
  if (o1 == o2) return false;

  switch (p.role) {
    case SpecialRole::TypeAssertion:
      if (o1.is_iri() && o2.is_iri()) return classes_disjoint(g, o1.value(), o2.value());
      return false;
    case SpecialRole::SameAsLike:
      return false;  // multiple identity links coexist
    case SpecialRole::LabelLike: {
      double threshold = p.label_threshold >= 0 ? p.label_threshold : cfg.label_threshold;
      double sim =
          normalized_label_similarity(detail::display_string(o1), detail::display_string(o2));
      return sim >= threshold;
    }
    case SpecialRole::None:
      break;
  }

  if (!p.functional) return false;

  bool object_valued = p.kind == PropertyKind::Object ||
                       (p.kind == PropertyKind::Unknown && o1.is_iri() && o2.is_iri());
  if (object_valued) {
    if (g.different_individuals(o1.value(), o2.value())) return true;
    return !g.same_individual(o1.value(), o2.value());
  }
  // Functional datatype property: any two distinct values clash.
  return true;
}

}  // namespace coevo
