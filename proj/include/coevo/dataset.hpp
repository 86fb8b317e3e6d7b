#pragma once
// dataset.hpp — triple set with value semantics and set algebra.

#include <algorithm>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "coevo/term.hpp"

namespace coevo {

// Unordered set of triples. Duplicates collapse; equality ignores the
// optional version label. Canonical order is materialized on demand.
class Dataset {
 public:
  using Storage = std::unordered_set<Triple, TripleHash>;
  using const_iterator = Storage::const_iterator;

  Dataset() = default;
  explicit Dataset(std::vector<Triple> triples) {
    for (auto& t : triples) triples_.insert(std::move(t));
  }

  bool insert(Triple t) { return triples_.insert(std::move(t)).second; }
  bool erase(const Triple& t) { return triples_.erase(t) > 0; }
  bool contains(const Triple& t) const { return triples_.count(t) > 0; }

  size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }
  void clear() { triples_.clear(); }

  const_iterator begin() const { return triples_.begin(); }
  const_iterator end() const { return triples_.end(); }

  const std::optional<std::string>& version_label() const { return version_label_; }
  void set_version_label(std::string label) { version_label_ = std::move(label); }

  std::vector<Triple> sorted() const {
    std::vector<Triple> out(triples_.begin(), triples_.end());
    std::sort(out.begin(), out.end(), triple_less);
    return out;
  }

  bool operator==(const Dataset& o) const { return triples_ == o.triples_; }

 private:
  Storage triples_;
  std::optional<std::string> version_label_;
};

inline Dataset set_union(const Dataset& a, const Dataset& b) {
  Dataset out = a;
  for (const auto& t : b) out.insert(t);
  return out;
}

inline Dataset set_minus(const Dataset& a, const Dataset& b) {
  Dataset out;
  for (const auto& t : a)
    if (!b.contains(t)) out.insert(t);
  return out;
}

inline Dataset set_intersect(const Dataset& a, const Dataset& b) {
  const Dataset& small = a.size() <= b.size() ? a : b;
  const Dataset& large = a.size() <= b.size() ? b : a;
  Dataset out;
  for (const auto& t : small)
    if (large.contains(t)) out.insert(t);
  return out;
}

inline bool is_subset(const Dataset& a, const Dataset& b) {
  for (const auto& t : a)
    if (!b.contains(t)) return false;
  return true;
}

}  // namespace coevo
