#pragma once
// metrics.hpp — completeness, consistency, conciseness as exact ratios.

#include <cstdint>
#include <set>
#include <vector>

#include "coevo/changeset.hpp"
#include "coevo/conflict.hpp"
#include "coevo/dataset.hpp"

namespace coevo {

// Exact quality ratio. A zero denominator means the metric is vacuously
// perfect; value() reports 1.0 and the flag survives for reporting.
struct Ratio {
  int64_t num = 0;
  int64_t den = 0;
  bool clamped = false;  // numerator exceeded denominator and was clamped

  double value() const {
    if (den == 0) return 1.0;
    return static_cast<double>(num) / static_cast<double>(den);
  }

  bool vacuous() const { return den == 0; }
  long percent() const { return static_cast<long>(value() * 100.0 + 0.5); }

  bool operator==(const Ratio& o) const { return num == o.num && den == o.den; }
};

// Share of required triples present after synchronization. Required is the
// initial dataset plus everything the changeset added.
inline Ratio completeness(const Dataset& syncd, const Dataset& initial, const Changeset& cs) {
  Dataset required = set_union(initial, cs.added);
  Ratio r;
  r.den = static_cast<int64_t>(required.size());
  r.num = static_cast<int64_t>(set_intersect(syncd, required).size());
  return r;
}

// Triples of semantically conflicting records, as full triples.
inline Dataset conflicting_triples(const std::vector<ConflictRecord>& records) {
  Dataset out;
  for (const auto& r : records) {
    if (!r.semantically_conflicting) continue;
    for (const auto& v : r.survivors) out.insert({r.subject, r.predicate, v});
  }
  return out;
}

// Share of the synchronized dataset free of conflicting triples, measured
// against everything that was ever asserted in the window.
inline Ratio consistency(const Dataset& syncd, const Dataset& initial,
                         const Dataset& source_added, const Dataset& target_added,
                         const std::vector<ConflictRecord>& records) {
  Dataset asserted = set_union(set_union(initial, source_added), target_added);
  Dataset clean = set_minus(syncd, conflicting_triples(records));
  Ratio r;
  r.den = static_cast<int64_t>(asserted.size());
  r.num = static_cast<int64_t>(clean.size());
  if (r.num > r.den) {  // synthesized values can exceed the asserted pool
    r.num = r.den;
    r.clamped = true;
  }
  return r;
}

// Unique share of a concatenation of datasets, duplicates counted per part.
inline Ratio conciseness(const std::vector<const Dataset*>& parts) {
  Dataset all;
  int64_t total = 0;
  for (const Dataset* p : parts) {
    total += static_cast<int64_t>(p->size());
    for (const auto& t : *p) all.insert(t);
  }
  Ratio r;
  r.den = total;
  r.num = static_cast<int64_t>(all.size());
  return r;
}

// Variant that counts unique object terms instead of unique triples.
inline Ratio conciseness_objects(const std::vector<const Dataset*>& parts) {
  std::set<std::string> objects;
  int64_t total = 0;
  for (const Dataset* p : parts) {
    total += static_cast<int64_t>(p->size());
    for (const auto& t : *p) objects.insert(t.object.token());
  }
  Ratio r;
  r.den = total;
  r.num = static_cast<int64_t>(objects.size());
  return r;
}

struct QualityReport {
  Ratio completeness_source;
  Ratio completeness_target;
  Ratio consistency;
  Ratio conciseness_before;
  Ratio conciseness_after;
};

}  // namespace coevo
