#pragma once
// conflict.hpp — per-key candidate grouping, Case I-VII classification,
// semantic conflict detection between evolved replicas.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "coevo/changeset.hpp"
#include "coevo/dataset.hpp"
#include "coevo/schema.hpp"
#include "coevo/term.hpp"

namespace coevo {

enum class Origin : uint8_t {
  Existing,
  SourceAdded,
  SourceDeleted,
  TargetAdded,
  TargetDeleted,
  TargetTombstone,
};

inline const char* origin_name(Origin o) {
  switch (o) {
    case Origin::Existing: return "Existing";
    case Origin::SourceAdded: return "SourceAdded";
    case Origin::SourceDeleted: return "SourceDeleted";
    case Origin::TargetAdded: return "TargetAdded";
    case Origin::TargetDeleted: return "TargetDeleted";
    case Origin::TargetTombstone: return "TargetTombstone";
  }
  return "?";
}

struct CandidateValue {
  Term value;
  Origin origin;

  bool operator==(const CandidateValue&) const = default;
};

enum class CaseTag : uint8_t {
  CaseI,
  CaseII,
  CaseIII,
  CaseIV,
  CaseV,
  CaseVI,
  CaseVII,
  NoConflict,
  AutoKeepAll,
};

inline const char* case_tag_name(CaseTag t) {
  switch (t) {
    case CaseTag::CaseI: return "CaseI";
    case CaseTag::CaseII: return "CaseII";
    case CaseTag::CaseIII: return "CaseIII";
    case CaseTag::CaseIV: return "CaseIV";
    case CaseTag::CaseV: return "CaseV";
    case CaseTag::CaseVI: return "CaseVI";
    case CaseTag::CaseVII: return "CaseVII";
    case CaseTag::NoConflict: return "NoConflict";
    case CaseTag::AutoKeepAll: return "AutoKeepAll";
  }
  return "?";
}

// Cases I-III have a forced outcome: the plain merge already settles them.
inline bool is_forced_case(CaseTag t) {
  return t == CaseTag::CaseI || t == CaseTag::CaseII || t == CaseTag::CaseIII;
}

// All candidate values observed at one (subject, predicate) key.
struct KeyGroup {
  Term subject;
  Term predicate;
  std::vector<CandidateValue> candidates;
  std::vector<Term> source_tombstones;  // suppress re-adds but are not candidates
};

struct ConflictRecord {
  Term subject;
  Term predicate;
  std::vector<CandidateValue> candidates;
  CaseTag structural = CaseTag::NoConflict;  // raw pattern match
  CaseTag tag = CaseTag::NoConflict;         // reported after semantic refinement
  bool semantically_conflicting = false;
  std::vector<Term> survivors;   // values a plain merge keeps at this key
  std::vector<Term> contenders;  // each side's asserted values, resolution input
  std::vector<int> contender_sides;  // bitmask per contender: 1 source, 2 target
  std::vector<CaseTag> matched;  // every pattern that fit, in precedence order

  std::string key() const { return subject.token() + " " + predicate.token(); }
};

namespace detail {

struct TermSet {
  std::set<std::string> tokens;
  std::vector<Term> terms;

  void add(const Term& t) {
    if (tokens.insert(t.token()).second) terms.push_back(t);
  }
  bool contains(const Term& t) const { return tokens.count(t.token()) > 0; }
  bool empty() const { return terms.empty(); }
  bool intersects(const TermSet& o) const {
    for (const auto& tok : tokens)
      if (o.tokens.count(tok) > 0) return true;
    return false;
  }
};

struct KeySets {
  TermSet source_added, source_deleted, target_added, target_deleted;
  TermSet existing, target_tombstone, source_tombstone;

  static KeySets from_group(const KeyGroup& g) {
    KeySets s;
    for (const auto& c : g.candidates) {
      switch (c.origin) {
        case Origin::SourceAdded: s.source_added.add(c.value); break;
        case Origin::SourceDeleted: s.source_deleted.add(c.value); break;
        case Origin::TargetAdded: s.target_added.add(c.value); break;
        case Origin::TargetDeleted: s.target_deleted.add(c.value); break;
        case Origin::Existing: s.existing.add(c.value); break;
        case Origin::TargetTombstone: s.target_tombstone.add(c.value); break;
      }
    }
    for (const auto& t : g.source_tombstones) s.source_tombstone.add(t);
    return s;
  }

  // Values a plain merge keeps: target additions always survive, source
  // additions survive unless the target deleted or tombstoned them, and
  // existing values survive unless either side removed them.
  TermSet survivors() const {
    TermSet out;
    for (const auto& v : target_added.terms) out.add(v);
    for (const auto& v : source_added.terms)
      if (!target_deleted.contains(v) && !target_tombstone.contains(v)) out.add(v);
    for (const auto& v : existing.terms) {
      if (source_deleted.contains(v) || source_tombstone.contains(v)) continue;
      if (target_deleted.contains(v) || target_tombstone.contains(v)) continue;
      out.add(v);
    }
    return out;
  }

  // The key restricted to one evolved replica.
  TermSet source_after() const {
    TermSet out;
    for (const auto& v : existing.terms)
      if (!source_deleted.contains(v) && !source_tombstone.contains(v)) out.add(v);
    for (const auto& v : source_added.terms) out.add(v);
    return out;
  }

  TermSet target_after() const {
    TermSet out;
    for (const auto& v : existing.terms)
      if (!target_deleted.contains(v) && !target_tombstone.contains(v)) out.add(v);
    for (const auto& v : target_added.terms) out.add(v);
    return out;
  }
};

struct CasePattern {
  CaseTag tag;
  bool (*fits)(const KeySets&);
};

// Patterns carry disambiguating guards so the precedence order below can
// never bury a more specific case behind a broader one.
inline const CasePattern* case_patterns(size_t& count) {
  static const CasePattern patterns[] = {
      {CaseTag::CaseI,
       [](const KeySets& s) {
         return !s.source_added.empty() && !s.target_deleted.empty() &&
                s.target_added.empty() && s.source_deleted.empty() &&
                !s.source_added.intersects(s.target_deleted);
       }},
      {CaseTag::CaseII,
       [](const KeySets& s) {
         return !s.source_added.empty() && s.target_added.empty() &&
                s.source_deleted.intersects(s.target_deleted);
       }},
      {CaseTag::CaseIII,
       [](const KeySets& s) {
         return !s.target_added.empty() && s.source_added.empty() &&
                s.source_deleted.intersects(s.target_deleted);
       }},
      {CaseTag::CaseV,
       [](const KeySets& s) {
         return !s.source_added.empty() && !s.target_added.empty() &&
                s.source_deleted.intersects(s.target_deleted);
       }},
      {CaseTag::CaseVI,
       [](const KeySets& s) {
         return !s.target_added.empty() && s.source_added.intersects(s.target_deleted);
       }},
      {CaseTag::CaseVII,
       [](const KeySets& s) {
         return !s.source_added.empty() && s.source_deleted.intersects(s.target_added);
       }},
  };
  count = sizeof(patterns) / sizeof(patterns[0]);
  return patterns;
}

inline std::vector<Term> sorted_terms(const TermSet& s) {
  std::vector<Term> out = s.terms;
  std::sort(out.begin(), out.end(),
            [](const Term& a, const Term& b) { return a.token() < b.token(); });
  return out;
}

}  // namespace detail

struct CaseMatch {
  CaseTag tag = CaseTag::NoConflict;
  std::vector<CaseTag> matched;
};

// Pattern classification alone, before property semantics are consulted.
// Falls through to CaseIV when additions leave two or more values standing.
inline CaseMatch classify_sets(const detail::KeySets& sets) {
  CaseMatch out;
  size_t n = 0;
  const detail::CasePattern* patterns = detail::case_patterns(n);
  for (size_t i = 0; i < n; ++i)
    if (patterns[i].fits(sets)) out.matched.push_back(patterns[i].tag);
  if (!out.matched.empty()) {
    out.tag = out.matched.front();
    return out;
  }
  if (sets.survivors().terms.size() >= 2) out.tag = CaseTag::CaseIV;
  return out;
}

inline CaseMatch classify_case(const std::vector<CandidateValue>& candidates) {
  KeyGroup g;
  g.candidates = candidates;
  return classify_sets(detail::KeySets::from_group(g));
}

// Collects every (subject, predicate) key touched by an addition on either
// side, with one candidate per (value, origin) pair. Keys without additions
// need no analysis: deletions alone cannot contend over a value.
inline std::map<std::string, KeyGroup> group_by_key(const SideDelta& source,
                                                    const SideDelta& target,
                                                    const Dataset& target_base) {
  std::map<std::string, KeyGroup> groups;

  auto key_of = [](const Triple& t) { return t.subject.token() + " " + t.predicate.token(); };
  auto ensure = [&](const Triple& t) -> KeyGroup& {
    KeyGroup& g = groups[key_of(t)];
    if (g.candidates.empty() && g.source_tombstones.empty()) {
      g.subject = t.subject;
      g.predicate = t.predicate;
    }
    return g;
  };

  for (const auto& t : source.changes.added)
    ensure(t).candidates.push_back({t.object, Origin::SourceAdded});
  for (const auto& t : target.changes.added)
    ensure(t).candidates.push_back({t.object, Origin::TargetAdded});

  auto attach = [&](const Dataset& d, Origin origin) {
    for (const auto& t : d) {
      auto it = groups.find(key_of(t));
      if (it == groups.end()) continue;
      it->second.candidates.push_back({t.object, origin});
    }
  };
  attach(source.changes.deleted, Origin::SourceDeleted);
  attach(target.changes.deleted, Origin::TargetDeleted);
  attach(target.tombstones, Origin::TargetTombstone);
  attach(target_base, Origin::Existing);

  for (const auto& t : source.tombstones) {
    auto it = groups.find(key_of(t));
    if (it == groups.end()) continue;
    it->second.source_tombstones.push_back(t.object);
  }

  for (auto& [key, g] : groups) {
    std::sort(g.candidates.begin(), g.candidates.end(),
              [](const CandidateValue& a, const CandidateValue& b) {
                if (auto c = a.value.token().compare(b.value.token()); c != 0) return c < 0;
                return a.origin < b.origin;
              });
    g.candidates.erase(std::unique(g.candidates.begin(), g.candidates.end()),
                       g.candidates.end());
  }
  return groups;
}

namespace detail {

// A value pair qualifies for the semantic test only when one element is a
// fresh addition the other replica does not share. Two values that were both
// already present before the window never qualify; pre-existing noise is not
// a synchronization conflict.
inline bool pair_qualifies(const KeySets& s, const TermSet& source_after,
                           const TermSet& target_after, const Term& u, const Term& v) {
  auto one_way = [&](const Term& a, const Term& b) {
    bool b_fresh_target = s.target_added.contains(b) && !source_after.contains(b);
    bool b_fresh_source = s.source_added.contains(b) && !target_after.contains(b);
    return (source_after.contains(a) && b_fresh_target) ||
           (target_after.contains(a) && b_fresh_source);
  };
  return one_way(u, v) || one_way(v, u);
}

}  // namespace detail

// Full detection pass: group, classify, refine with property semantics.
// Records come back sorted by key; candidate lists are already canonical.
inline std::vector<ConflictRecord> detect_conflicts(const SideDelta& source,
                                                    const SideDelta& target,
                                                    const Dataset& target_base,
                                                    const ProfileRegistry& profiles,
                                                    const SchemaGraph& schema,
                                                    const SimilarityConfig& cfg) {
  std::vector<ConflictRecord> out;
  auto groups = group_by_key(source, target, target_base);
  for (auto& [key, g] : groups) {
    detail::KeySets sets = detail::KeySets::from_group(g);
    CaseMatch match = classify_sets(sets);

    ConflictRecord rec;
    rec.subject = g.subject;
    rec.predicate = g.predicate;
    rec.candidates = g.candidates;
    rec.structural = match.tag;
    rec.matched = match.matched;
    rec.survivors = detail::sorted_terms(sets.survivors());

    detail::TermSet source_after = sets.source_after();
    detail::TermSet target_after = sets.target_after();
    detail::TermSet contention;
    for (const auto& v : source_after.terms) contention.add(v);
    for (const auto& v : target_after.terms) contention.add(v);
    rec.contenders = detail::sorted_terms(contention);
    for (const auto& v : rec.contenders) {
      int side = 0;
      if (source_after.contains(v)) side |= 1;
      if (target_after.contains(v)) side |= 2;
      rec.contender_sides.push_back(side);
    }

    if (is_forced_case(match.tag) || match.tag == CaseTag::NoConflict) {
      rec.tag = match.tag;
    } else {
      PropertyProfile profile = profiles.get(g.predicate.value());
      if (profile.coexists_by_default()) {
        rec.tag = CaseTag::AutoKeepAll;
      } else {
        bool conflicting = false;
        const auto& cs = rec.contenders;
        for (size_t i = 0; i < cs.size() && !conflicting; ++i) {
          for (size_t j = i + 1; j < cs.size() && !conflicting; ++j) {
            if (!detail::pair_qualifies(sets, source_after, target_after, cs[i], cs[j]))
              continue;
            if (objects_conflicting(profile, cs[i], cs[j], schema, cfg)) conflicting = true;
          }
        }
        rec.semantically_conflicting = conflicting;
        rec.tag = conflicting ? match.tag : CaseTag::NoConflict;
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

// conflicts.tsv: subject, predicate, caseTag, semanticallyConflicting,
// candidates. Deterministic because records and candidates are sorted.
inline std::string conflicts_to_tsv(const std::vector<ConflictRecord>& records) {
  std::string out = "subject\tpredicate\tcaseTag\tsemanticallyConflicting\tcandidates\n";
  for (const auto& r : records) {
    out += r.subject.token();
    out += '\t';
    out += r.predicate.token();
    out += '\t';
    out += case_tag_name(r.tag);
    out += '\t';
    out += r.semantically_conflicting ? "true" : "false";
    out += '\t';
    for (size_t i = 0; i < r.candidates.size(); ++i) {
      if (i > 0) out += "; ";
      out += r.candidates[i].value.token();
      out += " (";
      out += origin_name(r.candidates[i].origin);
      out += ")";
    }
    out += '\n';
  }
  return out;
}

}  // namespace coevo
