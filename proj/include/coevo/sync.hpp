#pragma once
// sync.hpp — the four synchronization strategies and scenario runner.

#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coevo/changeset.hpp"
#include "coevo/conflict.hpp"
#include "coevo/dataset.hpp"
#include "coevo/metrics.hpp"
#include "coevo/resolution.hpp"
#include "coevo/schema.hpp"

namespace coevo {

enum class Strategy : uint8_t { I = 1, II, III, IV };

inline const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::I: return "I";
    case Strategy::II: return "II";
    case Strategy::III: return "III";
    case Strategy::IV: return "IV";
  }
  return "?";
}

inline std::optional<Strategy> parse_strategy(std::string_view name) {
  if (name == "I") return Strategy::I;
  if (name == "II") return Strategy::II;
  if (name == "III") return Strategy::III;
  if (name == "IV") return Strategy::IV;
  return std::nullopt;
}

// Which strategy governs each predicate, plus the resolution policies used
// when a predicate lands on Strategy IV. No default policy means automatic
// selection per key.
struct StrategyAssignment {
  std::string name = "sync";
  Strategy default_strategy = Strategy::II;
  std::map<std::string, Strategy> per_predicate;
  std::optional<ResolutionPolicy> default_policy;
  std::map<std::string, ResolutionPolicy> per_predicate_policy;

  Strategy strategy_for(const std::string& predicate) const {
    auto it = per_predicate.find(predicate);
    return it == per_predicate.end() ? default_strategy : it->second;
  }
};

struct SyncWarnings {
  size_t missing_source_deletes = 0;  // deletions of triples not present
  size_t missing_target_deletes = 0;
  size_t requirement1_violations = 0;  // target triples absent from the source
  bool requirement2_skip = false;      // identical changesets, nothing to reconcile
  std::vector<std::string> messages;
};

struct SyncStats {
  size_t out_source_added = 0;
  size_t out_source_removed = 0;
  size_t out_target_added = 0;
  size_t out_target_removed = 0;
  size_t conflicting_triples = 0;  // distinct triples across all X sets
  size_t records_total = 0;
  size_t records_flagged = 0;
  size_t resolutions_applied = 0;
};

struct SyncOutcome {
  Dataset source_after;
  Dataset target_after;
  Changeset out_source;  // relative to the source snapshot at t_i
  Changeset out_target;  // relative to the target snapshot at t_i
  std::vector<ConflictRecord> conflicts;
  std::vector<std::pair<std::string, Resolution>> resolutions;  // key -> outcome
  SyncStats stats;
  SyncWarnings warnings;
};

namespace detail {

inline Dataset filter_by_predicate(const Dataset& d, const std::set<std::string>& preds) {
  Dataset out;
  for (const auto& t : d)
    if (preds.count(t.predicate.value()) > 0) out.insert(t);
  return out;
}

inline SideDelta restrict_delta(const SideDelta& delta, const std::set<std::string>& preds) {
  SideDelta out;
  out.changes.label = delta.changes.label;
  out.changes.added = filter_by_predicate(delta.changes.added, preds);
  out.changes.deleted = filter_by_predicate(delta.changes.deleted, preds);
  out.tombstones = filter_by_predicate(delta.tombstones, preds);
  return out;
}

inline void collect_predicates(const SideDelta& delta, std::set<std::string>& out) {
  for (const auto& t : delta.changes.added) out.insert(t.predicate.value());
  for (const auto& t : delta.changes.deleted) out.insert(t.predicate.value());
  for (const auto& t : delta.tombstones) out.insert(t.predicate.value());
}

inline size_t count_missing(const Dataset& state, const Dataset& deletes) {
  size_t n = 0;
  for (const auto& t : deletes)
    if (!state.contains(t)) ++n;
  return n;
}

inline CandidateSide side_from_mask(int mask) {
  if (mask == 1) return CandidateSide::Source;
  if (mask == 2) return CandidateSide::Target;
  return CandidateSide::Both;
}

// Plain merge of both deltas with target precedence: target deletions and
// tombstones beat source additions, target additions survive everything,
// in-window tombstones on either side also clear pre-existing state.
inline Dataset merge_into(const Dataset& state, const SideDelta& source,
                          const SideDelta& target) {
  Dataset out;
  auto killed = [&](const Triple& t) {
    return source.changes.deleted.contains(t) || target.changes.deleted.contains(t) ||
           source.tombstones.contains(t) || target.tombstones.contains(t);
  };
  for (const auto& t : state)
    if (!killed(t)) out.insert(t);
  for (const auto& t : source.changes.added)
    if (!target.changes.deleted.contains(t) && !target.tombstones.contains(t)) out.insert(t);
  for (const auto& t : target.changes.added) out.insert(t);
  return out;
}

}  // namespace detail

// Conflict detection plus the strategy III/IV transformation for one group
// of predicates. Appends records and resolutions, returns the X set.
inline Dataset cdr_pass(Dataset& source_state, Dataset& target_state,
                        const Dataset& target_base, const SideDelta& source,
                        const SideDelta& target, bool resolve_conflicts,
                        const StrategyAssignment& assignment, const ProfileRegistry& profiles,
                        const SchemaGraph& schema, const SimilarityConfig& simcfg,
                        const AnnotationIndex* annotations, ResolutionContext ctx,
                        std::map<std::string, CandidateSide>& chosen_sides,
                        std::vector<ConflictRecord>& records_out,
                        std::vector<std::pair<std::string, Resolution>>& resolutions_out) {
  std::vector<ConflictRecord> records =
      detect_conflicts(source, target, target_base, profiles, schema, simcfg);

  Dataset x_set;
  Dataset y_set;
  for (const auto& rec : records) {
    if (!rec.semantically_conflicting) continue;
    for (const auto& v : rec.survivors) x_set.insert({rec.subject, rec.predicate, v});

    if (!resolve_conflicts) continue;

    std::vector<ValueMetadata> candidates;
    for (size_t i = 0; i < rec.contenders.size(); ++i) {
      ValueMetadata m;
      m.value = rec.contenders[i];
      m.side = detail::side_from_mask(rec.contender_sides[i]);
      m.source_name = m.side == CandidateSide::Source ? "source" : "target";
      bool existing = false, source_added = false, target_added = false;
      for (const auto& c : rec.candidates) {
        if (!(c.value == m.value)) continue;
        existing |= c.origin == Origin::Existing;
        source_added |= c.origin == Origin::SourceAdded;
        target_added |= c.origin == Origin::TargetAdded;
      }
      m.order_index = existing ? 0 : source_added ? 1 : 2;
      (void)target_added;
      if (annotations) {
        if (const Annotation* a = annotations->find(rec.subject, rec.predicate, m.value)) {
          m.timestamp = a->timestamp;
          m.quality = a->quality;
          if (!a->source_name.empty()) m.source_name = a->source_name;
        }
      }
      candidates.push_back(std::move(m));
    }

    const std::string& pred = rec.predicate.value();
    ResolutionPolicy policy;
    if (auto it = assignment.per_predicate_policy.find(pred);
        it != assignment.per_predicate_policy.end()) {
      policy = it->second;
    } else if (assignment.default_policy) {
      policy = *assignment.default_policy;
    } else {
      policy = auto_select_policy(profiles.get(pred), candidates);
    }

    ctx.subject = rec.subject;
    ctx.predicate = rec.predicate;
    ctx.chosen_sides = &chosen_sides;
    Resolution res;
    try {
      res = resolve(candidates, policy, profiles.get(pred), ctx);
    } catch (const ResolutionError& e) {
      throw ResolutionError(e.kind(),
                            std::string(e.what()) + " (key " + rec.key() + ")");
    }

    for (const auto& v : res.kept) y_set.insert({rec.subject, rec.predicate, v});
    if (!res.synthesized) {
      bool pure_source = false, pure_target = false, all_both = true;
      for (const auto& v : res.kept) {
        for (size_t i = 0; i < rec.contenders.size(); ++i) {
          if (!(rec.contenders[i] == v)) continue;
          if (rec.contender_sides[i] == 1) pure_source = true, all_both = false;
          if (rec.contender_sides[i] == 2) pure_target = true, all_both = false;
        }
      }
      if (pure_source && !pure_target) chosen_sides[rec.key()] = CandidateSide::Source;
      else if (pure_target && !pure_source) chosen_sides[rec.key()] = CandidateSide::Target;
      else if (all_both) chosen_sides[rec.key()] = CandidateSide::Both;
    }
    resolutions_out.emplace_back(rec.key(), std::move(res));
  }

  auto transform = [&](Dataset& state) {
    Dataset merged = detail::merge_into(state, source, target);
    Dataset result = set_minus(merged, x_set);
    for (const auto& t : y_set) result.insert(t);
    state = std::move(result);
  };
  transform(source_state);
  transform(target_state);

  for (auto& r : records) records_out.push_back(std::move(r));
  return x_set;
}

// One full synchronization round between two replicas.
inline SyncOutcome synchronize(const Dataset& source_base, const Dataset& target_base,
                               const SideDelta& source_delta, const SideDelta& target_delta,
                               const StrategyAssignment& assignment,
                               const ProfileRegistry& profiles, const SchemaGraph& schema,
                               const SimilarityConfig& simcfg,
                               const AnnotationIndex* annotations = nullptr,
                               uint64_t seed = 0) {
  SyncOutcome out;

  for (const auto& t : target_base)
    if (!source_base.contains(t)) ++out.warnings.requirement1_violations;
  if (out.warnings.requirement1_violations > 0)
    out.warnings.messages.push_back(
        std::to_string(out.warnings.requirement1_violations) +
        " target triple(s) missing from the source replica; proceeding anyway");

  out.source_after = source_base;
  out.target_after = target_base;

  if (source_delta == target_delta) {
    // Identical deltas need no reconciliation; each side applies its own.
    // Tombstones still clear pre-existing triples, as the merge path would.
    out.warnings.requirement2_skip = true;
    out.warnings.messages.push_back("changesets are identical; conflict analysis skipped");
    out.warnings.missing_source_deletes =
        detail::count_missing(source_base, source_delta.changes.deleted);
    out.warnings.missing_target_deletes =
        detail::count_missing(target_base, target_delta.changes.deleted);
    out.source_after =
        apply(set_minus(source_base, source_delta.tombstones), source_delta.changes);
    out.target_after =
        apply(set_minus(target_base, target_delta.tombstones), target_delta.changes);
  } else {
    std::set<std::string> touched;
    detail::collect_predicates(source_delta, touched);
    detail::collect_predicates(target_delta, touched);

    std::map<Strategy, std::set<std::string>> buckets;
    for (const auto& p : touched) buckets[assignment.strategy_for(p)].insert(p);

    Dataset source_evolved = apply(source_base, source_delta.changes);
    Dataset target_evolved = apply(target_base, target_delta.changes);
    Dataset combined = set_union(set_union(target_base, source_delta.changes.added),
                                 target_delta.changes.added);

    ResolutionContext ctx;
    ctx.source_state = &source_evolved;
    ctx.target_state = &target_evolved;
    ctx.combined = &combined;
    ctx.default_seed = seed;
    std::map<std::string, CandidateSide> chosen_sides;

    for (const auto& [strategy, preds] : buckets) {
      SideDelta s = detail::restrict_delta(source_delta, preds);
      SideDelta t = detail::restrict_delta(target_delta, preds);
      switch (strategy) {
        case Strategy::I:
          out.warnings.missing_target_deletes +=
              detail::count_missing(out.target_after, s.changes.deleted);
          out.warnings.missing_source_deletes +=
              detail::count_missing(out.source_after, s.changes.deleted);
          out.target_after = apply(out.target_after, s.changes);
          out.source_after = apply(out.source_after, s.changes);
          break;
        case Strategy::II:
          out.warnings.missing_target_deletes +=
              detail::count_missing(out.target_after, t.changes.deleted);
          out.warnings.missing_source_deletes +=
              detail::count_missing(out.source_after, s.changes.deleted);
          out.target_after = apply(out.target_after, t.changes);
          out.source_after = apply(out.source_after, s.changes);
          break;
        case Strategy::III:
        case Strategy::IV: {
          Dataset x = cdr_pass(out.source_after, out.target_after, target_base, s, t,
                               strategy == Strategy::IV, assignment, profiles, schema, simcfg,
                               annotations, ctx, chosen_sides, out.conflicts, out.resolutions);
          out.stats.conflicting_triples += x.size();
          break;
        }
      }
    }

    std::sort(out.conflicts.begin(), out.conflicts.end(),
              [](const ConflictRecord& a, const ConflictRecord& b) { return a.key() < b.key(); });
    std::sort(out.resolutions.begin(), out.resolutions.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }

  out.out_source = diff(source_base, out.source_after);
  out.out_target = diff(target_base, out.target_after);
  out.stats.out_source_added = out.out_source.added.size();
  out.stats.out_source_removed = out.out_source.deleted.size();
  out.stats.out_target_added = out.out_target.added.size();
  out.stats.out_target_removed = out.out_target.deleted.size();
  out.stats.records_total = out.conflicts.size();
  for (const auto& r : out.conflicts)
    if (r.semantically_conflicting) ++out.stats.records_flagged;
  out.stats.resolutions_applied = out.resolutions.size();
  return out;
}

// Conflict detection and resolution with one uniform strategy (III when
// resolve_conflicts is false, IV otherwise).
inline SyncOutcome cdr(const Dataset& source_base, const Dataset& target_base,
                       const SideDelta& source_delta, const SideDelta& target_delta,
                       bool resolve_conflicts, const ProfileRegistry& profiles,
                       const SchemaGraph& schema, const SimilarityConfig& simcfg,
                       const AnnotationIndex* annotations = nullptr, uint64_t seed = 0,
                       const std::optional<ResolutionPolicy>& default_policy = std::nullopt) {
  StrategyAssignment assignment;
  assignment.default_strategy = resolve_conflicts ? Strategy::IV : Strategy::III;
  assignment.default_policy = default_policy;
  return synchronize(source_base, target_base, source_delta, target_delta, assignment, profiles,
                     schema, simcfg, annotations, seed);
}

inline QualityReport compute_quality(const SyncOutcome& outcome, const Dataset& target_base,
                                     const SideDelta& source_delta,
                                     const SideDelta& target_delta,
                                     bool objects_variant = false) {
  QualityReport q;
  q.completeness_source =
      completeness(outcome.target_after, target_base, source_delta.changes);
  q.completeness_target =
      completeness(outcome.target_after, target_base, target_delta.changes);
  q.consistency = consistency(outcome.target_after, target_base, source_delta.changes.added,
                              target_delta.changes.added, outcome.conflicts);
  auto conc = objects_variant ? conciseness_objects : conciseness;
  q.conciseness_before =
      conc({&target_base, &source_delta.changes.added, &target_delta.changes.added});
  q.conciseness_after =
      conc({&target_base, &outcome.out_source.added, &outcome.out_target.added});
  return q;
}

struct ScenarioResult {
  std::string name;
  SyncOutcome outcome;
  QualityReport quality;
  double runtime_seconds = 0;
};

inline std::vector<ScenarioResult> run_scenarios(
    const Dataset& source_base, const Dataset& target_base, const SideDelta& source_delta,
    const SideDelta& target_delta, const std::vector<StrategyAssignment>& scenarios,
    const ProfileRegistry& profiles, const SchemaGraph& schema, const SimilarityConfig& simcfg,
    const AnnotationIndex* annotations = nullptr, uint64_t seed = 0,
    bool objects_variant = false) {
  std::vector<ScenarioResult> out;
  for (const auto& assignment : scenarios) {
    auto start = std::chrono::steady_clock::now();
    ScenarioResult r;
    r.name = assignment.name;
    r.outcome = synchronize(source_base, target_base, source_delta, target_delta, assignment,
                            profiles, schema, simcfg, annotations, seed);
    r.quality =
        compute_quality(r.outcome, target_base, source_delta, target_delta, objects_variant);
    r.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(r));
  }
  return out;
}

// The standard sweep: each uniform strategy, then a mixed assignment that
// resolves dbp:office while fast-forwarding the other report predicates.
inline std::vector<StrategyAssignment> default_scenarios() {
  std::vector<StrategyAssignment> out;
  for (Strategy s : {Strategy::I, Strategy::II, Strategy::III, Strategy::IV}) {
    StrategyAssignment a;
    a.name = std::string("strategy-") + strategy_name(s);
    a.default_strategy = s;
    if (s == Strategy::IV) a.default_policy = ResolutionPolicy{};  // any, engine seed
    out.push_back(std::move(a));
  }
  StrategyAssignment mixed;
  mixed.name = "per-predicate";
  mixed.default_strategy = Strategy::I;
  mixed.per_predicate["http://dbpedia.org/property/office"] = Strategy::IV;
  mixed.per_predicate_policy["http://dbpedia.org/property/office"] = ResolutionPolicy{};
  out.push_back(std::move(mixed));
  return out;
}

// Scenario table, deterministic: no timing column, integer percents.
inline std::string scenario_report_tsv(const std::vector<ScenarioResult>& results) {
  std::string out =
      "scenario\toutSourceAdded\toutSourceRemoved\toutTargetAdded\toutTargetRemoved"
      "\tconflictingTriples\tcompletenessSourcePct\tcompletenessTargetPct\tconsistencyPct"
      "\tconcisenessBeforePct\tconcisenessAfterPct\n";
  for (const auto& r : results) {
    const SyncStats& s = r.outcome.stats;
    out += r.name;
    out += '\t' + std::to_string(s.out_source_added);
    out += '\t' + std::to_string(s.out_source_removed);
    out += '\t' + std::to_string(s.out_target_added);
    out += '\t' + std::to_string(s.out_target_removed);
    out += '\t' + std::to_string(s.conflicting_triples);
    out += '\t' + std::to_string(r.quality.completeness_source.percent());
    out += '\t' + std::to_string(r.quality.completeness_target.percent());
    out += '\t' + std::to_string(r.quality.consistency.percent());
    out += '\t' + std::to_string(r.quality.conciseness_before.percent());
    out += '\t' + std::to_string(r.quality.conciseness_after.percent());
    out += '\n';
  }
  return out;
}

}  // namespace coevo
