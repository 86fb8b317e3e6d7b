// coevo.cpp — command line front end: diff, sync, conflicts, scenario.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "coevo/changeset.hpp"
#include "coevo/config.hpp"
#include "coevo/conflict.hpp"
#include "coevo/metrics.hpp"
#include "coevo/ntriples.hpp"
#include "coevo/sync.hpp"

namespace fs = std::filesystem;
using namespace coevo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 2;        // unparseable or inconsistent input data
constexpr int kExitResolution = 3;  // a resolution policy could not decide
constexpr int kExitConfig = 4;      // bad configuration

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write " + path.string());
  out << content;
}

Dataset load_dataset(const fs::path& path) {
  std::string data = slurp(path);
  if (path.extension() == ".gz") data = coevo::detail::gunzip(data, path.filename().string());
  return parse_ntriples(data);
}

struct SyncOptions {
  std::string source, target, source_changes, target_changes, config, out;
  std::string schema, annotations;
  uint64_t seed = 0;
  bool seed_given = false;
  bool strict = false;
};

void add_sync_options(CLI::App* cmd, SyncOptions& o) {
  cmd->add_option("--source", o.source, "source dataset (N-Triples)")->required();
  cmd->add_option("--target", o.target, "target dataset (N-Triples)")->required();
  cmd->add_option("--source-changes", o.source_changes, "source changeset folder")->required();
  cmd->add_option("--target-changes", o.target_changes, "target changeset folder")->required();
  cmd->add_option("--config", o.config, "engine configuration (JSON)")->required();
  cmd->add_option("--out", o.out, "output directory")->required();
  cmd->add_option("--schema", o.schema, "schema overriding the config entry");
  cmd->add_option("--annotations", o.annotations, "annotations overriding the config entry");
  cmd->add_option("--seed", o.seed, "run seed overriding the config entry")
      ->each([&o](const std::string&) { o.seed_given = true; });
  cmd->add_flag("--strict", o.strict, "treat data warnings as errors");
}

struct LoadedRun {
  Dataset source_base, target_base;
  SideDelta source_delta, target_delta;
  EngineConfig config;
  SchemaGraph schema;
  ProfileRegistry profiles;
  AnnotationIndex annotations;
  bool has_annotations = false;
  uint64_t seed = 0;
};

LoadedRun load_run(const SyncOptions& o) {
  LoadedRun r;
  r.source_base = load_dataset(o.source);
  r.target_base = load_dataset(o.target);
  r.source_delta = merge_changesets(load_changesets(o.source_changes));
  r.target_delta = merge_changesets(load_changesets(o.target_changes));
  r.config = load_config(o.config);

  fs::path schema_path = !o.schema.empty()
                             ? fs::path(o.schema)
                             : r.config.schema_path.value_or(fs::path());
  if (!schema_path.empty()) r.schema = load_schema(load_dataset(schema_path));
  r.profiles = build_profiles(r.config, r.schema);

  fs::path ann_path = !o.annotations.empty()
                          ? fs::path(o.annotations)
                          : r.config.annotations_path.value_or(fs::path());
  if (!ann_path.empty()) {
    r.annotations = parse_annotations(slurp(ann_path));
    r.has_annotations = true;
  }

  // Seed precedence: COEVO_SEED, then --seed, then the config file.
  r.seed = r.config.seed.value_or(0);
  if (o.seed_given) r.seed = o.seed;
  if (const char* env = std::getenv("COEVO_SEED")) {
    char* end = nullptr;
    unsigned long long v = strtoull(env, &end, 10);
    if (end == env || *end != '\0') throw ConfigError("COEVO_SEED is not an integer");
    r.seed = v;
  }
  return r;
}

int finish_warnings(const SyncWarnings& w, bool strict) {
  for (const auto& m : w.messages) std::cerr << "warning: " << m << "\n";
  if (w.missing_source_deletes + w.missing_target_deletes > 0)
    std::cerr << "warning: " << w.missing_source_deletes + w.missing_target_deletes
              << " deletion(s) targeted absent triples\n";
  bool bad = w.requirement1_violations > 0 ||
             w.missing_source_deletes + w.missing_target_deletes > 0;
  if (strict && bad) {
    std::cerr << "error: warnings present in strict mode\n";
    return kExitData;
  }
  return kExitOk;
}

void write_outcome_files(const fs::path& dir, const SyncOutcome& outcome) {
  write_file(dir / "source.after.nt", serialize_ntriples(outcome.source_after));
  write_file(dir / "target.after.nt", serialize_ntriples(outcome.target_after));
  write_file(dir / "out-source.added.nt", serialize_ntriples(outcome.out_source.added));
  write_file(dir / "out-source.removed.nt", serialize_ntriples(outcome.out_source.deleted));
  write_file(dir / "out-target.added.nt", serialize_ntriples(outcome.out_target.added));
  write_file(dir / "out-target.removed.nt", serialize_ntriples(outcome.out_target.deleted));
  write_file(dir / "conflicts.tsv", conflicts_to_tsv(outcome.conflicts));
}

int run_diff(const std::string& old_path, const std::string& new_path, const std::string& out,
             long seq) {
  Dataset before = load_dataset(old_path);
  Dataset after = load_dataset(new_path);
  Changeset c = diff(before, after);
  char name[32];
  snprintf(name, sizeof(name), "%06ld", seq);
  fs::create_directories(out);
  write_file(fs::path(out) / (std::string(name) + ".added.nt"), serialize_ntriples(c.added));
  write_file(fs::path(out) / (std::string(name) + ".removed.nt"), serialize_ntriples(c.deleted));
  std::cout << "added " << c.added.size() << ", removed " << c.deleted.size() << "\n";
  return kExitOk;
}

int run_sync(const SyncOptions& o) {
  LoadedRun r = load_run(o);
  SyncOutcome outcome = synchronize(r.source_base, r.target_base, r.source_delta, r.target_delta,
                                    r.config.assignment, r.profiles, r.schema,
                                    r.config.similarity,
                                    r.has_annotations ? &r.annotations : nullptr, r.seed);
  write_outcome_files(o.out, outcome);

  ScenarioResult row;
  row.name = r.config.assignment.name;
  row.quality = compute_quality(outcome, r.target_base, r.source_delta, r.target_delta,
                                r.config.objects_conciseness);
  row.outcome = std::move(outcome);
  write_file(fs::path(o.out) / "report.tsv", scenario_report_tsv({row}));

  const SyncStats& s = row.outcome.stats;
  std::cout << "out-source +" << s.out_source_added << " -" << s.out_source_removed
            << ", out-target +" << s.out_target_added << " -" << s.out_target_removed
            << ", conflicting " << s.conflicting_triples << ", resolved "
            << s.resolutions_applied << "\n";
  return finish_warnings(row.outcome.warnings, o.strict);
}

int run_conflicts(const SyncOptions& o) {
  LoadedRun r = load_run(o);
  auto records = detect_conflicts(r.source_delta, r.target_delta, r.target_base, r.profiles,
                                  r.schema, r.config.similarity);
  fs::create_directories(o.out);
  write_file(fs::path(o.out) / "conflicts.tsv", conflicts_to_tsv(records));

  size_t flagged = 0;
  for (const auto& rec : records) {
    if (rec.semantically_conflicting) ++flagged;
    if (rec.matched.size() > 1) {
      std::cerr << "warning: key " << rec.key() << " matched";
      for (CaseTag t : rec.matched) std::cerr << " " << case_tag_name(t);
      std::cerr << "; kept " << case_tag_name(rec.matched.front()) << "\n";
    }
  }
  std::cout << records.size() << " record(s), " << flagged << " semantically conflicting\n";
  return kExitOk;
}

int run_scenario(const SyncOptions& o) {
  LoadedRun r = load_run(o);
  std::vector<StrategyAssignment> scenarios =
      r.config.scenarios.empty() ? default_scenarios() : r.config.scenarios;
  auto results = run_scenarios(r.source_base, r.target_base, r.source_delta, r.target_delta,
                               scenarios, r.profiles, r.schema, r.config.similarity,
                               r.has_annotations ? &r.annotations : nullptr, r.seed,
                               r.config.objects_conciseness);
  write_file(fs::path(o.out) / "report.tsv", scenario_report_tsv(results));
  int rc = kExitOk;
  for (const auto& res : results) {
    write_outcome_files(fs::path(o.out) / res.name, res.outcome);
    char secs[32];
    snprintf(secs, sizeof(secs), "%.3f", res.runtime_seconds);
    std::cout << res.name << ": conflicting " << res.outcome.stats.conflicting_triples
              << ", runtime " << secs << "s\n";
    int wrc = finish_warnings(res.outcome.warnings, o.strict);
    if (wrc != kExitOk) rc = wrc;
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"co-evolution engine for replicated RDF datasets"};
  app.require_subcommand(1);

  std::string diff_old, diff_new, diff_out;
  long diff_seq = 1;
  CLI::App* diff_cmd = app.add_subcommand("diff", "changeset between two dataset versions");
  diff_cmd->add_option("old", diff_old, "older dataset")->required();
  diff_cmd->add_option("new", diff_new, "newer dataset")->required();
  diff_cmd->add_option("--out", diff_out, "output changeset folder")->required();
  diff_cmd->add_option("--seq", diff_seq, "sequence number for the output files");

  SyncOptions sync_opts, conflict_opts, scenario_opts;
  CLI::App* sync_cmd = app.add_subcommand("sync", "synchronize two replicas");
  add_sync_options(sync_cmd, sync_opts);
  CLI::App* conflicts_cmd =
      app.add_subcommand("conflicts", "detect conflicts without synchronizing");
  add_sync_options(conflicts_cmd, conflict_opts);
  CLI::App* scenario_cmd = app.add_subcommand("scenario", "run a scenario sweep");
  add_sync_options(scenario_cmd, scenario_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (diff_cmd->parsed()) return run_diff(diff_old, diff_new, diff_out, diff_seq);
    if (sync_cmd->parsed()) return run_sync(sync_opts);
    if (conflicts_cmd->parsed()) return run_conflicts(conflict_opts);
    if (scenario_cmd->parsed()) return run_scenario(scenario_opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ResolutionError& e) {
    std::cerr << "resolution error: " << e.what() << "\n";
    return kExitResolution;
  } catch (const ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const IngestError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
