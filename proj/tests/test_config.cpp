// test_config.cpp — strict JSON parsing, inheritance, profile assembly.

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "coevo/config.hpp"

using namespace coevo;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("coevo-config-" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text,
                      const std::string& name = "engine.json") {
  fs::path p = dir / name;
  std::ofstream out(p, std::ios::binary);
  out << text;
  out.close();
  return p;
}

EngineConfig load_text(const std::string& tag, const std::string& text) {
  return load_config(write_config(fresh_dir(tag), text));
}

}  // namespace

TEST_CASE("a minimal config needs only the default strategy") {
  EngineConfig cfg = load_text("minimal", R"({"defaultStrategy": "II"})");
  CHECK(cfg.assignment.default_strategy == Strategy::II);
  CHECK(cfg.assignment.name == "engine");
  CHECK(cfg.assignment.per_predicate.empty());
  CHECK_FALSE(cfg.assignment.default_policy.has_value());
  CHECK(cfg.scenarios.empty());
  CHECK_FALSE(cfg.schema_path.has_value());
  CHECK_FALSE(cfg.annotations_path.has_value());
  CHECK_FALSE(cfg.seed.has_value());
  CHECK_FALSE(cfg.objects_conciseness);
  CHECK(cfg.similarity.label_threshold == 0.5);
}

TEST_CASE("malformed files are rejected with config errors") {
  CHECK_THROWS_AS(load_config(fresh_dir("absent") / "nope.json"), ConfigError);
  CHECK_THROWS_AS(load_text("notjson", "{nope"), ConfigError);
  CHECK_THROWS_AS(load_text("array", "[]"), ConfigError);
  CHECK_THROWS_AS(load_text("nodefault", R"({"strategies": {}})"), ConfigError);
  CHECK_THROWS_AS(load_text("badstrat", R"({"defaultStrategy": "V"})"), ConfigError);
  CHECK_THROWS_AS(load_text("numstrat", R"({"defaultStrategy": 3})"), ConfigError);
}

TEST_CASE("unknown keys are rejected at every level") {
  try {
    load_text("rootkey", R"({"defaultStrategy": "I", "stratgies": {}})");
    FAIL("expected rejection");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("stratgies") != std::string::npos);
  }
  CHECK_THROWS_AS(
      load_text("policykey", R"({"defaultStrategy": "I",
                                 "defaultPolicy": {"function": "any", "sed": 1}})"),
      ConfigError);
  CHECK_THROWS_AS(
      load_text("propkey", R"({"defaultStrategy": "I",
                               "properties": {"http://p": {"threshold": 0.5}}})"),
      ConfigError);
  CHECK_THROWS_AS(
      load_text("scenkey", R"({"defaultStrategy": "I",
                               "scenarios": [{"schema": "x.nt"}]})"),
      ConfigError);
}

TEST_CASE("per-predicate strategies are parsed into the assignment") {
  EngineConfig cfg = load_text("perpred", R"({
    "defaultStrategy": "III",
    "strategies": {"http://p/a": "I", "http://p/b": "IV"}
  })");
  CHECK(cfg.assignment.strategy_for("http://p/a") == Strategy::I);
  CHECK(cfg.assignment.strategy_for("http://p/b") == Strategy::IV);
  CHECK(cfg.assignment.strategy_for("http://p/c") == Strategy::III);

  CHECK_THROWS_AS(load_text("stratlist", R"({"defaultStrategy": "I", "strategies": []})"),
                  ConfigError);
}

TEST_CASE("policies parse their function, params, and seed") {
  EngineConfig cfg = load_text("policies", R"({
    "defaultStrategy": "IV",
    "defaultPolicy": {"function": "threshold",
                      "params": {"limit": 0.5, "n": 3, "flag": true, "s": "x"},
                      "seed": 42},
    "policies": {
      "http://p/a": {"function": "latest"},
      "http://p/b": {"function": "auto"}
    }
  })");
  REQUIRE(cfg.assignment.default_policy.has_value());
  const ResolutionPolicy& p = *cfg.assignment.default_policy;
  CHECK(p.function == PolicyFunction::Threshold);
  CHECK(p.params.at("limit") == "0.5");
  CHECK(p.params.at("n") == "3");
  CHECK(p.params.at("flag") == "true");
  CHECK(p.params.at("s") == "x");
  CHECK(p.rng_seed == 42);

  // "auto" leaves the predicate to automatic selection: no stored policy.
  CHECK(cfg.assignment.per_predicate_policy.count("http://p/a") == 1);
  CHECK(cfg.assignment.per_predicate_policy.count("http://p/b") == 0);
  CHECK(cfg.assignment.per_predicate_policy.at("http://p/a").function ==
        PolicyFunction::Latest);

  // A top-level "auto" wipes the default, restoring automatic selection.
  EngineConfig none = load_text("autodefault", R"({
    "defaultStrategy": "IV", "defaultPolicy": {"function": "auto"}
  })");
  CHECK_FALSE(none.assignment.default_policy.has_value());

  CHECK_THROWS_AS(
      load_text("nofunction", R"({"defaultStrategy": "I", "defaultPolicy": {"seed": 1}})"),
      ConfigError);
  CHECK_THROWS_AS(
      load_text("badfunction",
                R"({"defaultStrategy": "I", "defaultPolicy": {"function": "vote"}})"),
      ConfigError);
  CHECK_THROWS_AS(
      load_text("badseed",
                R"({"defaultStrategy": "I", "defaultPolicy": {"function": "any", "seed": "x"}})"),
      ConfigError);
}

TEST_CASE("property profiles parse kinds, roles, and thresholds") {
  EngineConfig cfg = load_text("props", R"({
    "defaultStrategy": "I",
    "properties": {
      "http://p/name": {"kind": "datatype", "role": "label", "labelThreshold": 0.05},
      "http://p/link": {"kind": "object", "functional": true},
      "http://p/misc": {"kind": "unknown", "role": "none"}
    }
  })");
  REQUIRE(cfg.property_overrides.size() == 3);
  const PropertyProfile* name = nullptr;
  for (const auto& p : cfg.property_overrides)
    if (p.iri == "http://p/name") name = &p;
  REQUIRE(name != nullptr);
  CHECK(name->kind == PropertyKind::Datatype);
  CHECK(name->role == SpecialRole::LabelLike);
  CHECK(name->label_threshold == 0.05);

  CHECK_THROWS_AS(
      load_text("badkind",
                R"({"defaultStrategy": "I", "properties": {"http://p": {"kind": "strange"}}})"),
      ConfigError);
  CHECK_THROWS_AS(
      load_text("badrole",
                R"({"defaultStrategy": "I", "properties": {"http://p": {"role": "king"}}})"),
      ConfigError);
  CHECK_THROWS_AS(
      load_text("bigthreshold",
                R"({"defaultStrategy": "I",
                    "properties": {"http://p": {"labelThreshold": 1.5}}})"),
      ConfigError);
  CHECK_THROWS_AS(
      load_text("negthreshold",
                R"({"defaultStrategy": "I",
                    "properties": {"http://p": {"labelThreshold": -0.1}}})"),
      ConfigError);
}

TEST_CASE("built-in roles cannot be repurposed") {
  const std::string type_iri = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

  // Restating the built-in role is fine; leaving it out inherits it.
  EngineConfig same = load_text("rolesame", R"({
    "defaultStrategy": "I",
    "properties": {"http://www.w3.org/1999/02/22-rdf-syntax-ns#type": {"role": "type"}}
  })");
  CHECK(same.property_overrides[0].role == SpecialRole::TypeAssertion);

  EngineConfig inherit = load_text("roleinherit", R"({
    "defaultStrategy": "I",
    "properties": {"http://www.w3.org/1999/02/22-rdf-syntax-ns#type": {"functional": true}}
  })");
  CHECK(inherit.property_overrides[0].role == SpecialRole::TypeAssertion);

  try {
    load_text("roleflip", R"({
      "defaultStrategy": "I",
      "properties": {"http://www.w3.org/1999/02/22-rdf-syntax-ns#type": {"role": "label"}}
    })");
    FAIL("expected rejection");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(type_iri) != std::string::npos);
  }
  CHECK_THROWS_AS(
      load_text("samealias", R"({
        "defaultStrategy": "I",
        "properties": {"http://www.w3.org/2002/07/owl#sameAs": {"role": "none"}}
      })"),
      ConfigError);

  // rdfs:label is a default, not a lock; a different role is accepted.
  EngineConfig label = load_text("labelfree", R"({
    "defaultStrategy": "I",
    "properties": {"http://www.w3.org/2000/01/rdf-schema#label": {"role": "none"}}
  })");
  CHECK(label.property_overrides[0].role == SpecialRole::None);
}

TEST_CASE("the global similarity threshold is range checked") {
  EngineConfig cfg =
      load_text("simok", R"({"defaultStrategy": "I", "labelSimilarityThreshold": 0.3})");
  CHECK(cfg.similarity.label_threshold == 0.3);
  CHECK_THROWS_AS(
      load_text("simbig", R"({"defaultStrategy": "I", "labelSimilarityThreshold": 1.2})"),
      ConfigError);
  CHECK_THROWS_AS(
      load_text("simneg", R"({"defaultStrategy": "I", "labelSimilarityThreshold": -0.5})"),
      ConfigError);
  CHECK_THROWS_AS(
      load_text("simtext", R"({"defaultStrategy": "I", "labelSimilarityThreshold": "high"})"),
      ConfigError);
}

TEST_CASE("seeds and flags parse with type checks") {
  EngineConfig cfg = load_text("seeded", R"({
    "defaultStrategy": "I", "rngSeed": 7, "objectsConciseness": true
  })");
  CHECK(cfg.seed == 7);
  CHECK(cfg.objects_conciseness);
  CHECK_THROWS_AS(load_text("seedtext", R"({"defaultStrategy": "I", "rngSeed": "lucky"})"),
                  ConfigError);
  CHECK_THROWS_AS(
      load_text("flagtext", R"({"defaultStrategy": "I", "objectsConciseness": "yes"})"),
      ConfigError);
}

TEST_CASE("schema and annotation paths resolve against the config file") {
  fs::path dir = fresh_dir("paths");
  fs::create_directories(dir / "data");
  fs::path cfg_path = write_config(dir, R"({
    "defaultStrategy": "I",
    "schema": "data/schema.nt",
    "annotations": "/abs/annotations.tsv"
  })");
  EngineConfig cfg = load_config(cfg_path);
  REQUIRE(cfg.schema_path.has_value());
  CHECK(*cfg.schema_path == dir / "data" / "schema.nt");
  REQUIRE(cfg.annotations_path.has_value());
  CHECK(*cfg.annotations_path == fs::path("/abs/annotations.tsv"));
}

TEST_CASE("scenarios inherit the top level but start with clean maps") {
  EngineConfig cfg = load_text("scenarios", R"({
    "defaultStrategy": "III",
    "strategies": {"http://p/a": "I"},
    "defaultPolicy": {"function": "latest"},
    "policies": {"http://p/b": {"function": "max"}},
    "scenarios": [
      {},
      {"name": "resolve-all", "defaultStrategy": "IV",
       "strategies": {"http://p/c": "II"},
       "policies": {"http://p/c": {"function": "any"}}}
    ]
  })");
  REQUIRE(cfg.scenarios.size() == 2);

  const StrategyAssignment& plain = cfg.scenarios[0];
  CHECK(plain.name == "scenario-1");
  CHECK(plain.default_strategy == Strategy::III);  // inherited
  CHECK(plain.per_predicate.empty());              // maps are not inherited
  CHECK(plain.per_predicate_policy.empty());
  REQUIRE(plain.default_policy.has_value());
  CHECK(plain.default_policy->function == PolicyFunction::Latest);

  const StrategyAssignment& custom = cfg.scenarios[1];
  CHECK(custom.name == "resolve-all");
  CHECK(custom.default_strategy == Strategy::IV);
  CHECK(custom.strategy_for("http://p/c") == Strategy::II);
  CHECK(custom.per_predicate_policy.at("http://p/c").function == PolicyFunction::Any);

  CHECK_THROWS_AS(load_text("scenobj", R"({"defaultStrategy": "I", "scenarios": {}})"),
                  ConfigError);
  CHECK_THROWS_AS(load_text("scenstr", R"({"defaultStrategy": "I", "scenarios": ["x"]})"),
                  ConfigError);
}

TEST_CASE("profile assembly layers schema facts under config overrides") {
  fs::path root(COEVO_FIXTURES_DIR);
  SchemaGraph schema = load_schema(detail::read_ntriples_file(root / "schema.nt"));

  EngineConfig cfg;
  PropertyProfile year;  // adds only a role; schema facts must survive
  year.iri = "http://dbpedia.org/property/birthYear";
  year.role = SpecialRole::None;
  cfg.property_overrides.push_back(year);
  PropertyProfile name;
  name.iri = "http://xmlns.com/foaf/0.1/name";
  name.kind = PropertyKind::Datatype;
  name.role = SpecialRole::LabelLike;
  name.label_threshold = 0.05;
  cfg.property_overrides.push_back(name);

  ProfileRegistry reg = build_profiles(cfg, schema);

  PropertyProfile y = reg.get("http://dbpedia.org/property/birthYear");
  CHECK(y.functional);                      // declared by the schema, kept
  CHECK(y.kind == PropertyKind::Datatype);  // inherited through the merge

  PropertyProfile n = reg.get("http://xmlns.com/foaf/0.1/name");
  CHECK(n.role == SpecialRole::LabelLike);
  CHECK(n.label_threshold == 0.05);

  // Built-ins remain present when nothing overrides them.
  CHECK(reg.get("http://www.w3.org/1999/02/22-rdf-syntax-ns#type").role ==
        SpecialRole::TypeAssertion);
}

TEST_CASE("the bundled configuration files load as written") {
  fs::path root(COEVO_FIXTURES_DIR);

  EngineConfig s1 = load_config(root / "config-s1.json");
  CHECK(s1.assignment.default_strategy == Strategy::I);
  CHECK(s1.assignment.name == "config-s1");
  REQUIRE(s1.schema_path.has_value());
  CHECK(fs::exists(*s1.schema_path));

  EngineConfig s2 = load_config(root / "config-s2.json");
  CHECK(s2.assignment.default_strategy == Strategy::II);

  EngineConfig c3 = load_config(root / "config-c3.json");
  CHECK(c3.assignment.default_strategy == Strategy::III);
  REQUIRE(c3.property_overrides.size() == 1);
  CHECK(c3.property_overrides[0].iri == "http://xmlns.com/foaf/0.1/name");
  CHECK(c3.property_overrides[0].label_threshold == 0.05);

  EngineConfig c4 = load_config(root / "config-c4.json");
  CHECK(c4.assignment.default_strategy == Strategy::IV);
  CHECK(c4.similarity.label_threshold == 0.5);
  CHECK(c4.seed == 1);
  CHECK(c4.assignment.per_predicate_policy.at("http://dbpedia.org/property/birthYear").function ==
        PolicyFunction::Any);
}
