#pragma once
// config.hpp — JSON engine configuration with strict key checking.

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coevo/errors.hpp"
#include "coevo/resolution.hpp"
#include "coevo/schema.hpp"
#include "coevo/sync.hpp"

namespace coevo {

// Parsed configuration file. Paths stay relative to the config location
// until resolved here; profiles are only complete once a schema is folded
// in via build_profiles.
struct EngineConfig {
  StrategyAssignment assignment;
  std::vector<StrategyAssignment> scenarios;  // empty means the default sweep
  SimilarityConfig similarity;
  std::vector<PropertyProfile> property_overrides;
  std::optional<std::filesystem::path> schema_path;
  std::optional<std::filesystem::path> annotations_path;
  std::optional<uint64_t> seed;
  bool objects_conciseness = false;
};

namespace detail {

using json = nlohmann::json;

inline void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                       const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

inline std::string scalar_to_string(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_float()) {
    std::string s = v.dump();
    return s;
  }
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  throw ConfigError("expected a scalar at " + where);
}

inline std::optional<ResolutionPolicy> parse_policy(const json& obj, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  check_keys(obj, {"function", "params", "seed"}, where);
  if (!obj.contains("function") || !obj["function"].is_string())
    throw ConfigError(where + " needs a 'function' name");
  std::string name = obj["function"].get<std::string>();
  if (name == "auto") return std::nullopt;
  auto fn = parse_policy_function(name);
  if (!fn) throw ConfigError("unknown resolution function '" + name + "' in " + where);
  ResolutionPolicy p;
  p.function = *fn;
  if (obj.contains("params")) {
    if (!obj["params"].is_object()) throw ConfigError(where + ".params must be an object");
    for (auto it = obj["params"].begin(); it != obj["params"].end(); ++it)
      p.params[it.key()] = scalar_to_string(it.value(), where + ".params." + it.key());
  }
  if (obj.contains("seed")) {
    if (!obj["seed"].is_number_unsigned() && !obj["seed"].is_number_integer())
      throw ConfigError(where + ".seed must be an integer");
    p.rng_seed = obj["seed"].get<uint64_t>();
  }
  return p;
}

inline Strategy parse_strategy_or_throw(const json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError(where + " must be a strategy name (I, II, III, IV)");
  auto s = parse_strategy(v.get<std::string>());
  if (!s) throw ConfigError("unknown strategy '" + v.get<std::string>() + "' in " + where);
  return *s;
}

inline void parse_assignment_fields(const json& obj, StrategyAssignment& a,
                                    const std::string& where, bool require_default) {
  if (obj.contains("defaultStrategy")) {
    a.default_strategy = parse_strategy_or_throw(obj["defaultStrategy"], where + ".defaultStrategy");
  } else if (require_default) {
    throw ConfigError(where + " needs 'defaultStrategy'");
  }
  if (obj.contains("strategies")) {
    if (!obj["strategies"].is_object())
      throw ConfigError(where + ".strategies must map predicate IRIs to strategies");
    for (auto it = obj["strategies"].begin(); it != obj["strategies"].end(); ++it)
      a.per_predicate[it.key()] =
          parse_strategy_or_throw(it.value(), where + ".strategies." + it.key());
  }
  if (obj.contains("defaultPolicy"))
    a.default_policy = parse_policy(obj["defaultPolicy"], where + ".defaultPolicy");
  if (obj.contains("policies")) {
    if (!obj["policies"].is_object())
      throw ConfigError(where + ".policies must map predicate IRIs to policies");
    for (auto it = obj["policies"].begin(); it != obj["policies"].end(); ++it) {
      auto p = parse_policy(it.value(), where + ".policies." + it.key());
      if (p) a.per_predicate_policy[it.key()] = *p;
    }
  }
}

inline PropertyProfile parse_property(const std::string& iri, const json& obj,
                                      const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  check_keys(obj, {"kind", "functional", "role", "labelThreshold"}, where);
  PropertyProfile p;
  p.iri = iri;
  if (obj.contains("kind")) {
    std::string k = obj["kind"].is_string() ? obj["kind"].get<std::string>() : "";
    if (k == "datatype") p.kind = PropertyKind::Datatype;
    else if (k == "object") p.kind = PropertyKind::Object;
    else if (k == "unknown") p.kind = PropertyKind::Unknown;
    else throw ConfigError(where + ".kind must be datatype, object, or unknown");
  }
  if (obj.contains("functional")) {
    if (!obj["functional"].is_boolean()) throw ConfigError(where + ".functional must be a bool");
    p.functional = obj["functional"].get<bool>();
  }
  bool role_given = obj.contains("role");
  if (role_given) {
    std::string r = obj["role"].is_string() ? obj["role"].get<std::string>() : "";
    if (r == "none") p.role = SpecialRole::None;
    else if (r == "type") p.role = SpecialRole::TypeAssertion;
    else if (r == "label") p.role = SpecialRole::LabelLike;
    else if (r == "sameAs") p.role = SpecialRole::SameAsLike;
    else throw ConfigError(where + ".role must be none, type, label, or sameAs");
  }
  if (obj.contains("labelThreshold")) {
    if (!obj["labelThreshold"].is_number())
      throw ConfigError(where + ".labelThreshold must be a number");
    p.label_threshold = obj["labelThreshold"].get<double>();
    if (p.label_threshold < 0.0 || p.label_threshold > 1.0)
      throw ConfigError(where + ".labelThreshold must be within [0, 1]");
  }
  if (ProfileRegistry::role_locked(iri)) {
    ProfileRegistry defaults;
    if (!role_given) p.role = defaults.get(iri).role;
    else if (p.role != defaults.get(iri).role)
      throw ConfigError("the special role of " + iri + " cannot be overridden");
  }
  return p;
}

}  // namespace detail

inline EngineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  detail::json root;
  try {
    root = detail::json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  if (!root.is_object()) throw ConfigError("config root must be a JSON object");
  detail::check_keys(root,
                     {"defaultStrategy", "strategies", "defaultPolicy", "policies", "properties",
                      "labelSimilarityThreshold", "rngSeed", "schema", "annotations",
                      "objectsConciseness", "scenarios"},
                     "config");

  EngineConfig cfg;
  detail::parse_assignment_fields(root, cfg.assignment, "config", true);
  cfg.assignment.name = path.stem().string();

  if (root.contains("properties")) {
    if (!root["properties"].is_object())
      throw ConfigError("config.properties must map predicate IRIs to profiles");
    for (auto it = root["properties"].begin(); it != root["properties"].end(); ++it)
      cfg.property_overrides.push_back(
          detail::parse_property(it.key(), it.value(), "config.properties." + it.key()));
  }

  if (root.contains("labelSimilarityThreshold")) {
    if (!root["labelSimilarityThreshold"].is_number())
      throw ConfigError("config.labelSimilarityThreshold must be a number");
    cfg.similarity.label_threshold = root["labelSimilarityThreshold"].get<double>();
    if (cfg.similarity.label_threshold < 0.0 || cfg.similarity.label_threshold > 1.0)
      throw ConfigError("config.labelSimilarityThreshold must be within [0, 1]");
  }

  if (root.contains("rngSeed")) {
    if (!root["rngSeed"].is_number_integer() && !root["rngSeed"].is_number_unsigned())
      throw ConfigError("config.rngSeed must be an integer");
    cfg.seed = root["rngSeed"].get<uint64_t>();
  }

  auto resolve_path = [&](const detail::json& v, const char* key) {
    if (!v.is_string()) throw ConfigError(std::string("config.") + key + " must be a path");
    std::filesystem::path p = v.get<std::string>();
    if (p.is_relative()) p = path.parent_path() / p;
    return p;
  };
  if (root.contains("schema")) cfg.schema_path = resolve_path(root["schema"], "schema");
  if (root.contains("annotations"))
    cfg.annotations_path = resolve_path(root["annotations"], "annotations");

  if (root.contains("objectsConciseness")) {
    if (!root["objectsConciseness"].is_boolean())
      throw ConfigError("config.objectsConciseness must be a bool");
    cfg.objects_conciseness = root["objectsConciseness"].get<bool>();
  }

  if (root.contains("scenarios")) {
    if (!root["scenarios"].is_array()) throw ConfigError("config.scenarios must be an array");
    size_t i = 0;
    for (const auto& sc : root["scenarios"]) {
      std::string where = "config.scenarios[" + std::to_string(i) + "]";
      if (!sc.is_object()) throw ConfigError(where + " must be an object");
      detail::check_keys(sc, {"name", "defaultStrategy", "strategies", "defaultPolicy", "policies"},
                         where);
      StrategyAssignment a = cfg.assignment;  // scenarios inherit the top level
      a.per_predicate.clear();
      a.per_predicate_policy.clear();
      if (sc.contains("name")) {
        if (!sc["name"].is_string()) throw ConfigError(where + ".name must be a string");
        a.name = sc["name"].get<std::string>();
      } else {
        a.name = "scenario-" + std::to_string(i + 1);
      }
      detail::parse_assignment_fields(sc, a, where, false);
      cfg.scenarios.push_back(std::move(a));
      ++i;
    }
  }
  return cfg;
}

// Profiles = built-ins, then schema declarations, then config overrides.
inline ProfileRegistry build_profiles(const EngineConfig& cfg, const SchemaGraph& schema) {
  ProfileRegistry reg;
  std::vector<std::string> declared;
  for (const auto& p : schema.functional_properties()) declared.push_back(p);
  for (const auto& p : schema.datatype_properties()) declared.push_back(p);
  for (const auto& p : schema.object_properties()) declared.push_back(p);
  reg.absorb_schema(schema, declared);
  for (const auto& p : cfg.property_overrides) {
    PropertyProfile merged = p;
    PropertyProfile base = reg.get(p.iri);
    // Schema-declared functionality is not erased by a config entry that
    // merely adds a role or threshold.
    merged.functional = merged.functional || base.functional;
    if (merged.kind == PropertyKind::Unknown) merged.kind = base.kind;
    reg.set(merged);
  }
  return reg;
}

}  // namespace coevo
