// test_schema.cpp — similarity, schema graph reasoning, property profiles.

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "coevo/changeset.hpp"
#include "coevo/ntriples.hpp"
#include "coevo/schema.hpp"
#include "support/oracles.hpp"

using namespace coevo;

namespace {

std::string cls(int i) { return "http://ex.org/c" + std::to_string(i); }

}  // namespace

TEST_CASE("code point decoding handles multi-byte sequences") {
  CHECK(decode_utf8("abc") == std::vector<uint32_t>{'a', 'b', 'c'});
  CHECK(decode_utf8("\xc3\xa9") == std::vector<uint32_t>{0xE9});
  CHECK(decode_utf8("\xe2\x82\xac") == std::vector<uint32_t>{0x20AC});
  CHECK(decode_utf8("\xf0\x9f\x98\x80") == std::vector<uint32_t>{0x1F600});
  CHECK(decode_utf8("a\xc3\xa9z").size() == 3);
  // Truncated trail bytes degrade to raw bytes instead of reading past the end.
  CHECK(decode_utf8("\xe2\x82").size() == 2);
}

TEST_CASE("edit distance matches known values") {
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("flaw", "lawn") == 2);
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("abc", "abc") == 0);
  CHECK(levenshtein("caf\xc3\xa9", "cafe") == 1);
  CHECK(levenshtein("Adrian Sanders", "Sanders, Adrian") == 14);
}

TEST_CASE("edit distance agrees with the full-matrix reference") {
  oracle::Gen gen(41);
  auto word = [&] {
    std::string s;
    for (size_t i = 0, n = gen.pick(12); i < n; ++i)
      s += static_cast<char>('a' + gen.pick(6));
    return s;
  };
  for (int i = 0; i < 300; ++i) {
    std::string a = word(), b = word();
    CHECK(levenshtein(a, b) == oracle::lev_matrix(decode_utf8(a), decode_utf8(b)));
  }
}

TEST_CASE("normalized similarity divides by the longer length") {
  CHECK(normalized_label_similarity("", "") == 1.0);
  CHECK(normalized_label_similarity("", "abc") == 0.0);
  CHECK(normalized_label_similarity("ab", "ax") == Catch::Approx(0.5));
  CHECK(normalized_label_similarity("caf\xc3\xa9", "cafe") == Catch::Approx(0.75));
  CHECK(normalized_label_similarity("Adrian Sanders", "Sanders, Adrian") ==
        Catch::Approx(1.0 / 15.0));
}

TEST_CASE("superclass sets are reflexive and transitive") {
  SchemaGraph g;
  g.add_subclass(cls(0), cls(1));
  g.add_subclass(cls(1), cls(2));
  CHECK(g.superclasses(cls(0)) == std::set<std::string>{cls(0), cls(1), cls(2)});
  CHECK(g.superclasses(cls(2)) == std::set<std::string>{cls(2)});
  CHECK(g.superclasses("http://ex.org/unknown") ==
        std::set<std::string>{"http://ex.org/unknown"});
}

TEST_CASE("disjointness is symmetric and inherited through subclassing") {
  SchemaGraph g;
  g.add_subclass(cls(0), cls(1));
  g.add_subclass(cls(3), cls(2));
  g.add_disjoint(cls(1), cls(2));

  CHECK(classes_disjoint(g, cls(1), cls(2)));
  CHECK(classes_disjoint(g, cls(2), cls(1)));
  CHECK(classes_disjoint(g, cls(0), cls(3)));
  CHECK(classes_disjoint(g, cls(0), cls(2)));
  CHECK_FALSE(classes_disjoint(g, cls(0), cls(1)));
  CHECK_FALSE(classes_disjoint(g, cls(0), "http://ex.org/unknown"));
}

TEST_CASE("a class is never disjoint with itself") {
  SchemaGraph g;
  g.add_disjoint(cls(0), cls(0));
  CHECK_FALSE(classes_disjoint(g, cls(0), cls(0)));
  CHECK_FALSE(classes_disjoint(SchemaGraph{}, cls(1), cls(1)));
}

TEST_CASE("disjointness agrees with the naive reference on random schemas") {
  for (uint64_t seed = 0; seed < 40; ++seed) {
    oracle::Gen gen(4200 + seed);
    SchemaGraph g;
    oracle::RawSchema raw;
    for (size_t i = 0, n = gen.pick(10); i < n; ++i) {
      std::string sub = cls(gen.pick(8)), super = cls(gen.pick(8));
      g.add_subclass(sub, super);
      raw.subclass.emplace_back(sub, super);
    }
    for (size_t i = 0, n = gen.pick(5); i < n; ++i) {
      std::string a = cls(gen.pick(8)), b = cls(gen.pick(8));
      g.add_disjoint(a, b);
      raw.disjoint.emplace_back(a, b);
    }
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b)
        CHECK(classes_disjoint(g, cls(a), cls(b)) == raw.disjoint_classes(cls(a), cls(b)));
  }
}

TEST_CASE("adding axioms never retracts a disjointness verdict") {
  oracle::Gen gen(77);
  SchemaGraph g;
  g.add_subclass(cls(0), cls(1));
  g.add_disjoint(cls(1), cls(2));
  for (int round = 0; round < 50; ++round) {
    std::vector<std::pair<std::string, std::string>> disjoint_before;
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b)
        if (classes_disjoint(g, cls(a), cls(b))) disjoint_before.emplace_back(cls(a), cls(b));
    if (gen.chance(0.5)) g.add_subclass(cls(gen.pick(8)), cls(gen.pick(8)));
    else g.add_disjoint(cls(gen.pick(8)), cls(gen.pick(8)));
    for (const auto& [a, b] : disjoint_before) CHECK(classes_disjoint(g, a, b));
  }
}

TEST_CASE("identity facts use a transitive sameAs closure") {
  SchemaGraph g;
  g.add_same_as("http://ex.org/a", "http://ex.org/b");
  g.add_same_as("http://ex.org/b", "http://ex.org/c");
  g.add_same_as("http://ex.org/x", "http://ex.org/y");

  CHECK(g.same_individual("http://ex.org/a", "http://ex.org/c"));
  CHECK(g.same_individual("http://ex.org/c", "http://ex.org/a"));
  CHECK(g.same_individual("http://ex.org/a", "http://ex.org/a"));
  CHECK_FALSE(g.same_individual("http://ex.org/a", "http://ex.org/x"));
  CHECK_FALSE(g.same_individual("http://ex.org/a", "http://ex.org/unknown"));

  g.add_different_from("http://ex.org/a", "http://ex.org/x");
  CHECK(g.different_individuals("http://ex.org/x", "http://ex.org/a"));
  CHECK_FALSE(g.different_individuals("http://ex.org/a", "http://ex.org/y"));
}

TEST_CASE("schema datasets load hierarchy, identity, and property declarations") {
  Dataset d = parse_ntriples(
      "<http://ex.org/c0> <http://www.w3.org/2000/01/rdf-schema#subClassOf> <http://ex.org/c1> .\n"
      "<http://ex.org/c1> <http://www.w3.org/2002/07/owl#disjointWith> <http://ex.org/c2> .\n"
      "<http://ex.org/a> <http://www.w3.org/2002/07/owl#sameAs> <http://ex.org/b> .\n"
      "<http://ex.org/a> <http://www.w3.org/2002/07/owl#differentFrom> <http://ex.org/z> .\n"
      "<http://ex.org/p> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://www.w3.org/2002/07/owl#FunctionalProperty> .\n"
      "<http://ex.org/p> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://www.w3.org/2002/07/owl#DatatypeProperty> .\n"
      "<http://ex.org/q> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://www.w3.org/2002/07/owl#ObjectProperty> .\n");
  SchemaGraph g = load_schema(d);
  CHECK(classes_disjoint(g, cls(0), cls(2)));
  CHECK(g.same_individual("http://ex.org/b", "http://ex.org/a"));
  CHECK(g.different_individuals("http://ex.org/z", "http://ex.org/a"));
  CHECK(g.is_functional("http://ex.org/p"));
  CHECK(g.is_datatype_property("http://ex.org/p"));
  CHECK(g.is_object_property("http://ex.org/q"));
  CHECK_FALSE(g.is_functional("http://ex.org/q"));
}

TEST_CASE("the bundled schema declares one functional datatype property") {
  Dataset d = detail::read_ntriples_file(
      std::filesystem::path(COEVO_FIXTURES_DIR) / "schema.nt");
  SchemaGraph g = load_schema(d);
  CHECK(g.is_functional("http://dbpedia.org/property/birthYear"));
  CHECK(g.is_datatype_property("http://dbpedia.org/property/birthYear"));
}

TEST_CASE("the registry seeds the well-known predicates") {
  ProfileRegistry reg;
  PropertyProfile type = reg.get(std::string(vocab::rdf_type));
  CHECK(type.role == SpecialRole::TypeAssertion);
  CHECK(type.kind == PropertyKind::Object);
  CHECK(reg.get(std::string(vocab::owl_same_as)).role == SpecialRole::SameAsLike);
  PropertyProfile label = reg.get(std::string(vocab::rdfs_label));
  CHECK(label.role == SpecialRole::LabelLike);
  CHECK(label.kind == PropertyKind::Datatype);

  PropertyProfile other = reg.get("http://ex.org/p");
  CHECK(other.kind == PropertyKind::Unknown);
  CHECK(other.role == SpecialRole::None);
  CHECK_FALSE(other.functional);
  CHECK(other.coexists_by_default());
  CHECK_FALSE(type.coexists_by_default());

  CHECK(ProfileRegistry::role_locked(std::string(vocab::rdf_type)));
  CHECK(ProfileRegistry::role_locked(std::string(vocab::owl_same_as)));
  CHECK_FALSE(ProfileRegistry::role_locked(std::string(vocab::rdfs_label)));
}

TEST_CASE("schema declarations refine profiles without clobbering overrides") {
  SchemaGraph g;
  g.add_functional("http://ex.org/p");
  g.add_datatype_property("http://ex.org/p");
  g.add_object_property("http://ex.org/q");

  ProfileRegistry reg;
  PropertyProfile forced;
  forced.iri = "http://ex.org/q";
  forced.kind = PropertyKind::Datatype;
  reg.set(forced);
  reg.absorb_schema(g, {"http://ex.org/p", "http://ex.org/q"});

  PropertyProfile p = reg.get("http://ex.org/p");
  CHECK(p.functional);
  CHECK(p.kind == PropertyKind::Datatype);
  CHECK(reg.get("http://ex.org/q").kind == PropertyKind::Datatype);
}

TEST_CASE("object conflict verdicts follow the property profile") {
  SchemaGraph g;
  g.add_disjoint(cls(1), cls(2));
  g.add_subclass(cls(0), cls(1));
  g.add_same_as("http://ex.org/a", "http://ex.org/b");
  g.add_different_from("http://ex.org/a", "http://ex.org/z");
  SimilarityConfig sim;

  PropertyProfile type;
  type.role = SpecialRole::TypeAssertion;
  CHECK(objects_conflicting(type, Term::iri(cls(0)), Term::iri(cls(2)), g, sim));
  CHECK_FALSE(objects_conflicting(type, Term::iri(cls(0)), Term::iri(cls(1)), g, sim));
  CHECK_FALSE(objects_conflicting(type, Term::iri(cls(0)), Term::literal("c2"), g, sim));
  CHECK_FALSE(objects_conflicting(type, Term::iri(cls(2)), Term::iri(cls(2)), g, sim));

  PropertyProfile same;
  same.role = SpecialRole::SameAsLike;
  CHECK_FALSE(objects_conflicting(same, Term::iri(cls(1)), Term::iri(cls(2)), g, sim));

  PropertyProfile fn_dt;
  fn_dt.functional = true;
  fn_dt.kind = PropertyKind::Datatype;
  CHECK(objects_conflicting(fn_dt, Term::literal("1959"), Term::literal("1960"), g, sim));
  CHECK_FALSE(objects_conflicting(fn_dt, Term::literal("1959"), Term::literal("1959"), g, sim));

  PropertyProfile fn_obj;
  fn_obj.functional = true;
  fn_obj.kind = PropertyKind::Object;
  CHECK_FALSE(objects_conflicting(fn_obj, Term::iri("http://ex.org/a"),
                                  Term::iri("http://ex.org/b"), g, sim));
  CHECK(objects_conflicting(fn_obj, Term::iri("http://ex.org/a"),
                            Term::iri("http://ex.org/z"), g, sim));
  CHECK(objects_conflicting(fn_obj, Term::iri("http://ex.org/a"),
                            Term::iri("http://ex.org/other"), g, sim));

  // Unknown kind falls back on the value shapes.
  PropertyProfile fn_unknown;
  fn_unknown.functional = true;
  CHECK_FALSE(objects_conflicting(fn_unknown, Term::iri("http://ex.org/a"),
                                  Term::iri("http://ex.org/b"), g, sim));
  CHECK(objects_conflicting(fn_unknown, Term::literal("x"), Term::literal("y"), g, sim));

  PropertyProfile loose;
  CHECK_FALSE(objects_conflicting(loose, Term::literal("x"), Term::literal("y"), g, sim));
}

TEST_CASE("label conflicts compare similarity against the effective threshold") {
  SchemaGraph g;
  PropertyProfile label;
  label.role = SpecialRole::LabelLike;
  SimilarityConfig sim;

  Term a = Term::literal("Adrian Sanders");
  Term b = Term::literal("Sanders, Adrian");
  sim.label_threshold = 0.5;
  CHECK_FALSE(objects_conflicting(label, a, b, g, sim));
  sim.label_threshold = 0.05;
  CHECK(objects_conflicting(label, a, b, g, sim));

  // The per-property threshold overrides the global one; the comparison is
  // inclusive at the boundary.
  label.label_threshold = 0.5;
  sim.label_threshold = 0.9;
  CHECK(objects_conflicting(label, Term::literal("ab"), Term::literal("ax"), g, sim));
  label.label_threshold = 0.51;
  CHECK_FALSE(objects_conflicting(label, Term::literal("ab"), Term::literal("ax"), g, sim));
}

TEST_CASE("conflict verdicts are symmetric and agree with the reference") {
  for (uint64_t seed = 0; seed < 60; ++seed) {
    oracle::Gen gen(5300 + seed);
    SchemaGraph g;
    oracle::RawSchema raw;
    for (size_t i = 0, n = gen.pick(6); i < n; ++i) {
      std::string sub = cls(gen.pick(6)), super = cls(gen.pick(6));
      g.add_subclass(sub, super);
      raw.subclass.emplace_back(sub, super);
    }
    for (size_t i = 0, n = gen.pick(4); i < n; ++i) {
      std::string a = cls(gen.pick(6)), b = cls(gen.pick(6));
      g.add_disjoint(a, b);
      raw.disjoint.emplace_back(a, b);
    }
    for (size_t i = 0, n = gen.pick(4); i < n; ++i) {
      std::string a = "http://ex.org/v" + std::to_string(gen.pick(8));
      std::string b = "http://ex.org/v" + std::to_string(gen.pick(8));
      g.add_same_as(a, b);
      raw.same_as.emplace_back(a, b);
    }
    for (size_t i = 0, n = gen.pick(3); i < n; ++i) {
      std::string a = "http://ex.org/v" + std::to_string(gen.pick(8));
      std::string b = "http://ex.org/v" + std::to_string(gen.pick(8));
      g.add_different_from(a, b);
      raw.different.emplace_back(a, b);
    }

    PropertyProfile profile;
    switch (gen.pick(4)) {
      case 0: profile.role = SpecialRole::TypeAssertion; break;
      case 1: profile.role = SpecialRole::LabelLike; break;
      case 2: profile.role = SpecialRole::SameAsLike; break;
      default: break;
    }
    profile.functional = gen.chance(0.5);
    profile.kind = static_cast<PropertyKind>(gen.pick(3));
    SimilarityConfig sim;
    sim.label_threshold = 0.4;

    for (int i = 0; i < 30; ++i) {
      Term a = gen.chance(0.4) ? Term::iri(cls(gen.pick(6))) : gen.object();
      Term b = gen.chance(0.4) ? Term::iri(cls(gen.pick(6))) : gen.object();
      bool verdict = objects_conflicting(profile, a, b, g, sim);
      CHECK(verdict == objects_conflicting(profile, b, a, g, sim));
      CHECK(verdict == oracle::values_clash(profile, a, b, raw, sim.label_threshold));
    }
  }
}
