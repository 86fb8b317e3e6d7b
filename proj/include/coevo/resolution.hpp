#pragma once
// resolution.hpp — the resolution function catalogue and value metadata.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coevo/dataset.hpp"
#include "coevo/errors.hpp"
#include "coevo/ntriples.hpp"
#include "coevo/schema.hpp"
#include "coevo/term.hpp"

namespace coevo {

enum class PolicyFunction : uint8_t {
  Any,
  BestSource,
  GlobalVote,
  First,
  Latest,
  Threshold,
  Best,
  TopN,
  StdDev,
  Variance,
  Average,
  Median,
  Sum,
  Concatenation,
  Longest,
  Shortest,
  Max,
  Min,
  ChooseDepending,
  ChooseCorresponding,
  MostComplete,
};

inline const char* policy_function_name(PolicyFunction f) {
  switch (f) {
    case PolicyFunction::Any: return "any";
    case PolicyFunction::BestSource: return "bestSource";
    case PolicyFunction::GlobalVote: return "globalVote";
    case PolicyFunction::First: return "first";
    case PolicyFunction::Latest: return "latest";
    case PolicyFunction::Threshold: return "threshold";
    case PolicyFunction::Best: return "best";
    case PolicyFunction::TopN: return "topN";
    case PolicyFunction::StdDev: return "stdDev";
    case PolicyFunction::Variance: return "variance";
    case PolicyFunction::Average: return "average";
    case PolicyFunction::Median: return "median";
    case PolicyFunction::Sum: return "sum";
    case PolicyFunction::Concatenation: return "concatenation";
    case PolicyFunction::Longest: return "longest";
    case PolicyFunction::Shortest: return "shortest";
    case PolicyFunction::Max: return "max";
    case PolicyFunction::Min: return "min";
    case PolicyFunction::ChooseDepending: return "chooseDepending";
    case PolicyFunction::ChooseCorresponding: return "chooseCorresponding";
    case PolicyFunction::MostComplete: return "mostComplete";
  }
  return "?";
}

inline std::optional<PolicyFunction> parse_policy_function(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(PolicyFunction::MostComplete); ++i) {
    auto f = static_cast<PolicyFunction>(i);
    if (name == policy_function_name(f)) return f;
  }
  return std::nullopt;
}

struct ResolutionPolicy {
  PolicyFunction function = PolicyFunction::Any;
  std::map<std::string, std::string> params;
  std::optional<uint64_t> rng_seed;
};

// Which evolved replica asserts a candidate value.
enum class CandidateSide : uint8_t { Source, Target, Both };

struct ValueMetadata {
  Term value;
  std::optional<int64_t> timestamp;   // seconds since the Unix epoch
  std::optional<double> quality;
  std::string source_name;            // annotation provenance, may be empty
  int order_index = 0;                // Existing < SourceAdded < TargetAdded
  CandidateSide side = CandidateSide::Target;
};

struct Resolution {
  std::vector<Term> kept;
  std::vector<Term> dropped;
  bool synthesized = false;  // kept values fabricated by a mediating function
};

// Cross-key state some policies need. Absent pieces raise MetadataMissing
// only when a policy actually requires them.
struct ResolutionContext {
  Term subject;
  Term predicate;
  const Dataset* source_state = nullptr;
  const Dataset* target_state = nullptr;
  const Dataset* combined = nullptr;  // base plus both added sets
  const std::map<std::string, CandidateSide>* chosen_sides = nullptr;
  uint64_t default_seed = 0;
};

inline uint64_t xorshift64star(uint64_t x) {
  x ^= x >> 12;
  x ^= x << 25;
  x ^= x >> 27;
  return x * 0x2545F4914F6CDD1Dull;
}

// Deterministic per-key draw: the seed is mixed with a hash of the key so
// one run-wide seed still varies across keys.
inline uint64_t seeded_key_draw(uint64_t seed, const Term& subject, const Term& predicate) {
  uint64_t h = fnv1a64(subject.token() + "\x1f" + predicate.token());
  uint64_t state = seed ^ h;
  if (state == 0) state = 0x9E3779B97F4A7C15ull;
  return xorshift64star(state);
}

// Decimal/scientific numeric literal check, stricter than strtod.
inline std::optional<long double> parse_numeric(std::string_view s) {
  size_t i = 0;
  auto digits = [&]() {
    size_t start = i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
    return i > start;
  };
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  if (!digits()) return std::nullopt;
  if (i < s.size() && s[i] == '.') {
    ++i;
    if (!digits()) return std::nullopt;
  }
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    if (!digits()) return std::nullopt;
  }
  if (i != s.size()) return std::nullopt;
  return strtold(std::string(s).c_str(), nullptr);
}

inline bool is_numeric_literal(const Term& t) {
  return t.is_literal() && parse_numeric(t.value()).has_value();
}

// Plain decimal rendering, 12 fractional digits, trailing zeros trimmed.
inline std::string format_decimal(long double x) {
  char buf[128];
  snprintf(buf, sizeof(buf), "%.12Lf", x);
  std::string out = buf;
  if (out.find('.') != std::string::npos) {
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  if (out == "-0") out = "0";
  return out;
}

namespace detail {

inline size_t codepoint_length(const Term& t) { return decode_utf8(t.value()).size(); }

[[noreturn]] inline void metadata_missing(const char* fn, const std::string& why) {
  throw ResolutionError(ResolutionError::Kind::MetadataMissing,
                        std::string(fn) + ": " + why);
}

inline std::string require_param(const ResolutionPolicy& p, const char* name) {
  auto it = p.params.find(name);
  if (it == p.params.end() || it->second.empty())
    throw ResolutionError(ResolutionError::Kind::BadPolicyParams,
                          std::string(policy_function_name(p.function)) +
                              " requires parameter '" + name + "'");
  return it->second;
}

inline double require_real_param(const ResolutionPolicy& p, const char* name) {
  std::string raw = require_param(p, name);
  char* end = nullptr;
  double v = strtod(raw.c_str(), &end);
  if (end != raw.c_str() + raw.size())
    throw ResolutionError(ResolutionError::Kind::BadPolicyParams,
                          "parameter '" + std::string(name) + "' is not a number: " + raw);
  return v;
}

inline long require_int_param(const ResolutionPolicy& p, const char* name) {
  std::string raw = require_param(p, name);
  char* end = nullptr;
  long v = strtol(raw.c_str(), &end, 10);
  if (end != raw.c_str() + raw.size() || v < 1)
    throw ResolutionError(ResolutionError::Kind::BadPolicyParams,
                          "parameter '" + std::string(name) + "' must be a positive integer");
  return v;
}

inline std::vector<long double> require_numeric(const std::vector<ValueMetadata>& cands,
                                                const char* fn) {
  std::vector<long double> out;
  out.reserve(cands.size());
  for (const auto& c : cands) {
    std::optional<long double> v =
        c.value.is_literal() ? parse_numeric(c.value.value()) : std::nullopt;
    if (!v)
      throw ResolutionError(ResolutionError::Kind::NonNumericCandidate,
                            std::string(fn) + ": candidate " + c.value.token() +
                                " is not a numeric literal");
    out.push_back(*v);
  }
  return out;
}

inline std::vector<double> require_quality(const std::vector<ValueMetadata>& cands,
                                           const char* fn) {
  std::vector<double> out;
  out.reserve(cands.size());
  for (const auto& c : cands) {
    if (!c.quality) metadata_missing(fn, "candidate " + c.value.token() + " has no qualityScore");
    out.push_back(*c.quality);
  }
  return out;
}

inline std::vector<int64_t> require_timestamps(const std::vector<ValueMetadata>& cands,
                                               const char* fn) {
  std::vector<int64_t> out;
  out.reserve(cands.size());
  for (const auto& c : cands) {
    if (!c.timestamp) metadata_missing(fn, "candidate " + c.value.token() + " has no timestamp");
    out.push_back(*c.timestamp);
  }
  return out;
}

inline bool on_side(CandidateSide candidate, CandidateSide wanted) {
  return candidate == wanted || candidate == CandidateSide::Both;
}

inline Resolution keep_indices(const std::vector<ValueMetadata>& cands,
                               const std::vector<size_t>& idx) {
  Resolution r;
  std::vector<bool> keep(cands.size(), false);
  for (size_t i : idx) keep[i] = true;
  for (size_t i = 0; i < cands.size(); ++i)
    (keep[i] ? r.kept : r.dropped).push_back(cands[i].value);
  return r;
}

inline Resolution synthesize(const std::vector<ValueMetadata>& cands, Term value) {
  Resolution r;
  r.kept.push_back(std::move(value));
  for (const auto& c : cands) r.dropped.push_back(c.value);
  r.synthesized = true;
  return r;
}

}  // namespace detail

// Picks a policy when the configuration says "auto": numeric values take
// max, string values take longest, IRIs take first, anything mixed falls
// back to the seeded random pick.
inline ResolutionPolicy auto_select_policy(const PropertyProfile&,
                                           const std::vector<ValueMetadata>& cands) {
  bool all_numeric = true, all_string = true, all_iri = true;
  for (const auto& c : cands) {
    bool numeric = is_numeric_literal(c.value);
    bool stringish = c.value.is_literal() && !numeric &&
                     (c.value.datatype() == vocab::xsd_string ||
                      c.value.datatype() == vocab::rdf_lang_string);
    all_numeric = all_numeric && numeric;
    all_string = all_string && stringish;
    all_iri = all_iri && c.value.is_iri();
  }
  ResolutionPolicy p;
  if (all_numeric) p.function = PolicyFunction::Max;
  else if (all_string) p.function = PolicyFunction::Longest;
  else if (all_iri) p.function = PolicyFunction::First;
  else p.function = PolicyFunction::Any;
  return p;
}

// Applies one resolution function to the candidate values of a single key.
// Candidates are deduplicated by value and processed in canonical order, so
// the outcome never depends on caller ordering.
inline Resolution resolve(std::vector<ValueMetadata> candidates, const ResolutionPolicy& policy,
                          const PropertyProfile& profile, const ResolutionContext& ctx = {}) {
  (void)profile;
  std::sort(candidates.begin(), candidates.end(),
            [](const ValueMetadata& a, const ValueMetadata& b) {
              return a.value.token() < b.value.token();
            });
  candidates.erase(std::unique(candidates.begin(), candidates.end(),
                               [](const ValueMetadata& a, const ValueMetadata& b) {
                                 return a.value == b.value;
                               }),
                   candidates.end());

  if (candidates.empty())
    throw ResolutionError(ResolutionError::Kind::EmptyCandidates,
                          "resolution invoked with no candidates");
  if (candidates.size() == 1) {
    Resolution r;
    r.kept.push_back(candidates.front().value);
    return r;
  }

  const size_t n = candidates.size();
  auto keep_one = [&](size_t i) { return detail::keep_indices(candidates, {i}); };

  auto argmax = [&](auto&& score) {
    size_t best = 0;
    for (size_t i = 1; i < n; ++i)
      if (score(i) > score(best)) best = i;  // ties keep the canonical-first value
    return best;
  };

  switch (policy.function) {
    case PolicyFunction::Any: {
      uint64_t seed = policy.rng_seed.value_or(ctx.default_seed);
      size_t idx = static_cast<size_t>(seeded_key_draw(seed, ctx.subject, ctx.predicate) % n);
      return keep_one(idx);
    }

    case PolicyFunction::BestSource: {
      std::string preferred = detail::require_param(policy, "preferred");
      bool any_named = false;
      std::vector<size_t> idx;
      for (size_t i = 0; i < n; ++i) {
        if (!candidates[i].source_name.empty()) any_named = true;
        if (candidates[i].source_name == preferred) idx.push_back(i);
      }
      if (!any_named) detail::metadata_missing("bestSource", "candidates carry no sourceName");
      if (idx.empty())
        throw ResolutionError(ResolutionError::Kind::EmptyCandidates,
                              "bestSource: no candidate from '" + preferred + "'");
      return detail::keep_indices(candidates, idx);
    }

    case PolicyFunction::GlobalVote: {
      if (!ctx.combined)
        detail::metadata_missing("globalVote", "combined dataset context is required");
      auto freq = [&](size_t i) {
        long count = 0;
        for (const auto& t : *ctx.combined)
          if (t.predicate == ctx.predicate && t.object == candidates[i].value) ++count;
        return count;
      };
      return keep_one(argmax(freq));
    }

    case PolicyFunction::First: {
      size_t best = 0;
      for (size_t i = 1; i < n; ++i)
        if (candidates[i].order_index < candidates[best].order_index) best = i;
      return keep_one(best);
    }

    case PolicyFunction::Latest: {
      auto ts = detail::require_timestamps(candidates, "latest");
      return keep_one(argmax([&](size_t i) { return ts[i]; }));
    }

    case PolicyFunction::Threshold: {
      double bar = detail::require_real_param(policy, "threshold");
      auto q = detail::require_quality(candidates, "threshold");
      std::vector<size_t> idx;
      for (size_t i = 0; i < n; ++i)
        if (q[i] > bar) idx.push_back(i);
      if (idx.empty())
        throw ResolutionError(ResolutionError::Kind::EmptyCandidates,
                              "threshold: no candidate above " + format_decimal(bar));
      return detail::keep_indices(candidates, idx);
    }

    case PolicyFunction::Best: {
      auto q = detail::require_quality(candidates, "best");
      return keep_one(argmax([&](size_t i) { return q[i]; }));
    }

    case PolicyFunction::TopN: {
      long count = detail::require_int_param(policy, "n");
      auto q = detail::require_quality(candidates, "topN");
      std::vector<size_t> order(n);
      for (size_t i = 0; i < n; ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(),
                       [&](size_t a, size_t b) { return q[a] > q[b]; });
      order.resize(std::min<size_t>(order.size(), static_cast<size_t>(count)));
      return detail::keep_indices(candidates, order);
    }

    case PolicyFunction::Max: {
      auto v = detail::require_numeric(candidates, "max");
      return keep_one(argmax([&](size_t i) { return v[i]; }));
    }

    case PolicyFunction::Min: {
      auto v = detail::require_numeric(candidates, "min");
      return keep_one(argmax([&](size_t i) { return -v[i]; }));
    }

    case PolicyFunction::Sum: {
      auto v = detail::require_numeric(candidates, "sum");
      long double sum = 0;
      for (long double x : v) sum += x;
      return detail::synthesize(candidates,
                                Term::literal(format_decimal(sum), std::string(vocab::xsd_decimal)));
    }

    case PolicyFunction::Average: {
      auto v = detail::require_numeric(candidates, "average");
      long double sum = 0;
      for (long double x : v) sum += x;
      return detail::synthesize(
          candidates, Term::literal(format_decimal(sum / static_cast<long double>(v.size())),
                                    std::string(vocab::xsd_decimal)));
    }

    case PolicyFunction::Median: {
      auto v = detail::require_numeric(candidates, "median");
      std::sort(v.begin(), v.end());
      long double m = v.size() % 2 == 1 ? v[v.size() / 2]
                                        : (v[v.size() / 2 - 1] + v[v.size() / 2]) / 2.0L;
      return detail::synthesize(candidates,
                                Term::literal(format_decimal(m), std::string(vocab::xsd_decimal)));
    }

    case PolicyFunction::Variance:
    case PolicyFunction::StdDev: {
      const char* fn = policy.function == PolicyFunction::Variance ? "variance" : "stdDev";
      auto v = detail::require_numeric(candidates, fn);
      long double mean = 0;
      for (long double x : v) mean += x;
      mean /= static_cast<long double>(v.size());
      long double var = 0;
      for (long double x : v) var += (x - mean) * (x - mean);
      var /= static_cast<long double>(v.size());  // population variance
      long double out = policy.function == PolicyFunction::StdDev ? sqrtl(var) : var;
      return detail::synthesize(candidates,
                                Term::literal(format_decimal(out), std::string(vocab::xsd_decimal)));
    }

    case PolicyFunction::Concatenation: {
      std::string joined;
      for (size_t i = 0; i < n; ++i) {
        if (i > 0) joined += "; ";
        joined += candidates[i].value.value();
      }
      return detail::synthesize(candidates, Term::literal(std::move(joined)));
    }

    case PolicyFunction::Longest:
    case PolicyFunction::Shortest: {
      bool longest = policy.function == PolicyFunction::Longest;
      auto len = [&](size_t i) {
        auto l = static_cast<long>(detail::codepoint_length(candidates[i].value));
        return longest ? l : -l;
      };
      return keep_one(argmax(len));
    }

    case PolicyFunction::ChooseDepending: {
      std::string attribute = detail::require_param(policy, "attribute");
      Term attribute_term;
      Term wanted;
      try {
        attribute_term = Term::iri(attribute);
        wanted = parse_term_token(detail::require_param(policy, "value"));
      } catch (const ResolutionError&) {
        throw;
      } catch (const std::exception& e) {
        throw ResolutionError(ResolutionError::Kind::BadPolicyParams,
                              std::string("chooseDepending: ") + e.what());
      }
      if (!ctx.source_state || !ctx.target_state)
        detail::metadata_missing("chooseDepending", "replica states are required");
      Triple probe{ctx.subject, attribute_term, wanted};
      bool source_has = ctx.source_state->contains(probe);
      bool target_has = ctx.target_state->contains(probe);
      std::vector<size_t> idx;
      for (size_t i = 0; i < n; ++i) {
        bool ok = (source_has && detail::on_side(candidates[i].side, CandidateSide::Source)) ||
                  (target_has && detail::on_side(candidates[i].side, CandidateSide::Target));
        if (ok) idx.push_back(i);
      }
      if (idx.empty())
        throw ResolutionError(ResolutionError::Kind::EmptyCandidates,
                              "chooseDepending: no side asserts " + probe.line());
      return detail::keep_indices(candidates, idx);
    }

    case PolicyFunction::ChooseCorresponding: {
      std::string attribute = detail::require_param(policy, "attribute");
      if (!ctx.chosen_sides)
        detail::metadata_missing("chooseCorresponding", "no prior resolutions recorded");
      auto it = ctx.chosen_sides->find(ctx.subject.token() + " <" + attribute + ">");
      if (it == ctx.chosen_sides->end())
        detail::metadata_missing("chooseCorresponding",
                                 "no recorded choice for <" + attribute + ">");
      std::vector<size_t> idx;
      for (size_t i = 0; i < n; ++i)
        if (detail::on_side(candidates[i].side, it->second)) idx.push_back(i);
      if (idx.empty())
        throw ResolutionError(ResolutionError::Kind::EmptyCandidates,
                              "chooseCorresponding: no candidate from the recorded side");
      return detail::keep_indices(candidates, idx);
    }

    case PolicyFunction::MostComplete: {
      if (!ctx.source_state || !ctx.target_state || !ctx.combined)
        detail::metadata_missing("mostComplete", "replica states and combined context required");
      std::set<std::string> subjects;
      for (const auto& t : *ctx.combined) subjects.insert(t.subject.token());
      auto nulls = [&](const Dataset& side) {
        std::set<std::string> covered;
        for (const auto& t : side)
          if (t.predicate == ctx.predicate) covered.insert(t.subject.token());
        long count = 0;
        for (const auto& s : subjects)
          if (covered.count(s) == 0) ++count;
        return count;
      };
      long source_nulls = nulls(*ctx.source_state);
      long target_nulls = nulls(*ctx.target_state);
      CandidateSide winner =
          source_nulls < target_nulls ? CandidateSide::Source : CandidateSide::Target;
      std::vector<size_t> idx;
      for (size_t i = 0; i < n; ++i)
        if (detail::on_side(candidates[i].side, winner)) idx.push_back(i);
      if (idx.empty())
        throw ResolutionError(ResolutionError::Kind::EmptyCandidates,
                              "mostComplete: winning side asserts no candidate");
      return detail::keep_indices(candidates, idx);
    }
  }
  throw ResolutionError(ResolutionError::Kind::BadPolicyParams, "unknown policy function");
}

// Per-value provenance annotations keyed by (subject IRI, predicate IRI,
// object token). TSV columns: subjectIRI, predicateIRI, objectTerm,
// timestamp, qualityScore, sourceName. Empty cells mean absent.
struct Annotation {
  std::optional<int64_t> timestamp;
  std::optional<double> quality;
  std::string source_name;
};

inline std::optional<int64_t> parse_iso8601(std::string_view s) {
  auto num = [&](size_t pos, size_t len) -> long {
    long v = 0;
    for (size_t i = pos; i < pos + len; ++i) {
      if (i >= s.size() || s[i] < '0' || s[i] > '9') return -1;
      v = v * 10 + (s[i] - '0');
    }
    return v;
  };
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  long y = num(0, 4), mo = num(5, 2), d = num(8, 2);
  if (y < 0 || mo < 1 || mo > 12 || d < 1 || d > 31) return std::nullopt;
  long hh = 0, mi = 0, ss = 0;
  if (s.size() > 10) {
    if (s[10] != 'T' || s.size() < 19 || s[13] != ':' || s[16] != ':') return std::nullopt;
    hh = num(11, 2);
    mi = num(14, 2);
    ss = num(17, 2);
    if (hh < 0 || hh > 23 || mi < 0 || mi > 59 || ss < 0 || ss > 60) return std::nullopt;
    if (s.size() > 19 && !(s.size() == 20 && s[19] == 'Z')) return std::nullopt;
  }
  // Days from the civil epoch, Howard Hinnant's algorithm.
  y -= mo <= 2;
  long era = (y >= 0 ? y : y - 399) / 400;
  unsigned yoe = static_cast<unsigned>(y - era * 400);
  unsigned doy = static_cast<unsigned>((153 * (mo + (mo > 2 ? -3 : 9)) + 2) / 5 + d - 1);
  unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  long days = era * 146097 + static_cast<long>(doe) - 719468;
  return static_cast<int64_t>(days) * 86400 + hh * 3600 + mi * 60 + ss;
}

class AnnotationIndex {
 public:
  void put(const std::string& subject_iri, const std::string& predicate_iri,
           const std::string& object_token, Annotation a) {
    index_[subject_iri + "\t" + predicate_iri + "\t" + object_token] = std::move(a);
  }

  const Annotation* find(const Term& subject, const Term& predicate, const Term& object) const {
    auto it = index_.find(subject.value() + "\t" + predicate.value() + "\t" + object.token());
    return it == index_.end() ? nullptr : &it->second;
  }

  size_t size() const { return index_.size(); }

 private:
  std::map<std::string, Annotation> index_;
};

inline AnnotationIndex parse_annotations(std::string_view text) {
  AnnotationIndex out;
  size_t lineno = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line =
        nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) {
      std::vector<std::string> cells;
      size_t cell_start = 0;
      for (size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == '\t') {
          cells.emplace_back(line.substr(cell_start, i - cell_start));
          cell_start = i + 1;
        }
      }
      if (lineno == 1 && !cells.empty() && cells[0] == "subjectIRI") {
        // header row
      } else {
        if (cells.size() != 6)
          throw ParseError(lineno, "annotation rows need 6 tab-separated cells");
        Annotation a;
        if (!cells[3].empty()) {
          a.timestamp = parse_iso8601(cells[3]);
          if (!a.timestamp) throw ParseError(lineno, "bad timestamp: " + cells[3]);
        }
        if (!cells[4].empty()) {
          char* end = nullptr;
          a.quality = strtod(cells[4].c_str(), &end);
          if (end != cells[4].c_str() + cells[4].size())
            throw ParseError(lineno, "bad qualityScore: " + cells[4]);
        }
        a.source_name = cells[5];
        out.put(cells[0], cells[1], cells[2], std::move(a));
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

}  // namespace coevo
