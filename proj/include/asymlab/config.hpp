#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "asymlab/bigreal.hpp"
#include "asymlab/cascade.hpp"
#include "asymlab/errors.hpp"
#include "asymlab/ladder.hpp"
#include "asymlab/map.hpp"
#include "asymlab/roots.hpp"

namespace asymlab {

/// Run configuration. Numbers that feed BigReal are kept as decimal strings
/// so that a config file reproduces a run exactly.
struct RunConfig {
  std::string beta = "2";
  std::string t = "auto:12";
  std::string scale_left = "1";
  std::string scale_right = "1";
  std::string precision_bits = "auto";
  int max_level = 10;
  std::string rel_tol = "auto";
  int grid_size = 33;
  int margin = 2;
  std::string out;
  std::string format;  // empty: the subcommand's default
  int digits = 40;
  int jobs = 1;

  std::string eta = "0.1";
  std::vector<std::string> gamma = {"1", "0.5", "0.1"};
  std::string t_range = "1.3:2.0";
  int points = 2000;
  long transient = 100000;
  int samples = 256;

  // second configuration for `invariants`; empty fields copy the first
  std::string b_beta;
  std::string b_t;
  std::string b_scale_left = "1";
  std::string b_scale_right = "2";

  bool operator==(const RunConfig&) const = default;
};

inline void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json{{"beta", c.beta},
                     {"t", c.t},
                     {"scale_left", c.scale_left},
                     {"scale_right", c.scale_right},
                     {"precision_bits", c.precision_bits},
                     {"max_level", c.max_level},
                     {"rel_tol", c.rel_tol},
                     {"grid_size", c.grid_size},
                     {"margin", c.margin},
                     {"out", c.out},
                     {"format", c.format},
                     {"digits", c.digits},
                     {"jobs", c.jobs},
                     {"eta", c.eta},
                     {"gamma", c.gamma},
                     {"t_range", c.t_range},
                     {"points", c.points},
                     {"transient", c.transient},
                     {"samples", c.samples},
                     {"b_beta", c.b_beta},
                     {"b_t", c.b_t},
                     {"b_scale_left", c.b_scale_left},
                     {"b_scale_right", c.b_scale_right}};
}

namespace detail {

// Numbers may be written either as strings or as JSON numbers in a config
// file; BigReal fields always keep the literal text.
inline std::string decimal_field(const nlohmann::json& v, const char* key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return v.dump();
  throw ConfigError(std::string("config: field '") + key + "' must be a decimal string");
}

template <class T>
void int_field(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string("config: field '") + key + "' must be an integer");
  out = v.get<T>();
}

}  // namespace detail

inline void from_json(const nlohmann::json& j, RunConfig& c) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  static const std::vector<std::string> known = {
      "beta", "t", "scale_left", "scale_right", "precision_bits", "max_level", "rel_tol", "grid_size",
      "margin", "out", "format", "digits", "jobs", "eta", "gamma", "t_range", "points", "transient",
      "samples", "b_beta", "b_t", "b_scale_left", "b_scale_right"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("config: unknown field '" + key + "'");
  auto str = [&](const char* key, std::string& out) {
    if (j.contains(key)) out = detail::decimal_field(j.at(key), key);
  };
  str("beta", c.beta);
  str("t", c.t);
  str("scale_left", c.scale_left);
  str("scale_right", c.scale_right);
  str("precision_bits", c.precision_bits);
  str("rel_tol", c.rel_tol);
  str("out", c.out);
  str("format", c.format);
  str("eta", c.eta);
  str("t_range", c.t_range);
  str("b_beta", c.b_beta);
  str("b_t", c.b_t);
  str("b_scale_left", c.b_scale_left);
  str("b_scale_right", c.b_scale_right);
  detail::int_field(j, "max_level", c.max_level);
  detail::int_field(j, "grid_size", c.grid_size);
  detail::int_field(j, "margin", c.margin);
  detail::int_field(j, "digits", c.digits);
  detail::int_field(j, "jobs", c.jobs);
  detail::int_field(j, "points", c.points);
  detail::int_field(j, "transient", c.transient);
  detail::int_field(j, "samples", c.samples);
  if (j.contains("gamma")) {
    const auto& g = j.at("gamma");
    if (!g.is_array()) throw ConfigError("config: field 'gamma' must be an array");
    c.gamma.clear();
    for (const auto& x : g) c.gamma.push_back(detail::decimal_field(x, "gamma"));
  }
}

/// "auto:N" or a decimal parameter value.
struct TSpec {
  std::optional<int> auto_level;
  std::string literal;
};

inline TSpec parse_t_spec(const std::string& s) {
  TSpec r;
  if (s.rfind("auto:", 0) == 0) {
    std::string n = s.substr(5);
    if (n.empty() || !std::all_of(n.begin(), n.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
      throw ConfigError("config: bad parameter spec '" + s + "' (expected auto:N)");
    r.auto_level = std::stoi(n);
    if (*r.auto_level < 1) throw ConfigError("config: auto:N needs N >= 1");
  } else {
    r.literal = s;
  }
  return r;
}

/// Precision, tolerances and map of a run, after "auto" fields are settled.
struct ResolvedRun {
  RunConfig config;
  long precision_bits = 0;
  int anchor_level = 0;  // odd level of the superstable parameter, 0 for a literal t
  BigReal rel_tol;
  AsymmetricMap proto;  // t = 1
  AsymmetricMap map;    // at the resolved t

  nlohmann::json metadata(int digits) const {
    nlohmann::json j;
    j["config"] = config;
    j["precision_bits"] = precision_bits;
    j["rel_tol"] = rel_tol.to_string(6);
    j["t"] = map.t().to_string(digits);
    if (anchor_level > 0) j["t_anchor_level"] = anchor_level;
    return j;
  }
};

/// "auto" precision covers the deeper of max_level and the anchor level.
inline long resolve_precision(const RunConfig& c) {
  if (c.precision_bits != "auto") {
    long p = 0;
    try {
      std::size_t pos = 0;
      p = std::stol(c.precision_bits, &pos);
      if (pos != c.precision_bits.size()) throw ConfigError("");
    } catch (const std::exception&) {
      throw ConfigError("config: precision_bits must be an integer or \"auto\", got '" + c.precision_bits + "'");
    }
    if (p < 64) throw ConfigError("config: precision_bits must be >= 64");
    return p;
  }
  TSpec ts = parse_t_spec(c.t);
  int k_eff = c.max_level;
  if (ts.auto_level) k_eff = std::max(k_eff, CascadeSolver::anchor_level(*ts.auto_level));
  double beta = BigReal(c.beta, 64).to_double();
  return required_precision(k_eff, 2.0, beta);
}

/// Settles precision, tolerance and parameter. A superstable anchor is
/// searched with a fresh CascadeSolver unless one is supplied.
inline ResolvedRun resolve(const RunConfig& c, CascadeSolver* solver = nullptr) {
  if (c.max_level < 0) throw ConfigError("config: max_level must be >= 0");
  if (c.digits < 1) throw ConfigError("config: digits must be >= 1");
  if (c.margin < 0) throw ConfigError("config: margin must be >= 0");
  long P = resolve_precision(c);
  BigReal beta(c.beta, P), sl(c.scale_left, P), sr(c.scale_right, P);
  AsymmetricMap proto(beta, BigReal(1L, P), sl, sr, P);
  BigReal rel = c.rel_tol == "auto" ? auto_rel_tol(P) : BigReal(c.rel_tol, P);
  if (!(rel > 0L)) throw ConfigError("config: rel_tol must be positive");
  TSpec ts = parse_t_spec(c.t);
  ResolvedRun r{c, P, 0, rel, proto, proto};
  if (ts.auto_level) {
    r.anchor_level = CascadeSolver::anchor_level(*ts.auto_level);
    std::optional<CascadeSolver> own;
    if (!solver) {
      own.emplace(proto, rel);
      solver = &*own;
    }
    r.map = proto.with_t(*solver->superstable(r.anchor_level).t_superstable);
  } else {
    r.map = proto.with_t(BigReal(ts.literal, P));
  }
  return r;
}

/// Ladder for a resolved run: levels up to max_level + margin (capped at the
/// anchor level), trusted up to max_level less whatever the margin lost.
/// Throws LevelNotBornError when level max_level itself does not exist.
inline RenormLadder run_ladder(const ResolvedRun& r) {
  const RunConfig& c = r.config;
  int target = c.max_level + c.margin;
  if (r.anchor_level > 0) target = std::min(target, r.anchor_level);
  BuildOptions o;
  o.rel_tol = r.rel_tol;
  LevelBuild lb = build_levels(r.map, std::max(target, c.max_level), o);
  int depth = static_cast<int>(lb.levels.size()) - 1;
  if (depth < c.max_level)
    throw LevelNotBornError("run_ladder: level " + std::to_string(depth + 1) + " is not born at t = " +
                                r.map.t().to_string(30) + " (the parameter is not deep enough in the cascade)",
                            depth + 1);
  RenormLadder L{r.map, std::move(lb.levels), 0};
  L.max_trusted_level = std::max(0, std::min(c.max_level, depth - c.margin));
  return L;
}

}  // namespace asymlab
