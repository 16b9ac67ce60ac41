#pragma once

// JSON wire formats. Instance files carry {"schema": 1, "type": ...} plus the
// payload; functions and measures are arrays aligned with the space's points.
// The string "inf" encodes +inf in function arrays and is rejected in measure
// arrays. All emitters use ordered_json so reports have a deterministic field
// order.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dualcone/bipolar.hpp"
#include "dualcone/core_model.hpp"
#include "dualcone/hedging.hpp"
#include "dualcone/lp_engine.hpp"
#include "dualcone/transport.hpp"

namespace dualcone::io {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline void require_schema(const json& j, const std::string& type) {
  if (!j.is_object()) throw InputError("instance file: expected a JSON object");
  if (!j.contains("schema") || !j["schema"].is_number_integer() ||
      j["schema"].get<int>() != kSchemaVersion)
    throw InputError("instance file: unrecognized or missing schema version (expected 1)");
  if (!j.contains("type") || j["type"] != type)
    throw InputError("instance file: expected type \"" + type + "\"");
}

// ---------------------------------------------------------------------------
// spaces
// ---------------------------------------------------------------------------
inline SpacePtr parse_space(const json& j) {
  if (!j.is_object() || !j.contains("points") || !j.contains("levels"))
    throw InputError("space: needs \"points\" and \"levels\" arrays");
  std::vector<std::string> points;
  for (const auto& p : j["points"]) {
    if (p.is_string())
      points.push_back(p.get<std::string>());
    else
      points.push_back(p.dump());
  }
  std::vector<int> levels;
  for (const auto& l : j["levels"]) {
    if (!l.is_number_integer()) throw InputError("space: levels must be integers");
    levels.push_back(l.get<int>());
  }
  std::optional<std::vector<double>> coords;
  if (j.contains("coords") && !j["coords"].is_null()) {
    coords = std::vector<double>{};
    for (const auto& c : j["coords"]) {
      if (!c.is_number()) throw InputError("space: coords must be numbers");
      coords->push_back(c.get<double>());
    }
  }
  return make_space(std::move(points), std::move(levels), std::move(coords));
}

inline json space_to_json(const FiniteSpace& s) {
  json j;
  j["points"] = s.points();
  j["levels"] = s.levels();
  if (s.has_coords()) j["coords"] = *s.coords();
  return j;
}

// ---------------------------------------------------------------------------
// functions and measures
// ---------------------------------------------------------------------------
inline std::vector<double> parse_value_array(const json& j, std::size_t expected, bool allow_inf,
                                             const std::string& what) {
  const json& arr = j.is_object() && j.contains("values") ? j["values"] : j;
  if (!arr.is_array()) throw InputError(what + ": expected an array of values");
  if (arr.size() != expected)
    throw InputError(what + ": expected " + std::to_string(expected) + " values, got " +
                     std::to_string(arr.size()));
  std::vector<double> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& v = arr[i];
    if (v.is_string()) {
      if (allow_inf && v == "inf") {
        out.push_back(kInf);
        continue;
      }
      throw InputError(what + ": non-numeric entry at index " + std::to_string(i));
    }
    if (!v.is_number()) throw InputError(what + ": non-numeric entry at index " + std::to_string(i));
    out.push_back(v.get<double>());
  }
  return out;
}

inline FuncOnSpace parse_func(const json& j, const SpacePtr& space) {
  return FuncOnSpace(space, parse_value_array(j, space->size(), true, "function"));
}

inline MeasureOnSpace parse_measure(const json& j, const SpacePtr& space) {
  return MeasureOnSpace(space, parse_value_array(j, space->size(), false, "measure"));
}

inline json func_to_json(const FuncOnSpace& f) {
  json arr = json::array();
  for (double v : f.values()) {
    if (std::isfinite(v))
      arr.push_back(v);
    else
      arr.push_back("inf");
  }
  return arr;
}

inline json measure_to_json(const MeasureOnSpace& mu) { return json(mu.weights()); }

// ---------------------------------------------------------------------------
// lp problems and solutions
// ---------------------------------------------------------------------------
inline lp::Rel parse_rel(const json& j) {
  std::string r = j.get<std::string>();
  if (r == "<=" || r == "le") return lp::Rel::Le;
  if (r == ">=" || r == "ge") return lp::Rel::Ge;
  if (r == "=" || r == "==" || r == "eq") return lp::Rel::Eq;
  throw InputError("lp: unknown relation \"" + r + "\" (use <=, =, >=)");
}

inline std::string rel_to_string(lp::Rel r) {
  switch (r) {
    case lp::Rel::Le: return "<=";
    case lp::Rel::Ge: return ">=";
    case lp::Rel::Eq: return "=";
  }
  return "?";
}

inline lp::Problem parse_lp(const json& j) {
  require_schema(j, "lp");
  lp::Problem p;
  if (!j.contains("sense") || !j.contains("c") || !j.contains("rows"))
    throw InputError("lp: needs \"sense\", \"c\" and \"rows\"");
  std::string sense = j["sense"].get<std::string>();
  if (sense == "max")
    p.sense = lp::Sense::Max;
  else if (sense == "min")
    p.sense = lp::Sense::Min;
  else
    throw InputError("lp: sense must be \"min\" or \"max\"");
  for (const auto& c : j["c"]) p.c.push_back(c.get<double>());
  for (const auto& row : j["rows"]) {
    lp::Row r;
    if (!row.contains("a") || !row.contains("rel") || !row.contains("b"))
      throw InputError("lp: every row needs \"a\", \"rel\", \"b\"");
    for (const auto& a : row["a"]) r.a.push_back(a.get<double>());
    r.rel = parse_rel(row["rel"]);
    r.b = row["b"].get<double>();
    p.rows.push_back(std::move(r));
  }
  if (j.contains("bounds") && !j["bounds"].is_null()) {
    for (const auto& b : j["bounds"]) {
      lp::VarBounds vb;
      if (b.contains("lower") && !b["lower"].is_null()) vb.lower = b["lower"].get<double>();
      if (!b.contains("lower")) vb.lower = 0.0;
      if (b.contains("lower") && b["lower"].is_null()) vb.lower = std::nullopt;
      if (b.contains("upper") && !b["upper"].is_null()) vb.upper = b["upper"].get<double>();
      p.bounds.push_back(vb);
    }
  }
  p.validate();
  return p;
}

inline json lp_to_json(const lp::Problem& p) {
  json j;
  j["schema"] = kSchemaVersion;
  j["type"] = "lp";
  j["sense"] = p.sense == lp::Sense::Max ? "max" : "min";
  j["c"] = p.c;
  json rows = json::array();
  for (const auto& r : p.rows) {
    json row;
    row["a"] = r.a;
    row["rel"] = rel_to_string(r.rel);
    row["b"] = r.b;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  if (!p.bounds.empty()) {
    json bounds = json::array();
    for (const auto& vb : p.bounds) {
      json b;
      b["lower"] = vb.lower ? json(*vb.lower) : json(nullptr);
      b["upper"] = vb.upper ? json(*vb.upper) : json(nullptr);
      bounds.push_back(std::move(b));
    }
    j["bounds"] = std::move(bounds);
  }
  return j;
}

inline json residuals_to_json(const lp::Residuals& r) {
  json j;
  j["primal_infeasibility"] = r.primal;
  j["dual_infeasibility"] = r.dual;
  j["complementary_slackness"] = r.slackness;
  j["duality_gap"] = r.duality_gap;
  return j;
}

inline json stats_to_json(const lp::SolveStats& s) {
  json j;
  j["pivots"] = s.pivots;
  j["phase1_iterations"] = s.phase1_pivots;
  return j;
}

inline json lp_solution_to_json(const lp::Solution& s) {
  json j;
  j["status"] = lp::to_string(s.status);
  if (s.status == lp::Status::Optimal) {
    j["value"] = s.value;
    j["primal"] = s.primal;
    j["dual"] = s.dual;
    j["residuals"] = residuals_to_json(s.residuals);
  }
  if (!s.ray.empty()) j["ray"] = s.ray;
  if (!s.farkas.empty()) j["farkas"] = s.farkas;
  return j;
}

inline json polyhedron_to_json(const lp::Polyhedron& poly) {
  json rows = json::array();
  for (std::size_t i = 0; i < poly.a.size(); ++i) {
    json row;
    row["a"] = poly.a[i];
    row["rel"] = "<=";
    row["b"] = poly.b[i];
    rows.push_back(std::move(row));
  }
  json j;
  j["variables"] = poly.dim();
  j["nonneg"] = true;
  j["rows"] = std::move(rows);
  return j;
}

// ---------------------------------------------------------------------------
// bipolar instances
// ---------------------------------------------------------------------------
inline GeneratorSet parse_generator_set(const json& j) {
  require_schema(j, "bipolar");
  if (!j.contains("space") || !j.contains("generators"))
    throw InputError("bipolar instance: needs \"space\" and \"generators\"");
  SpacePtr space = parse_space(j["space"]);
  Regime regime = Regime::NonNeg;
  if (j.contains("regime")) {
    std::string r = j["regime"].get<std::string>();
    if (r == "nonneg")
      regime = Regime::NonNeg;
    else if (r == "bounded_below")
      regime = Regime::BoundedBelow;
    else
      throw InputError("bipolar instance: regime must be \"nonneg\" or \"bounded_below\"");
  }
  std::vector<FuncOnSpace> gens;
  for (const auto& g : j["generators"]) gens.push_back(parse_func(g, space));
  return GeneratorSet(space, std::move(gens), regime);
}

inline json generator_set_to_json(const GeneratorSet& h) {
  json j;
  j["schema"] = kSchemaVersion;
  j["type"] = "bipolar";
  j["space"] = space_to_json(*h.space());
  json gens = json::array();
  for (const auto& g : h.generators()) gens.push_back(func_to_json(g));
  j["generators"] = std::move(gens);
  j["regime"] = h.regime() == Regime::NonNeg ? "nonneg" : "bounded_below";
  return j;
}

inline json membership_to_json(const MembershipCertificate& cert) {
  json j;
  j["verdict"] = cert.is_member() ? "member" : "non_member";
  if (cert.is_member()) {
    j["lambda"] = cert.lambda;
    json slack = json::array();
    for (double s : cert.slack) slack.push_back(std::isfinite(s) ? json(s) : json("inf"));
    j["slack"] = std::move(slack);
  } else if (cert.separating) {
    j["separating_measure"] = measure_to_json(*cert.separating);
  }
  return j;
}

// ---------------------------------------------------------------------------
// transport instances
// ---------------------------------------------------------------------------
inline TransportInstance parse_transport(const json& j) {
  require_schema(j, "transport");
  for (const char* key : {"left", "right", "H1", "H2"})
    if (!j.contains(key))
      throw InputError(std::string("transport instance: missing \"") + key + "\"");
  SpacePtr left = parse_space(j["left"]);
  SpacePtr right = parse_space(j["right"]);
  std::vector<FuncOnSpace> g1, g2;
  for (const auto& g : j["H1"]) g1.push_back(parse_func(g, left));
  for (const auto& g : j["H2"]) g2.push_back(parse_func(g, right));
  std::optional<MeasureOnSpace> dom1, dom2;
  if (j.contains("mu1_star") && !j["mu1_star"].is_null()) dom1 = parse_measure(j["mu1_star"], left);
  if (j.contains("mu2_star") && !j["mu2_star"].is_null()) dom2 = parse_measure(j["mu2_star"], right);
  return TransportInstance(GeneratorSet(left, std::move(g1), Regime::NonNeg),
                           GeneratorSet(right, std::move(g2), Regime::NonNeg), std::move(dom1),
                           std::move(dom2));
}

inline json transport_to_json(const TransportInstance& t) {
  json j;
  j["schema"] = kSchemaVersion;
  j["type"] = "transport";
  j["left"] = space_to_json(*t.h1().space());
  j["right"] = space_to_json(*t.h2().space());
  json g1 = json::array(), g2 = json::array();
  for (const auto& g : t.h1().generators()) g1.push_back(func_to_json(g));
  for (const auto& g : t.h2().generators()) g2.push_back(func_to_json(g));
  j["H1"] = std::move(g1);
  j["H2"] = std::move(g2);
  if (t.dominating1()) j["mu1_star"] = measure_to_json(*t.dominating1());
  if (t.dominating2()) j["mu2_star"] = measure_to_json(*t.dominating2());
  return j;
}

// ---------------------------------------------------------------------------
// hedge markets
// ---------------------------------------------------------------------------
inline MarketModel parse_market(const json& j, std::optional<double> s0_override = std::nullopt,
                                bool force_extended = false) {
  require_schema(j, "hedge");
  if (!j.contains("grids") || !j.contains("Q"))
    throw InputError("market: needs \"grids\" and \"Q\"");
  std::vector<std::vector<double>> grids;
  for (const auto& g : j["grids"]) {
    std::vector<double> grid;
    for (const auto& x : g) {
      if (!x.is_number()) throw InputError("market: grid entries must be numbers");
      grid.push_back(x.get<double>());
    }
    grids.push_back(std::move(grid));
  }
  std::vector<std::vector<double>> q;
  for (const auto& qk : j["Q"]) {
    std::vector<double> row;
    for (const auto& x : qk) {
      if (!x.is_number()) throw InputError("market: Q entries must be numbers");
      row.push_back(x.get<double>());
    }
    q.push_back(std::move(row));
  }
  std::optional<double> s0;
  if (j.contains("S0") && !j["S0"].is_null()) s0 = j["S0"].get<double>();
  if (s0_override) s0 = s0_override;
  if (force_extended && !s0)
    throw InputError("market: extended mode requires S0 (file field or --s0)");
  return MarketModel(std::move(grids), std::move(q), s0);
}

inline json market_to_json(const MarketModel& m) {
  json j;
  j["schema"] = kSchemaVersion;
  j["type"] = "hedge";
  j["grids"] = m.grids();
  j["Q"] = m.q();
  if (m.extended()) j["S0"] = m.s0();
  return j;
}

inline json strategy_to_json(const MarketModel& m, const Strategy& s) {
  json theta = json::array();
  for (int t = 2; t <= m.horizon(); ++t) {
    json block;
    block["t"] = t;
    block["per_history"] = s.theta[static_cast<std::size_t>(t - 2)];
    theta.push_back(std::move(block));
  }
  json j;
  j["theta"] = std::move(theta);
  if (s.theta1) j["theta1"] = *s.theta1;
  j["g"] = s.g;
  return j;
}

inline json martingale_point_to_json(const MartingalePoint& pt) {
  json j;
  j["mu"] = pt.mu;
  j["alpha"] = pt.alpha;
  return j;
}

}  // namespace dualcone::io
