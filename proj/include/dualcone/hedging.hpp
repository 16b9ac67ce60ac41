#pragma once

// Discrete-time semistatic superhedging on finite positive price grids.
// Primal: cheapest cash m with m + (theta . S)_T + g(S_T) >= f path by path,
// with the static leg priced at or below zero against every measure in Q.
// Dual: maximize <f,mu> over martingale measures whose terminal marginal is
// a mix of Q. Primal unboundedness and dual infeasibility are the same
// finding (empty pricing polytope) and are reported as an arbitrage status,
// not an error.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dualcone/core_model.hpp"
#include "dualcone/lp_engine.hpp"

namespace dualcone {

class MarketModel {
 public:
  MarketModel(std::vector<std::vector<double>> grids, std::vector<std::vector<double>> q,
              std::optional<double> s0 = std::nullopt)
      : grids_(std::move(grids)), q_(std::move(q)), s0_(s0) {
    validate();
    build_paths();
  }

  int horizon() const { return static_cast<int>(grids_.size()); }
  const std::vector<std::vector<double>>& grids() const { return grids_; }
  const std::vector<double>& grid(int t) const { return grids_[static_cast<std::size_t>(t - 1)]; }
  const std::vector<std::vector<double>>& q() const { return q_; }
  std::size_t num_q() const { return q_.size(); }
  bool extended() const { return s0_.has_value(); }
  double s0() const {
    if (!s0_) throw InputError("market: no S0, extended strategies unavailable");
    return *s0_;
  }

  std::size_t num_paths() const { return path_space_->size(); }
  const SpacePtr& path_space() const { return path_space_; }

  /// Grid indices of path p, outermost time first.
  std::vector<std::size_t> path_digits(std::size_t p) const {
    std::vector<std::size_t> d(grids_.size());
    for (std::size_t t = grids_.size(); t-- > 0;) {
      d[t] = p % grids_[t].size();
      p /= grids_[t].size();
    }
    return d;
  }

  std::vector<double> path_values(std::size_t p) const {
    std::vector<std::size_t> d = path_digits(p);
    std::vector<double> v(d.size());
    for (std::size_t t = 0; t < d.size(); ++t) v[t] = grids_[t][d[t]];
    return v;
  }

  /// Histories (omega_1..omega_{t-1}) indexing theta_t, t in 2..T.
  std::size_t num_history_nodes(int t) const {
    std::size_t n = 1;
    for (int u = 1; u < t; ++u) n *= grid(u).size();
    return n;
  }

  std::size_t history_index(int t, const std::vector<std::size_t>& digits) const {
    std::size_t idx = 0;
    for (int u = 1; u < t; ++u) idx = idx * grid(u).size() + digits[static_cast<std::size_t>(u - 1)];
    return idx;
  }

 private:
  void validate() {
    if (grids_.size() < 2) throw InputError("market: horizon must be at least 2");
    for (const auto& g : grids_) {
      if (g.empty()) throw InputError("market: empty grid");
      for (double x : g) {
        if (!std::isfinite(x)) throw InputError("market: grid values must be finite");
        if (x <= 0.0)
          throw InputError(
              "market: grid values must be strictly positive (with the state 0 the "
              "superhedging duality fails unless positions may take the value +inf)");
      }
      for (std::size_t i = 1; i < g.size(); ++i)
        if (g[i] <= g[i - 1]) throw InputError("market: grids must be strictly ascending");
    }
    if (q_.empty()) throw InputError("market: Q must be nonempty");
    const std::size_t nT = grids_.back().size();
    for (const auto& qk : q_) {
      if (qk.size() != nT) throw InputError("market: Q entries must align with the final grid");
      double total = 0.0;
      for (double w : qk) {
        if (!std::isfinite(w) || w < 0.0) throw InputError("market: Q weights must be >= 0");
        total += w;
      }
      if (std::abs(total - 1.0) > 1e-12)
        throw InputError("market: Q entries must sum to 1 (within 1e-12)");
    }
    if (s0_ && (!std::isfinite(*s0_) || *s0_ <= 0.0))
      throw InputError("market: S0 must be strictly positive");
  }

  void build_paths() {
    std::size_t total = 1;
    for (const auto& g : grids_) total *= g.size();
    std::vector<std::string> labels(total);
    for (std::size_t p = 0; p < total; ++p) {
      std::vector<double> v = path_values_raw(p);
      std::string s = "(";
      for (std::size_t t = 0; t < v.size(); ++t) {
        if (t) s += ",";
        s += std::to_string(v[t]);
      }
      s += ")";
      labels[p] = std::move(s);
    }
    path_space_ = make_space(std::move(labels), std::vector<int>(total, 1));
  }

  std::vector<double> path_values_raw(std::size_t p) const {
    std::vector<double> v(grids_.size());
    for (std::size_t t = grids_.size(); t-- > 0;) {
      v[t] = grids_[t][p % grids_[t].size()];
      p /= grids_[t].size();
    }
    return v;
  }

  std::vector<std::vector<double>> grids_;
  std::vector<std::vector<double>> q_;
  std::optional<double> s0_;
  SpacePtr path_space_;
};

struct Strategy {
  std::vector<std::vector<double>> theta;  // theta[t-2]: one real per history node
  std::vector<double> g;                   // static leg on the final grid
  std::optional<double> theta1;            // extended mode position at time 1
};

// phi(g) = max_k <g, q_k>; +inf entries force +inf when q_k charges them.
inline double price_option(const MarketModel& m, const std::vector<double>& g) {
  if (g.size() != m.grids().back().size())
    throw InputError("price_option: payoff must align with the final grid");
  double best = -kInf;
  for (const auto& qk : m.q()) {
    double acc = 0.0;
    bool inf = false;
    for (std::size_t x = 0; x < g.size(); ++x) {
      if (qk[x] == 0.0) continue;
      if (!std::isfinite(g[x])) {
        inf = true;
        break;
      }
      acc += g[x] * qk[x];
    }
    best = std::max(best, inf ? kInf : acc);
  }
  return best;
}

/// (theta . S)_T along path p, plus theta1*(omega_1 - S0) in extended mode.
inline double gains(const MarketModel& m, const Strategy& s, std::size_t p) {
  std::vector<std::size_t> d = m.path_digits(p);
  std::vector<double> v = m.path_values(p);
  double acc = 0.0;
  for (int t = 2; t <= m.horizon(); ++t) {
    const auto& block = s.theta[static_cast<std::size_t>(t - 2)];
    acc += block[m.history_index(t, d)] *
           (v[static_cast<std::size_t>(t - 1)] - v[static_cast<std::size_t>(t - 2)]);
  }
  if (s.theta1) acc += *s.theta1 * (v[0] - m.s0());
  return acc;
}

inline bool strategy_is_valid(const MarketModel& m, const Strategy& s, double tol = 1e-9) {
  if (s.theta.size() != static_cast<std::size_t>(m.horizon() - 1)) return false;
  for (int t = 2; t <= m.horizon(); ++t)
    if (s.theta[static_cast<std::size_t>(t - 2)].size() != m.num_history_nodes(t)) return false;
  for (const auto& block : s.theta)
    for (double x : block)
      if (!std::isfinite(x)) return false;
  for (double x : s.g)
    if (!std::isfinite(x)) return false;
  return price_option(m, s.g) <= tol;
}

enum class HedgeStatus { Optimal, Arbitrage };

inline const char* to_string(HedgeStatus s) {
  return s == HedgeStatus::Optimal ? "optimal" : "arbitrage";
}

// ---------------------------------------------------------------------------
// martingale_polytope: the constraint block of M(Q) over (mu, alpha).
// ---------------------------------------------------------------------------
struct MartingalePoint {
  std::vector<double> mu;     // path weights
  std::vector<double> alpha;  // mixing weights over Q
};

struct MartingaleBlock {
  std::size_t num_paths = 0;
  std::size_t num_q = 0;
  std::vector<lp::Row> rows;  // over variables (mu | alpha), all equalities

  std::size_t num_vars() const { return num_paths + num_q; }

  /// Equalities as +/- inequality pairs: {x >= 0 : Ax <= b} for the vertex
  /// enumerator.
  lp::Polyhedron as_polyhedron() const {
    lp::Polyhedron poly;
    for (const lp::Row& r : rows) {
      poly.a.push_back(r.a);
      poly.b.push_back(r.b);
      std::vector<double> neg(r.a.size());
      for (std::size_t j = 0; j < r.a.size(); ++j) neg[j] = -r.a[j];
      poly.a.push_back(std::move(neg));
      poly.b.push_back(-r.b);
    }
    return poly;
  }
};

inline MartingaleBlock martingale_polytope(const MarketModel& m) {
  MartingaleBlock block;
  block.num_paths = m.num_paths();
  block.num_q = m.num_q();
  const std::size_t nv = block.num_vars();

  lp::Row mass;
  mass.a.assign(nv, 0.0);
  for (std::size_t p = 0; p < block.num_paths; ++p) mass.a[p] = 1.0;
  mass.rel = lp::Rel::Eq;
  mass.b = 1.0;
  block.rows.push_back(std::move(mass));

  // Conditional zero-increment rows, one per history node and time step.
  for (int t = 2; t <= m.horizon(); ++t) {
    std::vector<lp::Row> rows(m.num_history_nodes(t));
    for (auto& r : rows) {
      r.a.assign(nv, 0.0);
      r.rel = lp::Rel::Eq;
      r.b = 0.0;
    }
    for (std::size_t p = 0; p < block.num_paths; ++p) {
      std::vector<std::size_t> d = m.path_digits(p);
      std::vector<double> v = m.path_values(p);
      rows[m.history_index(t, d)].a[p] =
          v[static_cast<std::size_t>(t - 1)] - v[static_cast<std::size_t>(t - 2)];
    }
    for (auto& r : rows) block.rows.push_back(std::move(r));
  }

  // Terminal marginal pinned to the alpha-mix of Q.
  const std::size_t nT = m.grids().back().size();
  for (std::size_t x = 0; x < nT; ++x) {
    lp::Row row;
    row.a.assign(nv, 0.0);
    for (std::size_t p = 0; p < block.num_paths; ++p)
      if (m.path_digits(p).back() == x) row.a[p] = 1.0;
    for (std::size_t k = 0; k < block.num_q; ++k)
      row.a[block.num_paths + k] = -m.q()[k][x];
    row.rel = lp::Rel::Eq;
    row.b = 0.0;
    block.rows.push_back(std::move(row));
  }

  if (m.extended()) {
    lp::Row bary;
    bary.a.assign(nv, 0.0);
    for (std::size_t p = 0; p < block.num_paths; ++p)
      bary.a[p] = m.path_values(p)[0] - m.s0();
    bary.rel = lp::Rel::Eq;
    bary.b = 0.0;
    block.rows.push_back(std::move(bary));
  }
  return block;
}

inline bool martingale_point_is_valid(const MarketModel& m, const MartingalePoint& pt,
                                      double tol = 1e-9) {
  MartingaleBlock block = martingale_polytope(m);
  if (pt.mu.size() != block.num_paths || pt.alpha.size() != block.num_q) return false;
  for (double w : pt.mu)
    if (w < -tol) return false;
  double atotal = 0.0;
  for (double a : pt.alpha) {
    if (a < -tol) return false;
    atotal += a;
  }
  if (std::abs(atotal - 1.0) > tol) return false;
  for (const lp::Row& r : block.rows) {
    double acc = 0.0;
    for (std::size_t p = 0; p < block.num_paths; ++p) acc += r.a[p] * pt.mu[p];
    for (std::size_t k = 0; k < block.num_q; ++k) acc += r.a[block.num_paths + k] * pt.alpha[k];
    if (std::abs(acc - r.b) > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// superhedge_primal
// ---------------------------------------------------------------------------
struct HedgePrimalResult {
  HedgeStatus status = HedgeStatus::Optimal;
  double value = 0.0;
  Strategy strategy;
  std::vector<double> ray;  // improving direction over the LP variables on arbitrage
  lp::SolveStats stats;
};

inline HedgePrimalResult superhedge_primal(const MarketModel& m, const FuncOnSpace& f,
                                           const lp::Options& opt = {}) {
  if (!same_space(f.space(), m.path_space()))
    throw InputError("superhedge_primal: claim must live on the path space");
  if (!f.is_finite_everywhere())
    throw InputError("superhedge_primal: claims must be finite on positive grids");
  const int horizon = m.horizon();

  // Variable layout: m | theta blocks (t = 2..T) | theta1? | g.
  std::vector<std::size_t> theta_offset(static_cast<std::size_t>(horizon - 1), 0);
  std::size_t nv = 1;
  for (int t = 2; t <= horizon; ++t) {
    theta_offset[static_cast<std::size_t>(t - 2)] = nv;
    nv += m.num_history_nodes(t);
  }
  std::size_t theta1_idx = 0;
  if (m.extended()) theta1_idx = nv++;
  const std::size_t g_offset = nv;
  const std::size_t nT = m.grids().back().size();
  nv += nT;

  lp::Problem p;
  p.sense = lp::Sense::Min;
  p.c.assign(nv, 0.0);
  p.c[0] = 1.0;
  p.bounds.assign(nv, lp::VarBounds{std::nullopt, std::nullopt});  // all free

  for (std::size_t path = 0; path < m.num_paths(); ++path) {
    std::vector<std::size_t> d = m.path_digits(path);
    std::vector<double> v = m.path_values(path);
    lp::Row row;
    row.a.assign(nv, 0.0);
    row.a[0] = 1.0;
    for (int t = 2; t <= horizon; ++t)
      row.a[theta_offset[static_cast<std::size_t>(t - 2)] + m.history_index(t, d)] +=
          v[static_cast<std::size_t>(t - 1)] - v[static_cast<std::size_t>(t - 2)];
    if (m.extended()) row.a[theta1_idx] += v[0] - m.s0();
    row.a[g_offset + d.back()] += 1.0;
    row.rel = lp::Rel::Ge;
    row.b = f[path];
    p.rows.push_back(std::move(row));
  }
  for (const auto& qk : m.q()) {
    lp::Row row;
    row.a.assign(nv, 0.0);
    for (std::size_t x = 0; x < nT; ++x) row.a[g_offset + x] = qk[x];
    row.rel = lp::Rel::Le;
    row.b = 0.0;
    p.rows.push_back(std::move(row));
  }

  lp::Solution sol = lp::solve(p, opt);
  HedgePrimalResult out;
  out.stats = sol.stats;
  if (sol.status == lp::Status::Unbounded) {
    out.status = HedgeStatus::Arbitrage;
    out.ray = sol.ray;
    return out;
  }
  if (sol.status != lp::Status::Optimal)
    throw SolverStall("superhedge_primal: hedging LP cannot be infeasible");
  out.value = sol.value;
  out.strategy.theta.resize(static_cast<std::size_t>(horizon - 1));
  for (int t = 2; t <= horizon; ++t) {
    std::size_t off = theta_offset[static_cast<std::size_t>(t - 2)];
    out.strategy.theta[static_cast<std::size_t>(t - 2)]
        .assign(sol.primal.begin() + static_cast<long>(off),
                sol.primal.begin() + static_cast<long>(off + m.num_history_nodes(t)));
  }
  if (m.extended()) out.strategy.theta1 = sol.primal[theta1_idx];
  out.strategy.g.assign(sol.primal.begin() + static_cast<long>(g_offset), sol.primal.end());
  return out;
}

// ---------------------------------------------------------------------------
// superhedge_dual
// ---------------------------------------------------------------------------
struct HedgeDualResult {
  HedgeStatus status = HedgeStatus::Optimal;
  double value = 0.0;
  MartingalePoint point;
  std::vector<double> farkas;  // infeasibility certificate on arbitrage
  lp::SolveStats stats;
};

inline HedgeDualResult superhedge_dual(const MarketModel& m, const FuncOnSpace& f,
                                       const lp::Options& opt = {}) {
  if (!same_space(f.space(), m.path_space()))
    throw InputError("superhedge_dual: claim must live on the path space");
  if (!f.is_finite_everywhere())
    throw InputError("superhedge_dual: claims must be finite on positive grids");
  MartingaleBlock block = martingale_polytope(m);
  lp::Problem p;
  p.sense = lp::Sense::Max;
  p.c.assign(block.num_vars(), 0.0);
  for (std::size_t path = 0; path < block.num_paths; ++path) p.c[path] = f[path];
  p.bounds.assign(block.num_vars(), lp::VarBounds{0.0, std::nullopt});
  p.rows = block.rows;

  lp::Solution sol = lp::solve(p, opt);
  HedgeDualResult out;
  out.stats = sol.stats;
  if (sol.status == lp::Status::Infeasible) {
    out.status = HedgeStatus::Arbitrage;
    out.farkas = sol.farkas;
    return out;
  }
  if (sol.status != lp::Status::Optimal)
    throw SolverStall("superhedge_dual: the pricing polytope is bounded");
  out.value = sol.value;
  out.point.mu.assign(sol.primal.begin(), sol.primal.begin() + static_cast<long>(block.num_paths));
  out.point.alpha.assign(sol.primal.begin() + static_cast<long>(block.num_paths), sol.primal.end());
  for (double& w : out.point.mu) w = std::max(w, 0.0);
  for (double& a : out.point.alpha) a = std::max(a, 0.0);
  return out;
}

// ---------------------------------------------------------------------------
// attainability_check: f is attainable at zero cost iff both LP values are
// at (or below) zero, cross-checked and certified from both sides.
// ---------------------------------------------------------------------------
struct AttainabilityResult {
  bool attainable = false;
  bool sides_agree = false;
  HedgePrimalResult primal;
  HedgeDualResult dual;
};

inline AttainabilityResult attainability_check(const MarketModel& m, const FuncOnSpace& f,
                                               const lp::Options& opt = {}, double tol = 1e-9) {
  AttainabilityResult out;
  out.primal = superhedge_primal(m, f, opt);
  out.dual = superhedge_dual(m, f, opt);
  if (out.primal.status != HedgeStatus::Optimal || out.dual.status != HedgeStatus::Optimal) {
    out.sides_agree = out.primal.status == out.dual.status;
    out.attainable = false;
    return out;
  }
  bool primal_in = out.primal.value <= tol;
  bool dual_in = out.dual.value <= tol;
  out.sides_agree = primal_in == dual_in;
  out.attainable = primal_in && dual_in;
  return out;
}

}  // namespace dualcone
