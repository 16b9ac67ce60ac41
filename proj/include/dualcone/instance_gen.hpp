#pragma once

// Seeded random instance generation for the verification suites. The
// parameter ranges here are the documented generation table (see README):
// changing them changes every seeded suite, so treat them as frozen.

#include <cstdint>
#include <string>
#include <vector>

#include "dualcone/bipolar.hpp"
#include "dualcone/core_model.hpp"
#include "dualcone/hedging.hpp"
#include "dualcone/lp_engine.hpp"
#include "dualcone/rng.hpp"
#include "dualcone/transport.hpp"

namespace dualcone::gen {

// --- lp suite -------------------------------------------------------------
// n in [1,6], m in [1,6]; A,c in [-2,2]; b in [-1,3]; both senses; a sprinkle
// of equality/>= rows, free variables and finite upper bounds.
inline lp::Problem random_lp(Rng& rng) {
  lp::Problem p;
  const int n = rng.uniform_int(1, 6);
  const int m = rng.uniform_int(1, 6);
  p.sense = rng.chance(0.5) ? lp::Sense::Max : lp::Sense::Min;
  p.c.resize(static_cast<std::size_t>(n));
  for (double& v : p.c) v = rng.uniform(-2.0, 2.0);
  p.rows.resize(static_cast<std::size_t>(m));
  for (lp::Row& r : p.rows) {
    r.a.resize(static_cast<std::size_t>(n));
    for (double& v : r.a) v = rng.uniform(-2.0, 2.0);
    double pick = rng.unit();
    r.rel = pick < 0.70 ? lp::Rel::Le : (pick < 0.85 ? lp::Rel::Ge : lp::Rel::Eq);
    r.b = rng.uniform(-1.0, 3.0);
  }
  p.bounds.resize(static_cast<std::size_t>(n));
  for (lp::VarBounds& vb : p.bounds) {
    double pick = rng.unit();
    if (pick < 0.70) {
      vb = {0.0, std::nullopt};
    } else if (pick < 0.85) {
      vb = {0.0, rng.uniform(0.5, 3.0)};
    } else if (pick < 0.95) {
      vb = {std::nullopt, std::nullopt};
    } else {
      vb = {rng.uniform(-2.0, 0.0), rng.uniform(0.5, 2.5)};
    }
  }
  return p;
}

// Bounded-by-construction polytope instance {x >= 0 : Ax <= b} with A >= 0
// on a full row, so the vertex oracle applies.
inline lp::Problem random_bounded_lp(Rng& rng, lp::Polyhedron* poly_out = nullptr) {
  lp::Problem p;
  const int n = rng.uniform_int(1, 5);
  const int m = rng.uniform_int(1, 5);
  p.sense = lp::Sense::Max;
  p.c.resize(static_cast<std::size_t>(n));
  for (double& v : p.c) v = rng.uniform(-1.0, 2.0);
  p.rows.resize(static_cast<std::size_t>(m) + 1);
  for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i) {
    p.rows[i].a.resize(static_cast<std::size_t>(n));
    for (double& v : p.rows[i].a) v = rng.uniform(-1.0, 2.0);
    p.rows[i].rel = lp::Rel::Le;
    p.rows[i].b = rng.uniform(0.0, 3.0);
  }
  // Capping row keeps the feasible set bounded; b >= 0 keeps 0 feasible.
  lp::Row& cap = p.rows.back();
  cap.a.assign(static_cast<std::size_t>(n), 1.0);
  cap.rel = lp::Rel::Le;
  cap.b = rng.uniform(1.0, 4.0);
  p.bounds.assign(static_cast<std::size_t>(n), lp::VarBounds{0.0, std::nullopt});
  if (poly_out) {
    poly_out->a.clear();
    poly_out->b.clear();
    for (const lp::Row& r : p.rows) {
      poly_out->a.push_back(r.a);
      poly_out->b.push_back(r.b);
    }
  }
  return p;
}

// --- shared space generation ----------------------------------------------
// Levels: max level L in [1, min(5, n)], every level 1..L attained.
inline SpacePtr random_space(Rng& rng, int min_points, int max_points, int max_level_cap = 5,
                             int min_level = 1) {
  const int n = rng.uniform_int(min_points, max_points);
  int lcap = std::min(max_level_cap, n);
  const int max_level = rng.uniform_int(std::min(min_level, lcap), lcap);
  std::vector<std::string> labels(static_cast<std::size_t>(n));
  std::vector<int> levels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    labels[static_cast<std::size_t>(i)] = "w" + std::to_string(i);
    levels[static_cast<std::size_t>(i)] =
        i < max_level ? i + 1 : rng.uniform_int(1, max_level);
  }
  return make_space(std::move(labels), std::move(levels));
}

// --- bipolar suite ----------------------------------------------------------
// Generators: 1..max_gens functions with values in [0,4] (an occasional exact
// zero keeps degenerate corners exercised). anchor_level1_zero pins every
// generator to 0 at the first level-1 point, the family used by the
// exhaustion convergence battery.
inline GeneratorSet random_generator_set(Rng& rng, const SpacePtr& space, int max_gens,
                                         bool anchor_level1_zero = false) {
  const int ngen = rng.uniform_int(1, max_gens);
  std::size_t anchor = 0;
  for (std::size_t w = 0; w < space->size(); ++w)
    if (space->level(w) == 1) {
      anchor = w;
      break;
    }
  std::vector<FuncOnSpace> gens;
  gens.reserve(static_cast<std::size_t>(ngen));
  for (int j = 0; j < ngen; ++j) {
    std::vector<double> v(space->size());
    for (double& x : v) x = rng.chance(0.1) ? 0.0 : rng.uniform(0.0, 4.0);
    if (anchor_level1_zero) v[anchor] = 0.0;
    gens.emplace_back(space, std::move(v));
  }
  return GeneratorSet(space, std::move(gens), Regime::NonNeg);
}

/// Nonneg probe with values in [0,5], rescaled away from the membership
/// boundary: |sup_{polar} <f,mu> - 1| is forced to be decisive so that the
/// two independent membership routes cannot split a float tie. Boundary/tie
/// behavior is covered by dedicated deterministic tests.
inline FuncOnSpace random_decisive_probe(Rng& rng, const GeneratorSet& h,
                                         const lp::Options& opt = {}) {
  std::vector<double> v(h.space()->size());
  for (double& x : v) x = rng.uniform(0.0, 5.0);
  FuncOnSpace f(h.space(), std::move(v));
  SupportResult sup = support_over_polar(h, f, opt);
  if (sup.value.is_infinite()) return f;  // decisively out already
  double s = sup.value.finite_value();
  if (std::abs(s - 1.0) > 1e-5 || s == 0.0) return f;
  // Positive homogeneity: scaling f scales the support value.
  double target = rng.chance(0.5) ? 0.8 : 1.25;
  std::vector<double> scaled(f.values());
  for (double& x : scaled) x *= target / s;
  return FuncOnSpace(h.space(), std::move(scaled));
}

// --- transport suite --------------------------------------------------------
// |Omega_i| in [2, max_points]; 1..max_gens generators per side in [0,4];
// nonneg claims in [0,5] on the product.
inline TransportInstance random_transport_instance(Rng& rng, int max_points, int max_gens) {
  SpacePtr left = random_space(rng, 2, max_points);
  SpacePtr right = random_space(rng, 2, max_points);
  GeneratorSet h1 = random_generator_set(rng, left, max_gens);
  GeneratorSet h2 = random_generator_set(rng, right, max_gens);
  return TransportInstance(std::move(h1), std::move(h2));
}

inline FuncOnSpace random_product_claim(Rng& rng, const TransportInstance& t) {
  std::vector<double> v(t.product().size());
  for (double& x : v) x = rng.uniform(0.0, 5.0);
  return FuncOnSpace(t.product().space(), std::move(v));
}

// --- hedge suite ------------------------------------------------------------
// T in {2,3}; |X_t| in [1, max_grid] with values drawn from (0.5, 4.5) and
// deduplicated ascending; |Q| in [1, max_q] probability vectors. 70% of the
// draws are "planted": grids are nested backwards and the first Q entry is
// the terminal marginal of an explicitly constructed martingale (bracketing
// two-point kernels), so the pricing polytope is provably nonempty. The rest
// are unconstrained and usually carry arbitrage; both statuses are
// legitimate findings.
inline MarketModel random_market(Rng& rng, int max_grid, int max_q) {
  const int horizon = rng.uniform_int(2, 3);
  const bool planted = rng.chance(0.7);
  std::vector<std::vector<double>> grids(static_cast<std::size_t>(horizon));

  auto draw_grid = [&](double lo, double hi, int min_size) {
    std::vector<double> g;
    const int want = std::max(min_size, rng.uniform_int(1, max_grid));
    int guard = 0;
    while (static_cast<int>(g.size()) < want && guard++ < 200) {
      double x = rng.uniform(lo, hi);
      bool dup = false;
      for (double y : g) dup = dup || std::abs(x - y) < 1e-6;
      if (!dup) g.push_back(x);
    }
    std::sort(g.begin(), g.end());
    return g;
  };

  if (planted) {
    // Nested backwards so every value can be bracketed at the next step.
    grids.back() = draw_grid(0.5, 4.5, 2);
    for (int t = horizon - 1; t >= 1; --t) {
      const auto& next = grids[static_cast<std::size_t>(t)];
      grids[static_cast<std::size_t>(t - 1)] = draw_grid(next.front(), next.back(), 1);
    }
  } else {
    for (auto& g : grids) g = draw_grid(0.5, 4.5, 1);
  }

  const int nq = rng.uniform_int(1, max_q);
  std::vector<std::vector<double>> q(static_cast<std::size_t>(nq));
  for (auto& qk : q) qk = rng.simplex_point(grids.back().size());

  if (planted) {
    // Push a martingale forward: spread each point's mass onto the two
    // neighbours bracketing it in the next grid, preserving the mean.
    std::vector<double> mass = rng.simplex_point(grids.front().size());
    std::vector<double> values = grids.front();
    for (int t = 1; t < horizon; ++t) {
      const auto& next = grids[static_cast<std::size_t>(t)];
      std::vector<double> nm(next.size(), 0.0);
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (mass[i] == 0.0) continue;
        double x = values[i];
        std::size_t hi = 0;
        while (hi < next.size() && next[hi] < x) ++hi;
        if (hi == next.size()) {
          nm[next.size() - 1] += mass[i];
        } else if (hi == 0 || next[hi] == x) {
          nm[hi] += mass[i];
        } else {
          double a = next[hi - 1], b = next[hi];
          nm[hi - 1] += mass[i] * (b - x) / (b - a);
          nm[hi] += mass[i] * (x - a) / (b - a);
        }
      }
      mass = std::move(nm);
      values = next;
    }
    double total = 0.0;
    for (double w : mass) total += w;
    for (double& w : mass) w /= total;
    q[0] = mass;
  }
  return MarketModel(std::move(grids), std::move(q));
}

inline FuncOnSpace random_path_claim(Rng& rng, const MarketModel& m) {
  std::vector<double> v(m.num_paths());
  for (double& x : v) x = rng.uniform(0.0, 5.0);
  return FuncOnSpace(m.path_space(), std::move(v));
}

inline Strategy random_strategy(Rng& rng, const MarketModel& m) {
  Strategy s;
  s.theta.resize(static_cast<std::size_t>(m.horizon() - 1));
  for (int t = 2; t <= m.horizon(); ++t) {
    auto& block = s.theta[static_cast<std::size_t>(t - 2)];
    block.resize(m.num_history_nodes(t));
    for (double& x : block) x = rng.uniform(-1.0, 1.0);
  }
  s.g.assign(m.grids().back().size(), 0.0);
  return s;
}

/// Product measure sample for the polar characterization battery, rescaled
/// away from the verdict boundary (see random_decisive_probe).
inline MeasureOnSpace random_decisive_product_measure(Rng& rng, const TransportInstance& t) {
  std::vector<double> w(t.product().size());
  for (double& x : w) x = rng.chance(0.2) ? 0.0 : rng.uniform(0.0, 0.8);
  MeasureOnSpace mu(t.product().space(), std::move(w));
  auto [m1, m2] = marginals(t.product(), mu);
  double worst = 0.0;
  for (std::size_t g = 0; g < t.h1().num_generators(); ++g) {
    ExtReal v = pairing(t.h1().gen(g), m1);
    if (v.is_finite()) worst = std::max(worst, v.finite_value());
  }
  for (std::size_t g = 0; g < t.h2().num_generators(); ++g) {
    ExtReal v = pairing(t.h2().gen(g), m2);
    if (v.is_finite()) worst = std::max(worst, v.finite_value());
  }
  if (worst > 0.0 && std::abs(worst - 1.0) < 1e-5) {
    double target = rng.chance(0.5) ? 0.8 : 1.25;
    std::vector<double> scaled(mu.weights());
    for (double& x : scaled) x *= target / worst;
    return MeasureOnSpace(t.product().space(), std::move(scaled));
  }
  return mu;
}

}  // namespace dualcone::gen
