#pragma once

// Seeded invariant batteries behind `dualcone verify`. Each suite draws
// `count` instances from the documented generation table (instance_gen.hpp),
// runs the module's checks, and tallies pass/fail. Failures are findings,
// not errors; the first failing instance is serialized verbatim into the
// summary so it can be replayed.

#include <cmath>
#include <string>
#include <vector>

#include "dualcone/bipolar.hpp"
#include "dualcone/hedging.hpp"
#include "dualcone/instance_gen.hpp"
#include "dualcone/io.hpp"
#include "dualcone/lp_engine.hpp"
#include "dualcone/transport.hpp"

namespace dualcone::verify {

struct Summary {
  std::string suite;
  std::uint64_t seed = 0;
  int count = 0;
  int passed = 0;
  int failed = 0;
  int arbitrage = 0;  // hedge suite: instances with (consistently) empty M(Q)
  std::vector<std::string> failure_notes;
  io::json first_counterexample;
  lp::SolveStats stats;

  void record(bool ok, const std::string& note, const io::json& instance) {
    if (ok) {
      ++passed;
      return;
    }
    ++failed;
    if (failure_notes.size() < 16) failure_notes.push_back(note);
    if (first_counterexample.is_null()) first_counterexample = instance;
  }
};

inline io::json summary_to_json(const Summary& s) {
  io::json j;
  j["suite"] = s.suite;
  j["seed"] = s.seed;
  j["count"] = s.count;
  j["passed"] = s.passed;
  j["failed"] = s.failed;
  if (s.suite == "hedge") j["arbitrage_instances"] = s.arbitrage;
  if (!s.failure_notes.empty()) j["failures"] = s.failure_notes;
  if (!s.first_counterexample.is_null()) j["first_counterexample"] = s.first_counterexample;
  j["solver_stats"] = io::stats_to_json(s.stats);
  return j;
}

// ---------------------------------------------------------------------------
// lp suite: status-correct solves with verified certificates, bit-identical
// repeats, and vertex-oracle agreement on bounded instances.
// ---------------------------------------------------------------------------
inline Summary run_lp_suite(std::uint64_t seed, int count, const lp::Options& opt = {}) {
  Summary s{"lp", seed, count};
  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    const bool bounded_case = i % 2 == 1;
    lp::Polyhedron poly;
    lp::Problem p = bounded_case ? gen::random_bounded_lp(rng, &poly) : gen::random_lp(rng);
    std::string note;
    bool ok = true;
    try {
      lp::Solution sol = lp::solve(p, opt);
      s.stats += sol.stats;
      switch (sol.status) {
        case lp::Status::Optimal: {
          lp::Residuals r = lp::check_certificates(p, sol);
          if (r.primal > opt.feas_tol || r.dual > opt.feas_tol) {
            ok = false;
            note = "certificate residuals exceed tolerance";
          }
          if (r.duality_gap > opt.gap_tol * (1.0 + std::abs(sol.value))) {
            ok = false;
            note = "duality gap exceeds tolerance";
          }
          lp::Solution again = lp::solve(p, opt);
          if (again.value != sol.value || again.primal != sol.primal || again.dual != sol.dual) {
            ok = false;
            note = "solve is not deterministic";
          }
          if (bounded_case) {
            auto verts = lp::enumerate_vertices(poly);
            if (verts.empty()) {
              ok = false;
              note = "bounded polytope lost its vertices";
            } else {
              double oracle = lp::max_over_vertices(p.c, verts);
              if (std::abs(sol.value - oracle) > opt.gap_tol * (1.0 + std::abs(oracle))) {
                ok = false;
                note = "solve disagrees with the vertex oracle";
              }
            }
          }
          break;
        }
        case lp::Status::Infeasible:
          if (!lp::farkas_proves_infeasible(p, sol.farkas)) {
            ok = false;
            note = "Farkas certificate does not verify";
          }
          break;
        case lp::Status::Unbounded:
          if (!lp::ray_proves_unbounded(p, sol.ray)) {
            ok = false;
            note = "ray certificate does not verify";
          }
          break;
      }
    } catch (const SolverStall& e) {
      ok = false;
      note = std::string("solver stalled: ") + e.what();
    }
    s.record(ok, note, io::lp_to_json(p));
  }
  return s;
}

// ---------------------------------------------------------------------------
// bipolar suite: per instance, 5 decisive probes checking that the two
// membership routes agree with re-verifiable certificates and that the
// superhedging price matches its dual representation.
// ---------------------------------------------------------------------------
inline Summary run_bipolar_suite(std::uint64_t seed, int count, const lp::Options& opt = {},
                                 int max_points = 30, int max_gens = 10, int probes = 5) {
  Summary s{"bipolar", seed, count};
  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    SpacePtr space = gen::random_space(rng, 2, max_points);
    GeneratorSet h = gen::random_generator_set(rng, space, max_gens);
    bool ok = true;
    std::string note;
    try {
      for (int pr = 0; pr < probes && ok; ++pr) {
        FuncOnSpace f = gen::random_decisive_probe(rng, h, opt);
        MembershipCertificate a = member_primal(h, f, opt);
        MembershipCertificate b = bipolar_contains(h, f, opt);
        s.stats += a.stats;
        s.stats += b.stats;
        if (a.is_member() != b.is_member()) {
          ok = false;
          note = "membership routes disagree";
          break;
        }
        if (!certificate_reverifies(h, f, a) || !certificate_reverifies(h, f, b)) {
          ok = false;
          note = "certificate failed re-verification";
          break;
        }
        SuperhedgeResult primal = superhedge_price(h, f, opt);
        SuperhedgeDualResult dual = superhedge_dual(h, f, opt);
        s.stats += primal.stats;
        s.stats += dual.stats;
        if (!primal.value.is_finite() || !dual.value.is_finite()) {
          ok = primal.value.is_finite() == dual.value.is_finite();
          if (!ok) note = "biconjugation sides disagree on finiteness";
          continue;
        }
        double gap = std::abs(primal.value.finite_value() - dual.value.finite_value());
        if (gap > opt.gap_tol * (1.0 + std::abs(primal.value.finite_value()))) {
          ok = false;
          note = "biconjugation gap exceeds tolerance";
        }
      }
    } catch (const SolverStall& e) {
      ok = false;
      note = std::string("solver stalled: ") + e.what();
    }
    s.record(ok, note, io::generator_set_to_json(h));
  }
  return s;
}

// ---------------------------------------------------------------------------
// transport suite: value/split duality, marginal feasibility of returned
// couplings, polar characterization samples, and the vertex oracle on small
// coupling polytopes.
// ---------------------------------------------------------------------------
inline Summary run_transport_suite(std::uint64_t seed, int count, const lp::Options& opt = {},
                                   int max_points = 6, int max_gens = 3) {
  Summary s{"transport", seed, count};
  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    TransportInstance t = gen::random_transport_instance(rng, max_points, max_gens);
    bool ok = true;
    std::string note;
    try {
      FuncOnSpace f = gen::random_product_claim(rng, t);
      TransportResult v = transport_value(t, f, opt);
      SplitResult sp = superhedge_split(t, f, opt);
      s.stats += v.stats;
      s.stats += sp.stats;
      if (v.value.is_finite() != sp.value.is_finite()) {
        ok = false;
        note = "transport value and split disagree on finiteness";
      } else if (v.value.is_finite()) {
        double gap = std::abs(v.value.finite_value() - sp.value.finite_value());
        if (gap > opt.gap_tol * (1.0 + std::abs(v.value.finite_value()))) {
          ok = false;
          note = "transport duality gap exceeds tolerance";
        }
        if (v.certificate && v.certificate->min_slack() < -1e-9) {
          ok = false;
          note = "optimal coupling leaves the marginal polars";
        }
      }
      // Polar characterization on sampled measures: marginal verdict matches
      // the direct pairing against sampled members of H.
      for (int probe = 0; probe < 5 && ok; ++probe) {
        MeasureOnSpace mu = gen::random_decisive_product_measure(rng, t);
        PolarCheckResult check = product_polar_check(t, mu);
        auto [m1, m2] = marginals(t.product(), mu);
        bool direct = true;
        for (std::size_t g = 0; g < t.h1().num_generators() && direct; ++g) {
          ExtReal val = pairing(t.h1().gen(g), m1);
          direct = val.is_finite() && val.finite_value() <= 1.0 + 1e-9;
        }
        for (std::size_t g = 0; g < t.h2().num_generators() && direct; ++g) {
          ExtReal val = pairing(t.h2().gen(g), m2);
          direct = val.is_finite() && val.finite_value() <= 1.0 + 1e-9;
        }
        if (check.verdict != direct) {
          ok = false;
          note = "polar characterization disagrees with direct pairing";
        }
      }
    } catch (const SolverStall& e) {
      ok = false;
      note = std::string("solver stalled: ") + e.what();
    }
    s.record(ok, note, io::transport_to_json(t));
  }
  return s;
}

// ---------------------------------------------------------------------------
// hedge suite: primal/dual status agreement, strong duality on optimal
// instances, certificate validity; arbitrage draws are tallied separately.
// ---------------------------------------------------------------------------
inline Summary run_hedge_suite(std::uint64_t seed, int count, const lp::Options& opt = {},
                               int max_grid = 5, int max_q = 3) {
  Summary s{"hedge", seed, count};
  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    MarketModel m = gen::random_market(rng, max_grid, max_q);
    bool ok = true;
    std::string note;
    try {
      FuncOnSpace f = gen::random_path_claim(rng, m);
      HedgePrimalResult primal = superhedge_primal(m, f, opt);
      HedgeDualResult dual = superhedge_dual(m, f, opt);
      s.stats += primal.stats;
      s.stats += dual.stats;
      if (primal.status != dual.status) {
        ok = false;
        note = "primal and dual disagree on the arbitrage status";
      } else if (primal.status == HedgeStatus::Arbitrage) {
        ++s.arbitrage;
      } else {
        double gap = std::abs(primal.value - dual.value);
        if (gap > opt.gap_tol * (1.0 + std::abs(primal.value))) {
          ok = false;
          note = "semistatic duality gap exceeds tolerance";
        }
        if (!strategy_is_valid(m, primal.strategy)) {
          ok = false;
          note = "returned strategy violates the static price constraint";
        }
        if (!martingale_point_is_valid(m, dual.point)) {
          ok = false;
          note = "returned measure violates the martingale constraints";
        }
      }
    } catch (const SolverStall& e) {
      ok = false;
      note = std::string("solver stalled: ") + e.what();
    }
    s.record(ok, note, io::market_to_json(m));
  }
  return s;
}

inline Summary run_suite(const std::string& suite, std::uint64_t seed, int count,
                         const lp::Options& opt = {}) {
  if (suite == "lp") return run_lp_suite(seed, count, opt);
  if (suite == "bipolar") return run_bipolar_suite(seed, count, opt);
  if (suite == "transport") return run_transport_suite(seed, count, opt);
  if (suite == "hedge") return run_hedge_suite(seed, count, opt);
  throw InputError("verify: unknown suite \"" + suite +
                   "\" (expected lp, bipolar, transport or hedge)");
}

}  // namespace dualcone::verify
