#pragma once

// Transport duality with marginal polar constraints: the value
// pi(f) = max { <f,mu> : mu >= 0 on the product, mu_1 in polar(H1),
// mu_2 in polar(H2) } and its dual, the superhedging split
// phi(f) = min { 1'y1 + 1'y2 : G_i'y_i >= f_i, f1 (+) f2 >= f, y,f_i >= 0 }.
// Both are LPs over the coupling polytope; the split also recovers the
// traded legs (f1, f2).

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "dualcone/bipolar.hpp"
#include "dualcone/core_model.hpp"
#include "dualcone/lp_engine.hpp"

namespace dualcone {

class TransportInstance {
 public:
  TransportInstance(GeneratorSet h1, GeneratorSet h2,
                    std::optional<MeasureOnSpace> dominating1 = std::nullopt,
                    std::optional<MeasureOnSpace> dominating2 = std::nullopt)
      : h1_(std::move(h1)),
        h2_(std::move(h2)),
        product_(h1_.space(), h2_.space()),
        dominating1_(std::move(dominating1)),
        dominating2_(std::move(dominating2)) {
    if (h1_.regime() != Regime::NonNeg || h2_.regime() != Regime::NonNeg)
      throw InputError("transport: both marginal sets must be in the nonneg regime");
    if (dominating1_ && !same_space(dominating1_->space(), h1_.space()))
      throw InputError("transport: dominating measure 1 lives off the left space");
    if (dominating2_ && !same_space(dominating2_->space(), h2_.space()))
      throw InputError("transport: dominating measure 2 lives off the right space");
  }

  const GeneratorSet& h1() const { return h1_; }
  const GeneratorSet& h2() const { return h2_; }
  const ProductSpace& product() const { return product_; }
  // Dominating measures are recorded for documentation parity only; on a
  // finite space the counting measure dominates everything.
  const std::optional<MeasureOnSpace>& dominating1() const { return dominating1_; }
  const std::optional<MeasureOnSpace>& dominating2() const { return dominating2_; }

  /// Product points whose mass is forced to zero by a +inf generator value
  /// on either factor.
  std::vector<char> forced_mask() const {
    std::vector<char> left(h1_.space()->size(), 0), right(h2_.space()->size(), 0);
    for (std::size_t w : h1_.zero_forced_points()) left[w] = 1;
    for (std::size_t w : h2_.zero_forced_points()) right[w] = 1;
    std::vector<char> mask(product_.size(), 0);
    for (std::size_t i = 0; i < h1_.space()->size(); ++i)
      for (std::size_t j = 0; j < h2_.space()->size(); ++j)
        mask[product_.index(i, j)] = left[i] || right[j];
    return mask;
  }

 private:
  GeneratorSet h1_;
  GeneratorSet h2_;
  ProductSpace product_;
  std::optional<MeasureOnSpace> dominating1_;
  std::optional<MeasureOnSpace> dominating2_;
};

struct CouplingCertificate {
  MeasureOnSpace coupling;
  std::vector<double> slack1;  // polar row slacks of mu_1 against polar(H1)
  std::vector<double> slack2;

  double min_slack() const {
    double m = kInf;
    for (double s : slack1) m = std::min(m, s);
    for (double s : slack2) m = std::min(m, s);
    return m;
  }
};

namespace detail {

inline std::vector<double> polar_slacks(const GeneratorSet& h, const MeasureOnSpace& mu) {
  lp::Polyhedron poly = polar(h);
  std::vector<double> slack(poly.a.size());
  for (std::size_t i = 0; i < poly.a.size(); ++i) {
    double acc = 0.0;
    for (std::size_t w = 0; w < mu.size(); ++w) acc += poly.a[i][w] * mu[w];
    slack[i] = poly.b[i] - acc;
  }
  return slack;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// transport_value
// ---------------------------------------------------------------------------
struct TransportResult {
  ExtReal value = ExtReal::finite(0.0);
  std::optional<CouplingCertificate> certificate;  // optimal (or +inf witness) coupling
  std::vector<double> ray;                         // unbounded direction when value = +inf via ray
  lp::SolveStats stats;
};

inline TransportResult transport_value(const TransportInstance& t, const FuncOnSpace& f,
                                       const lp::Options& opt = {}) {
  if (!same_space(f.space(), t.product().space()))
    throw InputError("transport_value: claim must live on the product space");
  const std::size_t n = t.product().size();
  std::vector<char> forced = t.forced_mask();
  TransportResult out;

  auto make_certificate = [&](const std::vector<double>& raw) {
    std::vector<double> w(raw);
    for (double& x : w) x = std::max(x, 0.0);
    MeasureOnSpace mu(t.product().space(), std::move(w));
    auto [m1, m2] = marginals(t.product(), mu);
    return CouplingCertificate{mu, detail::polar_slacks(t.h1(), m1),
                               detail::polar_slacks(t.h2(), m2)};
  };

  // +inf claim with feasible mass: the value is +inf.
  for (std::size_t p = 0; p < n; ++p) {
    if (std::isfinite(f[p]) || forced[p]) continue;
    std::size_t i = t.product().left_index(p), j = t.product().right_index(p);
    double hmax = 1.0;
    for (std::size_t g = 0; g < t.h1().num_generators(); ++g)
      hmax = std::max(hmax, t.h1().gen(g)[i]);
    for (std::size_t g = 0; g < t.h2().num_generators(); ++g)
      hmax = std::max(hmax, t.h2().gen(g)[j]);
    std::vector<double> w(n, 0.0);
    w[p] = 1.0 / hmax;
    out.value = ExtReal::infinity();
    out.certificate = make_certificate(w);
    return out;
  }

  lp::Problem p;
  p.sense = lp::Sense::Max;
  p.c.assign(n, 0.0);
  for (std::size_t q = 0; q < n; ++q) p.c[q] = forced[q] ? 0.0 : f[q];
  p.bounds.assign(n, lp::VarBounds{0.0, std::nullopt});
  for (std::size_t g = 0; g < t.h1().num_generators(); ++g) {
    lp::Row row;
    row.a.assign(n, 0.0);
    for (std::size_t i = 0; i < t.h1().space()->size(); ++i) {
      double v = t.h1().gen(g)[i];
      if (!std::isfinite(v)) continue;
      for (std::size_t j = 0; j < t.h2().space()->size(); ++j)
        row.a[t.product().index(i, j)] = v;
    }
    row.rel = lp::Rel::Le;
    row.b = 1.0;
    p.rows.push_back(std::move(row));
  }
  for (std::size_t g = 0; g < t.h2().num_generators(); ++g) {
    lp::Row row;
    row.a.assign(n, 0.0);
    for (std::size_t j = 0; j < t.h2().space()->size(); ++j) {
      double v = t.h2().gen(g)[j];
      if (!std::isfinite(v)) continue;
      for (std::size_t i = 0; i < t.h1().space()->size(); ++i)
        row.a[t.product().index(i, j)] = v;
    }
    row.rel = lp::Rel::Le;
    row.b = 1.0;
    p.rows.push_back(std::move(row));
  }
  for (std::size_t q = 0; q < n; ++q) {
    if (!forced[q]) continue;
    lp::Row row;
    row.a.assign(n, 0.0);
    row.a[q] = 1.0;
    row.rel = lp::Rel::Le;
    row.b = 0.0;
    p.rows.push_back(std::move(row));
  }

  lp::Solution sol = lp::solve(p, opt);
  out.stats += sol.stats;
  if (sol.status == lp::Status::Unbounded) {
    out.value = ExtReal::infinity();
    out.ray = sol.ray;
    double fr = 0.0;
    for (std::size_t q = 0; q < n; ++q) fr += p.c[q] * std::max(sol.ray[q], 0.0);
    std::vector<double> w(n, 0.0);
    if (fr > 0.0)
      for (std::size_t q = 0; q < n; ++q) w[q] = 2.0 * std::max(sol.ray[q], 0.0) / fr;
    out.certificate = make_certificate(w);
    return out;
  }
  if (sol.status != lp::Status::Optimal)
    throw SolverStall("transport_value: coupling LP unexpectedly infeasible");
  out.value = ExtReal::finite(sol.value);
  out.certificate = make_certificate(sol.primal);
  return out;
}

// ---------------------------------------------------------------------------
// superhedge_split
// ---------------------------------------------------------------------------
struct SplitResult {
  ExtReal value = ExtReal::finite(0.0);
  std::optional<FuncOnSpace> f1, f2;  // the split legs (+inf on zero-forced points)
  std::vector<double> y1, y2;         // generator weights certifying pi_i(f_i) <= 1'y_i
  lp::SolveStats stats;
};

inline SplitResult superhedge_split(const TransportInstance& t, const FuncOnSpace& f,
                                    const lp::Options& opt = {}) {
  if (!same_space(f.space(), t.product().space()))
    throw InputError("superhedge_split: claim must live on the product space");
  const std::size_t n1 = t.h1().space()->size(), n2 = t.h2().space()->size();
  const std::size_t g1 = t.h1().num_generators(), g2 = t.h2().num_generators();
  std::vector<char> forced = t.forced_mask();
  std::vector<char> forced1(n1, 0), forced2(n2, 0);
  for (std::size_t w : t.h1().zero_forced_points()) forced1[w] = 1;
  for (std::size_t w : t.h2().zero_forced_points()) forced2[w] = 1;
  SplitResult out;

  for (std::size_t p = 0; p < t.product().size(); ++p)
    if (!std::isfinite(f[p]) && !forced[p]) {
      out.value = ExtReal::infinity();
      return out;
    }

  // Variables: y1 | y2 | f1 | f2.
  const std::size_t nv = g1 + g2 + n1 + n2;
  const std::size_t off_y2 = g1, off_f1 = g1 + g2, off_f2 = g1 + g2 + n1;
  lp::Problem p;
  p.sense = lp::Sense::Min;
  p.c.assign(nv, 0.0);
  for (std::size_t k = 0; k < g1 + g2; ++k) p.c[k] = 1.0;
  p.bounds.assign(nv, lp::VarBounds{0.0, std::nullopt});

  // G_i' y_i >= f_i pointwise (rows at zero-forced points are vacuous: a +inf
  // generator covers them at no cost).
  for (std::size_t x = 0; x < n1; ++x) {
    if (forced1[x]) continue;
    lp::Row row;
    row.a.assign(nv, 0.0);
    for (std::size_t g = 0; g < g1; ++g) row.a[g] = t.h1().gen(g)[x];
    row.a[off_f1 + x] = -1.0;
    row.rel = lp::Rel::Ge;
    row.b = 0.0;
    p.rows.push_back(std::move(row));
  }
  for (std::size_t y = 0; y < n2; ++y) {
    if (forced2[y]) continue;
    lp::Row row;
    row.a.assign(nv, 0.0);
    for (std::size_t g = 0; g < g2; ++g) row.a[off_y2 + g] = t.h2().gen(g)[y];
    row.a[off_f2 + y] = -1.0;
    row.rel = lp::Rel::Ge;
    row.b = 0.0;
    p.rows.push_back(std::move(row));
  }
  // f1 (+) f2 >= f on unforced pairs.
  for (std::size_t x = 0; x < n1; ++x)
    for (std::size_t y = 0; y < n2; ++y) {
      std::size_t q = t.product().index(x, y);
      if (forced[q]) continue;
      lp::Row row;
      row.a.assign(nv, 0.0);
      row.a[off_f1 + x] = 1.0;
      row.a[off_f2 + y] = 1.0;
      row.rel = lp::Rel::Ge;
      row.b = f[q];
      p.rows.push_back(std::move(row));
    }

  lp::Solution sol = lp::solve(p, opt);
  out.stats += sol.stats;
  if (sol.status == lp::Status::Infeasible) {
    // Mirrors an unbounded coupling LP: no finite split exists.
    out.value = ExtReal::infinity();
    return out;
  }
  if (sol.status != lp::Status::Optimal)
    throw SolverStall("superhedge_split: split LP should be bounded");
  out.value = ExtReal::finite(sol.value);
  out.y1.assign(sol.primal.begin(), sol.primal.begin() + static_cast<long>(g1));
  out.y2.assign(sol.primal.begin() + static_cast<long>(off_y2),
                sol.primal.begin() + static_cast<long>(off_f1));
  std::vector<double> f1v(n1), f2v(n2);
  for (std::size_t x = 0; x < n1; ++x)
    f1v[x] = forced1[x] ? kInf : std::max(sol.primal[off_f1 + x], 0.0);
  for (std::size_t y = 0; y < n2; ++y)
    f2v[y] = forced2[y] ? kInf : std::max(sol.primal[off_f2 + y], 0.0);
  out.f1 = FuncOnSpace(t.h1().space(), std::move(f1v));
  out.f2 = FuncOnSpace(t.h2().space(), std::move(f2v));
  return out;
}

// ---------------------------------------------------------------------------
// product_polar_check: mu in H° iff both marginals land in the factor polars.
// ---------------------------------------------------------------------------
struct PolarCheckResult {
  bool verdict = false;
  std::vector<double> slack1, slack2;
  double min_slack() const {
    double m = kInf;
    for (double s : slack1) m = std::min(m, s);
    for (double s : slack2) m = std::min(m, s);
    return m;
  }
};

inline PolarCheckResult product_polar_check(const TransportInstance& t, const MeasureOnSpace& mu,
                                            double tol = 1e-9) {
  if (!same_space(mu.space(), t.product().space()))
    throw InputError("product_polar_check: measure must live on the product space");
  auto [m1, m2] = marginals(t.product(), mu);
  PolarCheckResult out;
  out.slack1 = detail::polar_slacks(t.h1(), m1);
  out.slack2 = detail::polar_slacks(t.h2(), m2);
  out.verdict = out.min_slack() >= -tol;
  return out;
}

// ---------------------------------------------------------------------------
// duality_report: transport value against the superhedging split per claim.
// ---------------------------------------------------------------------------
struct TransportDualityReport {
  struct Entry {
    ExtReal value;
    ExtReal split_value;
    double gap = 0.0;
    bool ok = false;
  };
  std::vector<Entry> entries;
  bool all_ok = true;
  lp::SolveStats stats;
};

inline TransportDualityReport duality_report(const TransportInstance& t,
                                             const std::vector<FuncOnSpace>& fs,
                                             const lp::Options& opt = {}) {
  TransportDualityReport rep;
  for (const FuncOnSpace& f : fs) {
    TransportResult v = transport_value(t, f, opt);
    SplitResult s = superhedge_split(t, f, opt);
    rep.stats += v.stats;
    rep.stats += s.stats;
    TransportDualityReport::Entry e{v.value, s.value, 0.0, false};
    if (v.value.is_finite() && s.value.is_finite()) {
      e.gap = std::abs(v.value.finite_value() - s.value.finite_value());
      e.ok = e.gap <= opt.gap_tol * (1.0 + std::abs(v.value.finite_value()));
    } else {
      e.ok = v.value.is_infinite() && s.value.is_infinite();
    }
    rep.all_ok = rep.all_ok && e.ok;
    rep.entries.push_back(e);
  }
  return rep;
}

}  // namespace dualcone
