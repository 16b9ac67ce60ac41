#pragma once

// Generator-described monotone convex sets H, their polars, membership with
// certificates (both LP routes), the superhedging functional and its
// conjugate, normalization, and the gamma/k exhaustion relaxation.
//
// H = { f : f <= sum_j lambda_j h_j  for some lambda in the simplex }, the
// monotone convex down-closure of the generator list. On a finite space this
// set is convex, monotone and closed under pointwise limits of lower-bounded
// sequences, so the bipolar identity H = H°° holds by construction in the
// nonneg regime.
//
// +inf bookkeeping: a point where some generator is +inf forces mu = 0 in the
// polar (zero-forcing row). On the membership side a row whose target is
// dominated through a +inf generator is covered by giving those generators a
// tiny total weight (tau below); in ExtReal arithmetic any positive weight
// suffices, so covered verdicts are sound.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "dualcone/core_model.hpp"
#include "dualcone/lp_engine.hpp"

namespace dualcone {

enum class Regime { NonNeg, BoundedBelow };

/// Verdict boundary for bipolar membership: values up to 1 + kMembershipTol
/// count as member (H°° is closed, the boundary belongs to the set).
inline constexpr double kMembershipTol = 1e-7;
/// Certificate re-verification tolerance.
inline constexpr double kCertTol = 1e-9;
/// Weight floor used to activate +inf generators in membership LPs.
inline constexpr double kCoverTau = 1e-9;

class GeneratorSet {
 public:
  GeneratorSet(SpacePtr space, std::vector<FuncOnSpace> generators, Regime regime)
      : space_(std::move(space)), generators_(std::move(generators)), regime_(regime) {
    if (!space_) throw InputError("generator set: null space");
    if (generators_.empty()) throw InputError("generator set: needs at least one generator");
    for (const FuncOnSpace& g : generators_) {
      if (!same_space(g.space(), space_))
        throw InputError("generator set: generators must share the space");
      if (regime_ == Regime::NonNeg && g.lower_bound() < 0.0)
        throw InputError("generator set: nonneg regime requires generators >= 0");
    }
  }

  const SpacePtr& space() const { return space_; }
  Regime regime() const { return regime_; }
  std::size_t num_generators() const { return generators_.size(); }
  const FuncOnSpace& gen(std::size_t j) const { return generators_[j]; }
  const std::vector<FuncOnSpace>& generators() const { return generators_; }

  bool all_finite() const {
    for (const FuncOnSpace& g : generators_)
      if (!g.is_finite_everywhere()) return false;
    return true;
  }

  /// Generators taking +inf at point w.
  std::vector<std::size_t> infinite_gens_at(std::size_t w) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < generators_.size(); ++j)
      if (!std::isfinite(generators_[j][w])) out.push_back(j);
    return out;
  }

  /// Points where any generator is +inf (polar forces mu = 0 there).
  std::vector<std::size_t> zero_forced_points() const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < space_->size(); ++w)
      if (!infinite_gens_at(w).empty()) out.push_back(w);
    return out;
  }

  /// Mix value sum_j lambda_j h_j(w) under ExtReal conventions.
  ExtReal mix_at(const std::vector<double>& lambda, std::size_t w) const {
    ExtReal acc = ExtReal::finite(0.0);
    for (std::size_t j = 0; j < generators_.size(); ++j)
      acc = acc + scale_nonneg(std::max(lambda[j], 0.0), ExtReal::from_double(generators_[j][w]));
    return acc;
  }

 private:
  SpacePtr space_;
  std::vector<FuncOnSpace> generators_;
  Regime regime_;
};

struct MembershipCertificate {
  enum class Verdict { Member, NonMember };
  Verdict verdict = Verdict::Member;
  std::vector<double> lambda;                 // member: simplex weights
  std::vector<double> slack;                  // member: mix - f per point (+inf allowed)
  std::optional<MeasureOnSpace> separating;   // non-member: mu' with <f,mu'> > 1 >= <h,mu'>
  lp::SolveStats stats;

  bool is_member() const { return verdict == Verdict::Member; }
};

// ---------------------------------------------------------------------------
// polar(H) = {mu >= 0 : <h_j, mu> <= 1 for all j}; +inf generator values
// become zero-forcing rows mu(w) <= 0.
// ---------------------------------------------------------------------------
inline lp::Polyhedron polar(const GeneratorSet& h) {
  lp::Polyhedron poly;
  const std::size_t n = h.space()->size();
  for (std::size_t j = 0; j < h.num_generators(); ++j) {
    std::vector<double> row(n, 0.0);
    for (std::size_t w = 0; w < n; ++w)
      row[w] = std::isfinite(h.gen(j)[w]) ? h.gen(j)[w] : 0.0;
    poly.a.push_back(std::move(row));
    poly.b.push_back(1.0);
  }
  for (std::size_t w : h.zero_forced_points()) {
    std::vector<double> row(n, 0.0);
    row[w] = 1.0;
    poly.a.push_back(std::move(row));
    poly.b.push_back(0.0);
  }
  return poly;
}

// ---------------------------------------------------------------------------
// support_over_polar: sup { <f,mu> : mu in polar(H) } as an LP; +inf when the
// LP is unbounded or f = +inf at a point whose mass is not forced to zero.
// ---------------------------------------------------------------------------
struct SupportResult {
  ExtReal value;
  std::optional<MeasureOnSpace> maximizer;  // witness: attains value, or certifies +inf
  lp::SolveStats stats;
};

inline SupportResult support_over_polar(const GeneratorSet& h, const FuncOnSpace& f,
                                        const lp::Options& opt = {}) {
  if (!same_space(f.space(), h.space())) throw InputError("support_over_polar: space mismatch");
  const std::size_t n = h.space()->size();
  std::vector<char> forced(n, 0);
  for (std::size_t w : h.zero_forced_points()) forced[w] = 1;

  // f = +inf with positive mass feasible => sup = +inf.
  for (std::size_t w = 0; w < n; ++w) {
    if (std::isfinite(f[w]) || forced[w]) continue;
    double hmax = 1.0;
    for (std::size_t j = 0; j < h.num_generators(); ++j) hmax = std::max(hmax, h.gen(j)[w]);
    std::vector<double> weights(n, 0.0);
    weights[w] = 1.0 / hmax;
    return {ExtReal::infinity(), MeasureOnSpace(h.space(), std::move(weights)), {}};
  }

  lp::Polyhedron poly = polar(h);
  lp::Problem p;
  p.sense = lp::Sense::Max;
  p.c.assign(n, 0.0);
  for (std::size_t w = 0; w < n; ++w) p.c[w] = forced[w] ? 0.0 : f[w];
  for (std::size_t i = 0; i < poly.a.size(); ++i)
    p.rows.push_back({poly.a[i], lp::Rel::Le, poly.b[i]});
  lp::Solution sol = lp::solve(p, opt);

  auto clamp_measure = [&](const std::vector<double>& raw) {
    std::vector<double> w(raw);
    for (double& x : w) x = std::max(x, 0.0);
    return MeasureOnSpace(h.space(), std::move(w));
  };
  if (sol.status == lp::Status::Unbounded) {
    double fr = 0.0;
    for (std::size_t w = 0; w < n; ++w) fr += p.c[w] * std::max(sol.ray[w], 0.0);
    std::vector<double> w(n, 0.0);
    if (fr > 0.0)
      for (std::size_t i = 0; i < n; ++i) w[i] = 2.0 * std::max(sol.ray[i], 0.0) / fr;
    return {ExtReal::infinity(), MeasureOnSpace(h.space(), std::move(w)), sol.stats};
  }
  if (sol.status != lp::Status::Optimal)
    throw SolverStall("support_over_polar: polar LP unexpectedly infeasible");
  SupportResult out{ExtReal::finite(sol.value), clamp_measure(sol.primal), sol.stats};
  return out;
}

namespace detail {

// Shared membership/pricing LP. Variables: [m (free) when with_price] then
// lambda_1..lambda_n >= 0. Row 0 is the simplex row. cover_mode picks how
// rows touched by +inf generators are encoded (see header comment).
struct MemberLp {
  enum class Outcome { Built, TriviallyInfinite };
  Outcome outcome = Outcome::Built;
  lp::Problem problem;
  std::size_t lambda_offset = 0;
  std::vector<int> point_row;  // per space point: row index, -1 if not a finite row
  std::size_t witness_point = 0;  // for TriviallyInfinite
};

inline MemberLp build_member_lp(const GeneratorSet& h, const FuncOnSpace& f, bool with_price,
                                bool cover_mode) {
  MemberLp out;
  const std::size_t ngen = h.num_generators();
  const std::size_t npts = h.space()->size();
  out.lambda_offset = with_price ? 1 : 0;
  const std::size_t nvars = out.lambda_offset + ngen;

  lp::Problem& p = out.problem;
  p.sense = lp::Sense::Min;
  p.c.assign(nvars, 0.0);
  if (with_price) p.c[0] = 1.0;
  p.bounds.assign(nvars, lp::VarBounds{0.0, std::nullopt});
  if (with_price) p.bounds[0] = {std::nullopt, std::nullopt};

  lp::Row simplex;
  simplex.a.assign(nvars, 0.0);
  for (std::size_t j = 0; j < ngen; ++j) simplex.a[out.lambda_offset + j] = 1.0;
  simplex.rel = lp::Rel::Eq;
  simplex.b = 1.0;
  p.rows.push_back(std::move(simplex));

  out.point_row.assign(npts, -1);
  for (std::size_t w = 0; w < npts; ++w) {
    std::vector<std::size_t> inf_gens = h.infinite_gens_at(w);
    const bool f_infinite = !std::isfinite(f[w]);
    if (f_infinite && inf_gens.empty()) {
      out.outcome = MemberLp::Outcome::TriviallyInfinite;
      out.witness_point = w;
      return out;
    }
    if (f_infinite || (cover_mode && !inf_gens.empty())) {
      // Coverage row: the +inf generators need positive total weight.
      lp::Row cover;
      cover.a.assign(nvars, 0.0);
      for (std::size_t j : inf_gens) cover.a[out.lambda_offset + j] = 1.0;
      cover.rel = lp::Rel::Ge;
      cover.b = kCoverTau;
      p.rows.push_back(std::move(cover));
      continue;
    }
    // Finite domination row: [m +] sum_j lambda_j h_j(w) >= f(w), +inf
    // generators contributing only through the coverage encoding.
    lp::Row row;
    row.a.assign(nvars, 0.0);
    if (with_price) row.a[0] = 1.0;
    for (std::size_t j = 0; j < ngen; ++j)
      row.a[out.lambda_offset + j] = std::isfinite(h.gen(j)[w]) ? h.gen(j)[w] : 0.0;
    row.rel = lp::Rel::Ge;
    row.b = f[w];
    out.point_row[w] = static_cast<int>(p.rows.size());
    p.rows.push_back(std::move(row));
  }
  return out;
}

// Separating measure from the Farkas certificate of the (all-finite)
// membership LP, rescaled so <f,mu'> > 1 >= <h_j,mu'>.
inline std::optional<MeasureOnSpace> farkas_separating_measure(const GeneratorSet& h,
                                                               const FuncOnSpace& f,
                                                               const MemberLp& sys,
                                                               const std::vector<double>& farkas) {
  const std::size_t npts = h.space()->size();
  std::vector<double> mu(npts, 0.0);
  for (std::size_t w = 0; w < npts; ++w)
    if (sys.point_row[w] >= 0)
      mu[w] = std::max(farkas[static_cast<std::size_t>(sys.point_row[w])], 0.0);
  MeasureOnSpace raw(h.space(), mu);
  double big = 0.0;
  for (std::size_t j = 0; j < h.num_generators(); ++j) {
    ExtReal v = pairing(h.gen(j), raw);
    if (!v.is_finite()) return std::nullopt;
    big = std::max(big, v.finite_value());
  }
  ExtReal fv = pairing(f, raw);
  if (!fv.is_finite()) return std::nullopt;
  if (fv.finite_value() <= big + 1e-12) return std::nullopt;
  double s = 2.0 / (big + fv.finite_value());
  std::vector<double> scaled(npts);
  for (std::size_t w = 0; w < npts; ++w) scaled[w] = s * mu[w];
  return MeasureOnSpace(h.space(), std::move(scaled));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// member_primal: LP feasibility of {lambda >= 0, sum lambda = 1,
// sum lambda_j h_j >= f}; member verdicts carry lambda, non-member verdicts a
// separating measure (from the membership LP's own Farkas dual when the data
// is finite, else from the polar support maximizer).
// ---------------------------------------------------------------------------
inline MembershipCertificate member_primal(const GeneratorSet& h, const FuncOnSpace& f,
                                           const lp::Options& opt = {}) {
  if (!same_space(f.space(), h.space())) throw InputError("member_primal: space mismatch");
  MembershipCertificate cert;

  auto finish_member = [&](const std::vector<double>& lambda) {
    cert.verdict = MembershipCertificate::Verdict::Member;
    cert.lambda = lambda;
    cert.slack.assign(h.space()->size(), 0.0);
    for (std::size_t w = 0; w < h.space()->size(); ++w) {
      ExtReal mix = h.mix_at(lambda, w);
      cert.slack[w] = mix.is_finite()
                          ? (std::isfinite(f[w]) ? mix.finite_value() - f[w] : -kInf)
                          : kInf;
    }
  };

  detail::MemberLp sys = detail::build_member_lp(h, f, false, true);
  if (sys.outcome == detail::MemberLp::Outcome::TriviallyInfinite) {
    // f = +inf where every generator is finite: separate with a point mass.
    cert.verdict = MembershipCertificate::Verdict::NonMember;
    std::vector<double> w(h.space()->size(), 0.0);
    double hmax = 1.0;
    for (std::size_t j = 0; j < h.num_generators(); ++j)
      hmax = std::max(hmax, h.gen(j)[sys.witness_point]);
    w[sys.witness_point] = 1.0 / hmax;
    cert.separating = MeasureOnSpace(h.space(), std::move(w));
    return cert;
  }

  lp::Solution sol = lp::solve(sys.problem, opt);
  cert.stats += sol.stats;
  if (sol.status == lp::Status::Optimal) {
    finish_member(std::vector<double>(sol.primal.begin() + sys.lambda_offset, sol.primal.end()));
    return cert;
  }

  if (!h.all_finite()) {
    // Second chance: dominate through the finite parts instead of coverage.
    detail::MemberLp alt = detail::build_member_lp(h, f, false, false);
    lp::Solution sol2 = lp::solve(alt.problem, opt);
    cert.stats += sol2.stats;
    if (sol2.status == lp::Status::Optimal) {
      finish_member(std::vector<double>(sol2.primal.begin() + alt.lambda_offset, sol2.primal.end()));
      return cert;
    }
  }

  cert.verdict = MembershipCertificate::Verdict::NonMember;
  if (h.all_finite() && f.is_finite_everywhere()) {
    cert.separating = detail::farkas_separating_measure(h, f, sys, sol.farkas);
    if (cert.separating) return cert;
  }
  // Fall back to the polar route for the separating measure.
  SupportResult sup = support_over_polar(h, f, opt);
  cert.stats += sup.stats;
  cert.separating = sup.maximizer;
  return cert;
}

// ---------------------------------------------------------------------------
// bipolar_contains: f in H°° iff sup over polar(H) of <f,.> <= 1. The verdict
// comes from the support LP alone; member certificates additionally attach
// lambda by solving the membership system.
// ---------------------------------------------------------------------------
inline MembershipCertificate bipolar_contains(const GeneratorSet& h, const FuncOnSpace& f,
                                              const lp::Options& opt = {}) {
  if (!same_space(f.space(), h.space())) throw InputError("bipolar_contains: space mismatch");
  SupportResult sup = support_over_polar(h, f, opt);
  MembershipCertificate cert;
  cert.stats = sup.stats;
  if (sup.value.as_double() <= 1.0 + kMembershipTol) {
    MembershipCertificate primal = member_primal(h, f, opt);
    cert.stats += primal.stats;
    cert.verdict = MembershipCertificate::Verdict::Member;
    cert.lambda = primal.lambda;
    cert.slack = primal.slack;
    return cert;
  }
  cert.verdict = MembershipCertificate::Verdict::NonMember;
  cert.separating = sup.maximizer;
  return cert;
}

/// Recomputes a certificate's claims from scratch at tolerance tol.
inline bool certificate_reverifies(const GeneratorSet& h, const FuncOnSpace& f,
                                   const MembershipCertificate& cert, double tol = kCertTol) {
  if (cert.is_member()) {
    if (cert.lambda.size() != h.num_generators()) return false;
    double total = 0.0;
    for (double l : cert.lambda) {
      if (l < -tol) return false;
      total += l;
    }
    if (std::abs(total - 1.0) > tol) return false;
    for (std::size_t w = 0; w < h.space()->size(); ++w) {
      ExtReal mix = h.mix_at(cert.lambda, w);
      if (!std::isfinite(f[w])) {
        if (mix.is_finite()) return false;
        continue;
      }
      if (mix.is_finite() && mix.finite_value() < f[w] - tol) return false;
    }
    return true;
  }
  if (!cert.separating) return false;
  for (std::size_t j = 0; j < h.num_generators(); ++j) {
    ExtReal v = pairing(h.gen(j), *cert.separating);
    if (v.is_finite() && v.finite_value() > 1.0 + tol) return false;
    if (!v.is_finite()) return false;
  }
  ExtReal fv = pairing(f, *cert.separating);
  return !fv.is_finite() || fv.finite_value() >= 1.0 + tol;
}

// ---------------------------------------------------------------------------
// superhedge_price: phi(f) = min { m : m + sum lambda_j h_j >= f, lambda in
// the simplex }. Value +inf when f = +inf off every +inf generator.
// ---------------------------------------------------------------------------
struct SuperhedgeResult {
  ExtReal value = ExtReal::finite(0.0);
  std::vector<double> lambda;
  bool degenerate = false;  // LP unbounded below (never with finite data)
  lp::SolveStats stats;
};

inline SuperhedgeResult superhedge_price(const GeneratorSet& h, const FuncOnSpace& f,
                                         const lp::Options& opt = {}) {
  if (!same_space(f.space(), h.space())) throw InputError("superhedge_price: space mismatch");
  SuperhedgeResult out;
  detail::MemberLp sys = detail::build_member_lp(h, f, true, true);
  if (sys.outcome == detail::MemberLp::Outcome::TriviallyInfinite) {
    out.value = ExtReal::infinity();
    return out;
  }
  lp::Solution sol = lp::solve(sys.problem, opt);
  out.stats += sol.stats;
  bool have = false;
  double best = 0.0;
  std::vector<double> lambda;
  if (sol.status == lp::Status::Optimal) {
    have = true;
    best = sol.value;
    lambda.assign(sol.primal.begin() + sys.lambda_offset, sol.primal.end());
  } else if (sol.status == lp::Status::Unbounded) {
    out.degenerate = true;
    return out;
  }
  if (!h.all_finite()) {
    detail::MemberLp alt = detail::build_member_lp(h, f, true, false);
    lp::Solution sol2 = lp::solve(alt.problem, opt);
    out.stats += sol2.stats;
    if (sol2.status == lp::Status::Optimal && (!have || sol2.value < best)) {
      have = true;
      best = sol2.value;
      lambda.assign(sol2.primal.begin() + alt.lambda_offset, sol2.primal.end());
    } else if (sol2.status == lp::Status::Unbounded) {
      out.degenerate = true;
      return out;
    }
  }
  if (!have) throw SolverStall("superhedge_price: pricing LP unexpectedly infeasible");
  out.value = ExtReal::finite(best);
  out.lambda = std::move(lambda);
  return out;
}

// ---------------------------------------------------------------------------
// conjugate_at: phi*(mu) = +inf off probability measures, else the support of
// the generators, max_j <h_j, mu> (the sup over H is attained on generators).
// ---------------------------------------------------------------------------
inline ExtReal conjugate_at(const GeneratorSet& h, const MeasureOnSpace& mu) {
  if (!same_space(mu.space(), h.space())) throw InputError("conjugate_at: space mismatch");
  if (std::abs(mu.total_mass() - 1.0) > 1e-9) return ExtReal::infinity();
  ExtReal best = pairing(h.gen(0), mu);
  for (std::size_t j = 1; j < h.num_generators(); ++j) {
    ExtReal v = pairing(h.gen(j), mu);
    if (best < v) best = v;
  }
  return best;
}

// ---------------------------------------------------------------------------
// superhedge_dual: phi(f) = sup { <f,mu> - t : mu a probability,
// <h_j,mu> <= t } — the dual LP of superhedge_price. Points carrying a +inf
// generator are excluded from the support (the +inf - inf := -inf convention).
// ---------------------------------------------------------------------------
struct SuperhedgeDualResult {
  ExtReal value = ExtReal::finite(0.0);
  std::optional<MeasureOnSpace> maximizer;
  double conjugate = 0.0;  // optimal t
  bool degenerate = false;  // no probability measure in the feasible region
  lp::SolveStats stats;
};

inline SuperhedgeDualResult superhedge_dual(const GeneratorSet& h, const FuncOnSpace& f,
                                            const lp::Options& opt = {}) {
  if (!same_space(f.space(), h.space())) throw InputError("superhedge_dual: space mismatch");
  const std::size_t npts = h.space()->size();
  std::vector<char> forced(npts, 0);
  for (std::size_t w : h.zero_forced_points()) forced[w] = 1;
  SuperhedgeDualResult out;

  std::vector<std::size_t> cols;  // admissible points
  for (std::size_t w = 0; w < npts; ++w)
    if (!forced[w]) cols.push_back(w);
  if (cols.empty()) {
    out.degenerate = true;
    return out;
  }
  for (std::size_t w : cols) {
    if (std::isfinite(f[w])) continue;
    // A point mass at w is feasible and pays +inf.
    std::vector<double> weights(npts, 0.0);
    weights[w] = 1.0;
    out.value = ExtReal::infinity();
    out.maximizer = MeasureOnSpace(h.space(), std::move(weights));
    return out;
  }

  lp::Problem p;
  const std::size_t nv = cols.size() + 1;  // mu columns then t
  p.sense = lp::Sense::Max;
  p.c.assign(nv, 0.0);
  for (std::size_t k = 0; k < cols.size(); ++k) p.c[k] = f[cols[k]];
  p.c[nv - 1] = -1.0;
  p.bounds.assign(nv, lp::VarBounds{0.0, std::nullopt});
  p.bounds[nv - 1] = {std::nullopt, std::nullopt};
  lp::Row mass;
  mass.a.assign(nv, 0.0);
  for (std::size_t k = 0; k < cols.size(); ++k) mass.a[k] = 1.0;
  mass.rel = lp::Rel::Eq;
  mass.b = 1.0;
  p.rows.push_back(std::move(mass));
  for (std::size_t j = 0; j < h.num_generators(); ++j) {
    lp::Row row;
    row.a.assign(nv, 0.0);
    for (std::size_t k = 0; k < cols.size(); ++k) row.a[k] = h.gen(j)[cols[k]];
    row.a[nv - 1] = -1.0;
    row.rel = lp::Rel::Le;
    row.b = 0.0;
    p.rows.push_back(std::move(row));
  }
  lp::Solution sol = lp::solve(p, opt);
  out.stats += sol.stats;
  if (sol.status != lp::Status::Optimal)
    throw SolverStall("superhedge_dual: dual LP should be solvable");
  out.value = ExtReal::finite(sol.value);
  out.conjugate = sol.primal[nv - 1];
  std::vector<double> weights(npts, 0.0);
  for (std::size_t k = 0; k < cols.size(); ++k) weights[cols[k]] = std::max(sol.primal[k], 0.0);
  out.maximizer = MeasureOnSpace(h.space(), std::move(weights));
  return out;
}

// ---------------------------------------------------------------------------
// biconjugation_report: primal price vs dual representation per probe.
// ---------------------------------------------------------------------------
struct BiconjugationReport {
  struct Entry {
    ExtReal primal;
    ExtReal dual;
    double gap = 0.0;  // 0 when both sides are +inf
    bool ok = false;
  };
  std::vector<Entry> entries;
  bool all_ok = true;
  lp::SolveStats stats;
};

inline BiconjugationReport biconjugation_report(const GeneratorSet& h,
                                                const std::vector<FuncOnSpace>& fs,
                                                const lp::Options& opt = {}) {
  BiconjugationReport rep;
  for (const FuncOnSpace& f : fs) {
    SuperhedgeResult primal = superhedge_price(h, f, opt);
    SuperhedgeDualResult dual = superhedge_dual(h, f, opt);
    rep.stats += primal.stats;
    rep.stats += dual.stats;
    BiconjugationReport::Entry e{primal.value, dual.value, 0.0, false};
    if (primal.value.is_finite() && dual.value.is_finite()) {
      e.gap = std::abs(primal.value.finite_value() - dual.value.finite_value());
      e.ok = e.gap <= opt.gap_tol * (1.0 + std::abs(primal.value.finite_value()));
    } else {
      e.ok = primal.value.is_infinite() && dual.value.is_infinite();
    }
    rep.all_ok = rep.all_ok && e.ok;
    rep.entries.push_back(e);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// normalize: the unique shift m with H - m normalized; m = max over the
// simplex of the pointwise min of the mix (an LP). Returns the shifted set.
// ---------------------------------------------------------------------------
struct NormalizeResult {
  double m = 0.0;
  std::vector<double> lambda;
  GeneratorSet shifted;
  lp::SolveStats stats;
};

inline NormalizeResult normalize(const GeneratorSet& h, const lp::Options& opt = {}) {
  // max { m : m <= mix(w) for all w } is -phi(0), with the same lambda.
  SuperhedgeResult price = superhedge_price(h, FuncOnSpace::constant(h.space(), 0.0), opt);
  if (price.degenerate || price.value.is_infinite())
    throw InputError("normalize: set is trivial, no finite shift exists");
  double m = -price.value.finite_value();
  std::vector<FuncOnSpace> shifted;
  shifted.reserve(h.num_generators());
  for (std::size_t j = 0; j < h.num_generators(); ++j) {
    std::vector<double> v(h.space()->size());
    for (std::size_t w = 0; w < h.space()->size(); ++w)
      v[w] = h.gen(j)[w] - m;  // +inf stays +inf
    shifted.emplace_back(h.space(), std::move(v));
  }
  return {m, price.lambda, GeneratorSet(h.space(), std::move(shifted), Regime::BoundedBelow),
          price.stats};
}

// ---------------------------------------------------------------------------
// exhaustion_relax: H_k described by the generators {h_j + gamma/k}; contains
// H and decreases to it as k grows.
// ---------------------------------------------------------------------------
inline GeneratorSet exhaustion_relax(const GeneratorSet& h, int k) {
  if (k <= 0) throw InputError("exhaustion_relax: k must be positive");
  if (h.regime() != Regime::NonNeg)
    throw InputError("exhaustion_relax: requires the nonneg regime");
  FuncOnSpace g = gamma(h.space());
  std::vector<FuncOnSpace> gens;
  gens.reserve(h.num_generators());
  for (std::size_t j = 0; j < h.num_generators(); ++j) {
    std::vector<double> v(h.space()->size());
    for (std::size_t w = 0; w < h.space()->size(); ++w)
      v[w] = h.gen(j)[w] + g[w] / static_cast<double>(k);
    gens.emplace_back(h.space(), std::move(v));
  }
  return GeneratorSet(h.space(), std::move(gens), Regime::BoundedBelow);
}

// ---------------------------------------------------------------------------
// tightness_probe: smallest level l with -eps + n*1_{K_l^c} in H (H assumed
// normalized, m = 0). On a noncompact space the final level is excluded:
// K_maxlevel covers the whole window only as a truncation artifact.
// ---------------------------------------------------------------------------
inline std::optional<int> tightness_probe(const GeneratorSet& h, double n, double eps,
                                          const lp::Options& opt = {}) {
  if (!(n > 0.0) || !(eps > 0.0)) throw InputError("tightness_probe: n and eps must be > 0");
  const int max_level = h.space()->max_level();
  const int last = max_level == 1 ? 1 : max_level - 1;
  for (int level = 1; level <= last; ++level) {
    std::vector<double> v(h.space()->size());
    for (std::size_t w = 0; w < h.space()->size(); ++w)
      v[w] = -eps + (h.space()->level(w) > level ? n : 0.0);
    if (member_primal(h, FuncOnSpace(h.space(), std::move(v)), opt).is_member()) return level;
  }
  return std::nullopt;
}

}  // namespace dualcone
