#pragma once

// Self-contained dense LP kernel: revised simplex (explicit basis inverse,
// Bland's anti-cycling rule, phase one for feasibility) with optimality,
// infeasibility (Farkas) and unboundedness (ray) certificates, plus a
// brute-force vertex enumerator used as an independent oracle.
//
// Dual conventions. Let d = c - A'y be the reduced costs w.r.t. the reported
// row duals y.
//   sense == Min: y_i >= 0 on '>=' rows, y_i <= 0 on '<=' rows, free on '=';
//                 dual objective b'y + sum_j [ l_j d_j^+ - u_j d_j^- ].
//   sense == Max: y_i >= 0 on '<=' rows, y_i <= 0 on '>=' rows, free on '=';
//                 dual objective b'y + sum_j [ u_j d_j^+ - l_j d_j^- ].
// A d_j^+ > 0 requires the corresponding bound to be finite (dual residual
// otherwise). Farkas certificates use the sense-independent convention
// y_i <= 0 on '<=' rows, y_i >= 0 on '>=' rows; they prove infeasibility via
//   sup_{l<=x<=u} y'Ax < y'b.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualcone/core_model.hpp"

namespace dualcone::lp {

enum class Sense { Min, Max };
enum class Rel { Le, Eq, Ge };

struct Row {
  std::vector<double> a;
  Rel rel = Rel::Le;
  double b = 0.0;
};

struct VarBounds {
  std::optional<double> lower = 0.0;  // default x >= 0
  std::optional<double> upper = std::nullopt;
};

struct Problem {
  Sense sense = Sense::Max;
  std::vector<double> c;
  std::vector<Row> rows;
  std::vector<VarBounds> bounds;  // empty => x >= 0 for every variable

  std::size_t num_vars() const { return c.size(); }

  void validate() const {
    for (double v : c)
      if (!std::isfinite(v)) throw InputError("lp: objective coefficients must be finite");
    for (const Row& r : rows) {
      if (r.a.size() != c.size()) throw InputError("lp: row dimension mismatch");
      if (!std::isfinite(r.b)) throw InputError("lp: right-hand sides must be finite");
      for (double v : r.a)
        if (!std::isfinite(v)) throw InputError("lp: row coefficients must be finite");
    }
    if (!bounds.empty() && bounds.size() != c.size())
      throw InputError("lp: bounds dimension mismatch");
    for (const VarBounds& vb : bounds) {
      if (vb.lower && !std::isfinite(*vb.lower)) throw InputError("lp: bounds must be finite");
      if (vb.upper && !std::isfinite(*vb.upper)) throw InputError("lp: bounds must be finite");
      if (vb.lower && vb.upper && *vb.lower > *vb.upper)
        throw InputError("lp: lower bound exceeds upper bound");
    }
  }

  VarBounds bound(std::size_t j) const { return bounds.empty() ? VarBounds{} : bounds[j]; }
};

enum class Status { Optimal, Infeasible, Unbounded };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "?";
}

struct Residuals {
  double primal = 0.0;     // max violation of rows and bounds
  double dual = 0.0;       // max sign violation of y and reduced costs
  double slackness = 0.0;  // max |multiplier * slack|
  double duality_gap = 0.0;
};

struct SolveStats {
  long pivots = 0;
  long phase1_pivots = 0;

  SolveStats& operator+=(const SolveStats& o) {
    pivots += o.pivots;
    phase1_pivots += o.phase1_pivots;
    return *this;
  }
};

struct Solution {
  Status status = Status::Optimal;
  double value = 0.0;
  std::vector<double> primal;  // per variable
  std::vector<double> dual;    // per row (see conventions above)
  Residuals residuals;
  std::vector<double> ray;     // unboundedness certificate, per variable
  std::vector<double> farkas;  // infeasibility certificate, per row
  SolveStats stats;
};

struct Options {
  double feas_tol = 1e-9;  // absolute residual tolerance
  double gap_tol = 1e-7;   // relative duality-gap tolerance
  long max_pivots = 100000;
};

// ---------------------------------------------------------------------------
// Certificate re-verification (from scratch; reports, never throws).
// ---------------------------------------------------------------------------
inline Residuals check_certificates(const Problem& p, const Solution& s) {
  Residuals r;
  const std::size_t n = p.num_vars();
  if (s.primal.size() != n || s.dual.size() != p.rows.size()) {
    r.primal = r.dual = r.slackness = r.duality_gap = kInf;
    return r;
  }
  // Primal feasibility.
  std::vector<double> ax(p.rows.size(), 0.0);
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += p.rows[i].a[j] * s.primal[j];
    ax[i] = acc;
    double viol = 0.0;
    switch (p.rows[i].rel) {
      case Rel::Le: viol = acc - p.rows[i].b; break;
      case Rel::Ge: viol = p.rows[i].b - acc; break;
      case Rel::Eq: viol = std::abs(acc - p.rows[i].b); break;
    }
    r.primal = std::max(r.primal, viol);
  }
  for (std::size_t j = 0; j < n; ++j) {
    VarBounds vb = p.bound(j);
    if (vb.lower) r.primal = std::max(r.primal, *vb.lower - s.primal[j]);
    if (vb.upper) r.primal = std::max(r.primal, s.primal[j] - *vb.upper);
  }
  r.primal = std::max(r.primal, 0.0);

  // Dual feasibility: row sign conditions.
  const bool maxing = p.sense == Sense::Max;
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    double y = s.dual[i];
    switch (p.rows[i].rel) {
      case Rel::Le: r.dual = std::max(r.dual, maxing ? -y : y); break;
      case Rel::Ge: r.dual = std::max(r.dual, maxing ? y : -y); break;
      case Rel::Eq: break;
    }
  }
  // Reduced costs d = c - A'y; a positive part needs the matching bound.
  double dual_obj = 0.0;
  for (std::size_t i = 0; i < p.rows.size(); ++i) dual_obj += s.dual[i] * p.rows[i].b;
  for (std::size_t j = 0; j < n; ++j) {
    double d = p.c[j];
    for (std::size_t i = 0; i < p.rows.size(); ++i) d -= p.rows[i].a[j] * s.dual[i];
    VarBounds vb = p.bound(j);
    double dpos = std::max(d, 0.0), dneg = std::max(-d, 0.0);
    const std::optional<double>& plus_bound = maxing ? vb.upper : vb.lower;
    const std::optional<double>& minus_bound = maxing ? vb.lower : vb.upper;
    if (dpos > 0.0) {
      if (plus_bound)
        dual_obj += dpos * (*plus_bound);
      else
        r.dual = std::max(r.dual, dpos);
    }
    if (dneg > 0.0) {
      if (minus_bound)
        dual_obj -= dneg * (*minus_bound);
      else
        r.dual = std::max(r.dual, dneg);
    }
    // Complementary slackness on bounds.
    if (vb.lower) {
      double mult = maxing ? dneg : dpos;
      r.slackness = std::max(r.slackness, std::abs(mult * (s.primal[j] - *vb.lower)));
    }
    if (vb.upper) {
      double mult = maxing ? dpos : dneg;
      r.slackness = std::max(r.slackness, std::abs(mult * (*vb.upper - s.primal[j])));
    }
  }
  r.dual = std::max(r.dual, 0.0);

  // Complementary slackness on rows.
  for (std::size_t i = 0; i < p.rows.size(); ++i)
    if (p.rows[i].rel != Rel::Eq)
      r.slackness = std::max(r.slackness, std::abs(s.dual[i] * (ax[i] - p.rows[i].b)));

  r.duality_gap = std::abs(s.value - dual_obj);
  return r;
}

namespace detail {

// Standard-form data: min c.s  s.t.  A s = b (b >= 0), s >= 0.
struct StdForm {
  std::size_t m = 0, n = 0;
  std::vector<std::vector<double>> a;  // row-major
  std::vector<double> b;
  std::vector<double> c;
  double c0 = 0.0;                 // objective constant from variable shifts
  double obj_sign = 1.0;           // +1 Min, -1 Max
  std::vector<double> row_sign;    // per std row, +1 or -1 (b-normalization)
  std::vector<int> orig_row;       // std row -> original row index, -1 for bound rows

  enum class Kind { LowerShift, UpperFlip, Split, BothBounds };
  struct VarMap {
    Kind kind;
    std::size_t col = 0, col2 = 0;
    double shift = 0.0;
  };
  std::vector<VarMap> vars;
};

inline StdForm build_std_form(const Problem& p) {
  StdForm f;
  const std::size_t n0 = p.num_vars();
  f.obj_sign = p.sense == Sense::Max ? -1.0 : 1.0;
  f.vars.resize(n0);

  // Columns for original variables.
  std::size_t ncols = 0;
  std::size_t n_bound_rows = 0;
  for (std::size_t j = 0; j < n0; ++j) {
    VarBounds vb = p.bound(j);
    StdForm::VarMap& vm = f.vars[j];
    if (vb.lower && vb.upper) {
      vm.kind = StdForm::Kind::BothBounds;
      vm.col = ncols++;
      vm.shift = *vb.lower;
      ++n_bound_rows;
    } else if (vb.lower) {
      vm.kind = StdForm::Kind::LowerShift;
      vm.col = ncols++;
      vm.shift = *vb.lower;
    } else if (vb.upper) {
      vm.kind = StdForm::Kind::UpperFlip;
      vm.col = ncols++;
      vm.shift = *vb.upper;
    } else {
      vm.kind = StdForm::Kind::Split;
      vm.col = ncols++;
      vm.col2 = ncols++;
    }
  }
  const std::size_t m0 = p.rows.size();
  const std::size_t m = m0 + n_bound_rows;
  // One slack/surplus column per inequality row (bound rows are Le).
  std::size_t n_slacks = n_bound_rows;
  for (const Row& r : p.rows)
    if (r.rel != Rel::Eq) ++n_slacks;

  f.m = m;
  f.n = ncols + n_slacks;
  f.a.assign(m, std::vector<double>(f.n, 0.0));
  f.b.assign(m, 0.0);
  f.c.assign(f.n, 0.0);
  f.row_sign.assign(m, 1.0);
  f.orig_row.assign(m, -1);

  auto emit_var = [&](std::size_t row, std::size_t j, double coeff) {
    const StdForm::VarMap& vm = f.vars[j];
    switch (vm.kind) {
      case StdForm::Kind::LowerShift:
      case StdForm::Kind::BothBounds:
        f.a[row][vm.col] += coeff;
        f.b[row] -= coeff * vm.shift;
        break;
      case StdForm::Kind::UpperFlip:
        f.a[row][vm.col] -= coeff;
        f.b[row] -= coeff * vm.shift;
        break;
      case StdForm::Kind::Split:
        f.a[row][vm.col] += coeff;
        f.a[row][vm.col2] -= coeff;
        break;
    }
  };

  std::size_t slack = ncols;
  for (std::size_t i = 0; i < m0; ++i) {
    const Row& r = p.rows[i];
    f.b[i] = r.b;
    f.orig_row[i] = static_cast<int>(i);
    for (std::size_t j = 0; j < n0; ++j)
      if (r.a[j] != 0.0) emit_var(i, j, r.a[j]);
    if (r.rel == Rel::Le) f.a[i][slack++] = 1.0;
    if (r.rel == Rel::Ge) f.a[i][slack++] = -1.0;
  }
  // Bound rows s_j <= u - l for doubly bounded variables.
  std::size_t brow = m0;
  for (std::size_t j = 0; j < n0; ++j) {
    if (f.vars[j].kind != StdForm::Kind::BothBounds) continue;
    VarBounds vb = p.bound(j);
    f.a[brow][f.vars[j].col] = 1.0;
    f.b[brow] = *vb.upper - *vb.lower;
    f.a[brow][slack++] = 1.0;
    ++brow;
  }

  // Objective (internal minimization).
  for (std::size_t j = 0; j < n0; ++j) {
    const StdForm::VarMap& vm = f.vars[j];
    double cj = f.obj_sign * p.c[j];
    switch (vm.kind) {
      case StdForm::Kind::LowerShift:
      case StdForm::Kind::BothBounds:
        f.c[vm.col] += cj;
        f.c0 += cj * vm.shift;
        break;
      case StdForm::Kind::UpperFlip:
        f.c[vm.col] -= cj;
        f.c0 += cj * vm.shift;
        break;
      case StdForm::Kind::Split:
        f.c[vm.col] += cj;
        f.c[vm.col2] -= cj;
        break;
    }
  }

  // Normalize b >= 0.
  for (std::size_t i = 0; i < m; ++i) {
    if (f.b[i] < 0.0) {
      f.b[i] = -f.b[i];
      f.row_sign[i] = -1.0;
      for (double& v : f.a[i]) v = -v;
    }
  }
  return f;
}

// Dense revised simplex over the standard form. Columns n..n+m-1 are the
// phase-one artificials (identity).
class SimplexCore {
 public:
  SimplexCore(StdForm& f, const Options& opt) : f_(f), opt_(opt) {
    m_ = f_.m;
    n_ = f_.n;
    basis_.resize(m_);
    in_basis_.assign(n_ + m_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
      basis_[i] = static_cast<int>(n_ + i);
      in_basis_[n_ + i] = 1;
    }
    binv_.assign(m_, std::vector<double>(m_, 0.0));
    for (std::size_t i = 0; i < m_; ++i) binv_[i][i] = 1.0;
    xb_ = f_.b;
  }

  // Returns true when an optimum is reached, false on unboundedness
  // (entering column stored in unbounded_col_).
  bool run(const std::vector<double>& cost, bool allow_artificial_cols, long& pivot_counter) {
    int since_refactor = 0;
    for (;;) {
      if (pivot_counter > opt_.max_pivots)
        throw SolverStall("lp: pivot limit exceeded (stalled)");
      // y = cB' * B^-1
      std::vector<double> y(m_, 0.0);
      for (std::size_t i = 0; i < m_; ++i) {
        double cb = cost_of(cost, basis_[i]);
        if (cb == 0.0) continue;
        for (std::size_t k = 0; k < m_; ++k) y[k] += cb * binv_[i][k];
      }
      // Bland: entering = lowest-index column with negative reduced cost.
      const std::size_t ncols = allow_artificial_cols ? n_ + m_ : n_;
      int enter = -1;
      for (std::size_t j = 0; j < ncols; ++j) {
        if (in_basis_[j]) continue;
        double d = cost_of(cost, static_cast<int>(j)) - dot_col(y, static_cast<int>(j));
        if (d < -kDjTol) {
          enter = static_cast<int>(j);
          break;
        }
      }
      if (enter < 0) return true;

      std::vector<double> u = btimes_col(enter);
      // Ratio test with Bland tie-breaking on the leaving basis index.
      int leave = -1;
      double best_ratio = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (u[i] <= kPivotTol) continue;
        double ratio = xb_[i] / u[i];
        if (leave < 0 || ratio < best_ratio - kRatioTie ||
            (ratio <= best_ratio + kRatioTie && basis_[i] < basis_[leave])) {
          leave = static_cast<int>(i);
          best_ratio = ratio;
        }
      }
      if (leave < 0) {
        unbounded_col_ = enter;
        return false;
      }
      pivot(static_cast<std::size_t>(leave), enter, u);
      ++pivot_counter;
      if (++since_refactor >= kRefactorEvery) {
        refactor();
        since_refactor = 0;
      }
    }
  }

  void refactor() {
    // Rebuild B^-1 by Gauss-Jordan with partial pivoting.
    std::vector<std::vector<double>> work(m_, std::vector<double>(2 * m_, 0.0));
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t r = 0; r < m_; ++r) work[r][i] = col_entry(basis_[i], r);
      work[i][m_ + i] = 1.0;
    }
    for (std::size_t col = 0; col < m_; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < m_; ++r)
        if (std::abs(work[r][col]) > std::abs(work[piv][col])) piv = r;
      if (std::abs(work[piv][col]) < 1e-12) throw SolverStall("lp: basis became singular");
      std::swap(work[piv], work[col]);
      double inv = 1.0 / work[col][col];
      for (std::size_t k = 0; k < 2 * m_; ++k) work[col][k] *= inv;
      for (std::size_t r = 0; r < m_; ++r) {
        if (r == col) continue;
        double factor = work[r][col];
        if (factor == 0.0) continue;
        for (std::size_t k = 0; k < 2 * m_; ++k) work[r][k] -= factor * work[col][k];
      }
    }
    for (std::size_t r = 0; r < m_; ++r)
      for (std::size_t k = 0; k < m_; ++k) binv_[r][k] = work[r][m_ + k];
    recompute_xb();
  }

  void recompute_xb() {
    for (std::size_t i = 0; i < m_; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < m_; ++k) acc += binv_[i][k] * f_.b[k];
      xb_[i] = std::max(acc, 0.0);
    }
  }

  double objective(const std::vector<double>& cost) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < m_; ++i) acc += cost_of(cost, basis_[i]) * xb_[i];
    return acc;
  }

  std::vector<double> duals(const std::vector<double>& cost) const {
    std::vector<double> y(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      double cb = cost_of(cost, basis_[i]);
      if (cb == 0.0) continue;
      for (std::size_t k = 0; k < m_; ++k) y[k] += cb * binv_[i][k];
    }
    return y;
  }

  std::vector<double> primal_std() const {
    std::vector<double> s(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= 0 && static_cast<std::size_t>(basis_[i]) < n_)
        s[static_cast<std::size_t>(basis_[i])] = xb_[i];
    return s;
  }

  // Ray for the stored unbounded column: r[enter]=1, r[basis]=-B^-1 A_enter.
  std::vector<double> ray_std() {
    std::vector<double> r(n_, 0.0);
    std::vector<double> u = btimes_col(unbounded_col_);
    r[static_cast<std::size_t>(unbounded_col_)] = 1.0;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= 0 && static_cast<std::size_t>(basis_[i]) < n_)
        r[static_cast<std::size_t>(basis_[i])] -= u[i];
    return r;
  }

  // Pivots out zero-level artificials; returns std row indices that proved
  // linearly dependent (their artificial could not be replaced).
  std::vector<std::size_t> drive_out_artificials(long& pivot_counter) {
    std::vector<std::size_t> redundant;
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < static_cast<int>(n_)) continue;
      int enter = -1;
      for (std::size_t j = 0; j < n_; ++j) {
        if (in_basis_[j]) continue;
        double uij = 0.0;
        for (std::size_t k = 0; k < m_; ++k) uij += binv_[i][k] * col_entry(static_cast<int>(j), k);
        if (std::abs(uij) > 1e-8) {
          enter = static_cast<int>(j);
          break;
        }
      }
      if (enter < 0) {
        redundant.push_back(i);
        continue;
      }
      std::vector<double> u = btimes_col(enter);
      pivot(i, enter, u);
      ++pivot_counter;
    }
    return redundant;
  }

  const std::vector<int>& basis() const { return basis_; }
  int unbounded_col() const { return unbounded_col_; }

 private:
  static constexpr double kDjTol = 1e-9;
  static constexpr double kPivotTol = 1e-10;
  static constexpr double kRatioTie = 1e-12;
  static constexpr int kRefactorEvery = 64;

  double cost_of(const std::vector<double>& cost, int col) const {
    return cost[static_cast<std::size_t>(col)];
  }
  double col_entry(int col, std::size_t row) const {
    if (col < static_cast<int>(n_)) return f_.a[row][static_cast<std::size_t>(col)];
    return static_cast<std::size_t>(col - static_cast<int>(n_)) == row ? 1.0 : 0.0;
  }
  double dot_col(const std::vector<double>& y, int col) const {
    if (col >= static_cast<int>(n_)) return y[static_cast<std::size_t>(col) - n_];
    double acc = 0.0;
    for (std::size_t r = 0; r < m_; ++r) {
      double a = f_.a[r][static_cast<std::size_t>(col)];
      if (a != 0.0) acc += y[r] * a;
    }
    return acc;
  }
  std::vector<double> btimes_col(int col) const {
    std::vector<double> u(m_, 0.0);
    if (col >= static_cast<int>(n_)) {
      std::size_t k = static_cast<std::size_t>(col) - n_;
      for (std::size_t i = 0; i < m_; ++i) u[i] = binv_[i][k];
      return u;
    }
    for (std::size_t i = 0; i < m_; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < m_; ++k) {
        double a = f_.a[k][static_cast<std::size_t>(col)];
        if (a != 0.0) acc += binv_[i][k] * a;
      }
      u[i] = acc;
    }
    return u;
  }

  void pivot(std::size_t r, int enter, const std::vector<double>& u) {
    double inv = 1.0 / u[r];
    for (std::size_t k = 0; k < m_; ++k) binv_[r][k] *= inv;
    xb_[r] *= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || u[i] == 0.0) continue;
      double factor = u[i];
      for (std::size_t k = 0; k < m_; ++k) binv_[i][k] -= factor * binv_[r][k];
      xb_[i] -= factor * xb_[r];
      if (xb_[i] < 0.0 && xb_[i] > -1e-11) xb_[i] = 0.0;
    }
    in_basis_[static_cast<std::size_t>(basis_[r])] = 0;
    in_basis_[static_cast<std::size_t>(enter)] = 1;
    basis_[r] = enter;
  }

  StdForm& f_;
  const Options& opt_;
  std::size_t m_ = 0, n_ = 0;
  std::vector<int> basis_;
  std::vector<char> in_basis_;
  std::vector<std::vector<double>> binv_;
  std::vector<double> xb_;
  int unbounded_col_ = -1;
};

inline std::vector<double> map_primal(const StdForm& f, const std::vector<double>& s) {
  std::vector<double> x(f.vars.size(), 0.0);
  for (std::size_t j = 0; j < f.vars.size(); ++j) {
    const StdForm::VarMap& vm = f.vars[j];
    switch (vm.kind) {
      case StdForm::Kind::LowerShift:
      case StdForm::Kind::BothBounds: x[j] = vm.shift + s[vm.col]; break;
      case StdForm::Kind::UpperFlip: x[j] = vm.shift - s[vm.col]; break;
      case StdForm::Kind::Split: x[j] = s[vm.col] - s[vm.col2]; break;
    }
  }
  return x;
}

inline std::vector<double> map_ray(const StdForm& f, const std::vector<double>& s) {
  std::vector<double> r(f.vars.size(), 0.0);
  for (std::size_t j = 0; j < f.vars.size(); ++j) {
    const StdForm::VarMap& vm = f.vars[j];
    switch (vm.kind) {
      case StdForm::Kind::LowerShift:
      case StdForm::Kind::BothBounds: r[j] = s[vm.col]; break;
      case StdForm::Kind::UpperFlip: r[j] = -s[vm.col]; break;
      case StdForm::Kind::Split: r[j] = s[vm.col] - s[vm.col2]; break;
    }
  }
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// solve: status is always trustworthy; optimal solutions carry row duals,
// infeasible ones a Farkas certificate, unbounded ones an improving ray.
// Deterministic: identical inputs give identical outputs.
// ---------------------------------------------------------------------------
inline Solution solve(const Problem& p, const Options& opt = {}) {
  p.validate();
  Solution sol;
  detail::StdForm f = detail::build_std_form(p);
  detail::SimplexCore core(f, opt);

  // Phase one.
  std::vector<double> phase1_cost(f.n + f.m, 0.0);
  for (std::size_t j = f.n; j < f.n + f.m; ++j) phase1_cost[j] = 1.0;
  bool ok = core.run(phase1_cost, true, sol.stats.phase1_pivots);
  if (!ok) throw SolverStall("lp: phase one reported unbounded (numerical failure)");
  double bscale = 1.0;
  for (double v : f.b) bscale = std::max(bscale, std::abs(v));
  if (core.objective(phase1_cost) > opt.feas_tol * bscale * 100.0) {
    sol.status = Status::Infeasible;
    std::vector<double> y = core.duals(phase1_cost);
    sol.farkas.assign(p.rows.size(), 0.0);
    for (std::size_t i = 0; i < f.m; ++i)
      if (f.orig_row[i] >= 0)
        sol.farkas[static_cast<std::size_t>(f.orig_row[i])] = f.row_sign[i] * y[i];
    return sol;
  }
  core.drive_out_artificials(sol.stats.phase1_pivots);

  // Phase two (artificial columns barred; any left basic sit at level zero).
  std::vector<double> cost(f.n + f.m, 0.0);
  for (std::size_t j = 0; j < f.n; ++j) cost[j] = f.c[j];
  ok = core.run(cost, false, sol.stats.pivots);
  if (!ok) {
    sol.status = Status::Unbounded;
    sol.ray = detail::map_ray(f, core.ray_std());
    return sol;
  }

  core.refactor();  // clean basis inverse before extraction
  std::vector<double> s = core.primal_std();
  sol.primal = detail::map_primal(f, s);
  double internal = core.objective(cost) + f.c0;
  sol.value = f.obj_sign * internal;

  std::vector<double> y = core.duals(cost);
  sol.dual.assign(p.rows.size(), 0.0);
  for (std::size_t i = 0; i < f.m; ++i)
    if (f.orig_row[i] >= 0)
      sol.dual[static_cast<std::size_t>(f.orig_row[i])] =
          f.obj_sign * f.row_sign[i] * y[i];

  sol.residuals = check_certificates(p, sol);
  double scale = bscale;
  for (double v : p.c) scale = std::max(scale, std::abs(v));
  if (sol.residuals.primal > 1e3 * opt.feas_tol * scale ||
      sol.residuals.dual > 1e3 * opt.feas_tol * scale)
    throw SolverStall("lp: certificate residuals too large (numerical failure)");
  return sol;
}

// ---------------------------------------------------------------------------
// Polyhedron {x >= 0 : A x <= b} and brute-force vertex enumeration.
// ---------------------------------------------------------------------------
struct Polyhedron {
  std::vector<std::vector<double>> a;
  std::vector<double> b;

  std::size_t dim() const { return a.empty() ? 0 : a.front().size(); }
  std::size_t num_rows() const { return a.size(); }

  void validate() const {
    for (const auto& row : a)
      if (row.size() != dim()) throw InputError("polyhedron: ragged rows");
    if (b.size() != a.size()) throw InputError("polyhedron: rhs dimension mismatch");
  }
};

inline constexpr std::size_t kVertexEnumMaxVars = 12;
inline constexpr std::size_t kVertexEnumMaxRows = 24;

/// All vertices (basic feasible solutions) of {x >= 0 : Ax <= b}, visited in
/// lexicographic order of the active constraint set and deduplicated at 1e-9.
/// Guardrail: dim <= 12 and rows <= 24, otherwise refuses.
inline std::vector<std::vector<double>> enumerate_vertices(const Polyhedron& poly) {
  poly.validate();
  const std::size_t n = poly.dim();
  const std::size_t m = poly.num_rows();
  if (n == 0) return {};
  if (n > kVertexEnumMaxVars || m > kVertexEnumMaxRows)
    throw InputError("enumerate_vertices: size guardrail exceeded (vars <= 12, rows <= 24)");

  // Constraints: indices 0..m-1 are rows a_i x = b_i, m..m+n-1 are x_j = 0.
  const std::size_t total = m + n;
  std::vector<std::size_t> comb(n);
  for (std::size_t i = 0; i < n; ++i) comb[i] = i;
  std::vector<std::vector<double>> verts;

  auto feasible = [&](const std::vector<double>& x) {
    for (double v : x)
      if (v < -1e-9) return false;
    for (std::size_t i = 0; i < m; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += poly.a[i][j] * x[j];
      if (acc > poly.b[i] + 1e-9 * (1.0 + std::abs(poly.b[i]))) return false;
    }
    return true;
  };

  std::vector<std::vector<double>> mat(n, std::vector<double>(n + 1, 0.0));
  for (;;) {
    // Build the n x n active system.
    for (std::size_t r = 0; r < n; ++r) {
      std::size_t k = comb[r];
      if (k < m) {
        for (std::size_t j = 0; j < n; ++j) mat[r][j] = poly.a[k][j];
        mat[r][n] = poly.b[k];
      } else {
        for (std::size_t j = 0; j < n; ++j) mat[r][j] = 0.0;
        mat[r][k - m] = 1.0;
        mat[r][n] = 0.0;
      }
    }
    // Gaussian elimination with partial pivoting.
    bool singular = false;
    for (std::size_t col = 0; col < n && !singular; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < n; ++r)
        if (std::abs(mat[r][col]) > std::abs(mat[piv][col])) piv = r;
      if (std::abs(mat[piv][col]) < 1e-11) {
        singular = true;
        break;
      }
      std::swap(mat[piv], mat[col]);
      for (std::size_t r = 0; r < n; ++r) {
        if (r == col) continue;
        double factor = mat[r][col] / mat[col][col];
        if (factor == 0.0) continue;
        for (std::size_t j = col; j <= n; ++j) mat[r][j] -= factor * mat[col][j];
      }
    }
    if (!singular) {
      std::vector<double> x(n);
      for (std::size_t j = 0; j < n; ++j) x[j] = mat[j][n] / mat[j][j];
      for (double& v : x)
        if (std::abs(v) < 1e-12) v = 0.0;
      if (feasible(x)) {
        bool dup = false;
        for (const auto& v : verts) {
          double diff = 0.0;
          for (std::size_t j = 0; j < n; ++j) diff = std::max(diff, std::abs(v[j] - x[j]));
          if (diff <= 1e-9) {
            dup = true;
            break;
          }
        }
        if (!dup) verts.push_back(std::move(x));
      }
    }
    // Next lexicographic combination.
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (comb[i] != i + total - n) break;
      if (i == 0) return verts;
    }
    if (comb[i] == i + total - n) return verts;
    ++comb[i];
    for (std::size_t j = i + 1; j < n; ++j) comb[j] = comb[j - 1] + 1;
  }
}

/// Does the Farkas vector y prove {x : rows, bounds} empty?  Checks the row
/// sign conditions and sup_{l<=x<=u} y'Ax < y'b.
inline bool farkas_proves_infeasible(const Problem& p, const std::vector<double>& y,
                                     double tol = 1e-9) {
  if (y.size() != p.rows.size()) return false;
  double yb = 0.0;
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    if (p.rows[i].rel == Rel::Le && y[i] > tol) return false;
    if (p.rows[i].rel == Rel::Ge && y[i] < -tol) return false;
    yb += y[i] * p.rows[i].b;
  }
  double sup = 0.0;
  for (std::size_t j = 0; j < p.num_vars(); ++j) {
    double coeff = 0.0;
    for (std::size_t i = 0; i < p.rows.size(); ++i) coeff += p.rows[i].a[j] * y[i];
    VarBounds vb = p.bound(j);
    if (coeff > tol) {
      if (!vb.upper) return false;  // sup is +inf, nothing proven
      sup += coeff * (*vb.upper);
    } else if (coeff < -tol) {
      if (!vb.lower) return false;
      sup += coeff * (*vb.lower);
    }
  }
  return sup < yb - tol;
}

/// Does r prove unboundedness? Checks that r is a feasible direction and that
/// the objective strictly improves along it.
inline bool ray_proves_unbounded(const Problem& p, const std::vector<double>& r,
                                 double tol = 1e-9) {
  if (r.size() != p.num_vars()) return false;
  double scale = 0.0;
  for (double v : r) scale = std::max(scale, std::abs(v));
  if (scale <= tol) return false;
  for (const Row& row : p.rows) {
    double ar = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) ar += row.a[j] * r[j];
    if (row.rel == Rel::Le && ar > tol) return false;
    if (row.rel == Rel::Ge && ar < -tol) return false;
    if (row.rel == Rel::Eq && std::abs(ar) > tol) return false;
  }
  for (std::size_t j = 0; j < r.size(); ++j) {
    VarBounds vb = p.bound(j);
    if (vb.lower && r[j] < -tol) return false;
    if (vb.upper && r[j] > tol) return false;
  }
  double cr = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) cr += p.c[j] * r[j];
  return p.sense == Sense::Max ? cr > tol : cr < -tol;
}

/// Max of a linear functional over the vertex list (brute-force oracle side).
inline double max_over_vertices(const std::vector<double>& c,
                                const std::vector<std::vector<double>>& verts) {
  if (verts.empty()) throw InputError("max_over_vertices: empty polyhedron");
  double best = -kInf;
  for (const auto& v : verts) {
    double acc = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) acc += c[j] * v[j];
    best = std::max(best, acc);
  }
  return best;
}

}  // namespace dualcone::lp
