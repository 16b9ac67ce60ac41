#pragma once

// Finite state spaces with a compact-exhaustion tag per point, extended-real
// functions bounded from below, finite positive measures, and the pairing
// <f,mu> = sum f*mu. Everything else in the library is phrased over these.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dualcone {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Malformed user input: bad file, mismatched spaces, out-of-range sizes.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The LP engine exceeded its pivot budget without reaching a verdict.
struct SolverStall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// ExtReal: finite reals plus +inf. -inf and NaN are never representable.
// Arithmetic conventions: 0*(+inf)=0, c*(+inf)=+inf for c>0, a+(+inf)=+inf.
// ---------------------------------------------------------------------------
class ExtReal {
 public:
  ExtReal() : v_(0.0) {}
  static ExtReal finite(double x) {
    if (!std::isfinite(x)) throw InputError("ExtReal::finite: value not finite");
    return ExtReal(x);
  }
  static ExtReal infinity() { return ExtReal(kInf); }
  static ExtReal from_double(double x) {
    if (std::isnan(x) || x == -kInf)
      throw InputError("ExtReal: -inf and NaN are not representable");
    return ExtReal(x);
  }

  bool is_finite() const { return std::isfinite(v_); }
  bool is_infinite() const { return !is_finite(); }
  /// Finite payload; throws on +inf.
  double finite_value() const {
    if (!is_finite()) throw InputError("ExtReal: expected a finite value");
    return v_;
  }
  /// Raw double, +inf allowed.
  double as_double() const { return v_; }

  friend ExtReal operator+(ExtReal a, ExtReal b) { return ExtReal(a.v_ + b.v_); }
  /// c*x with c >= 0 and the 0*(+inf)=0 convention.
  friend ExtReal scale_nonneg(double c, ExtReal x) {
    if (c < 0.0 || !std::isfinite(c)) throw InputError("scale_nonneg: c must be finite and >= 0");
    if (c == 0.0) return ExtReal(0.0);
    return ExtReal(c * x.v_);
  }
  friend bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
  friend bool operator<(ExtReal a, ExtReal b) { return a.v_ < b.v_; }
  friend bool operator<=(ExtReal a, ExtReal b) { return a.v_ <= b.v_; }

 private:
  explicit ExtReal(double v) : v_(v) {}
  double v_;
};

// ---------------------------------------------------------------------------
// FiniteSpace: ordered point labels, one exhaustion level per point (the
// smallest n with omega in K_n), optional real coordinates.
// ---------------------------------------------------------------------------
class FiniteSpace {
 public:
  FiniteSpace(std::vector<std::string> points, std::vector<int> levels,
              std::optional<std::vector<double>> coords = std::nullopt)
      : points_(std::move(points)), levels_(std::move(levels)), coords_(std::move(coords)) {
    validate();
  }

  std::size_t size() const { return points_.size(); }
  const std::vector<std::string>& points() const { return points_; }
  const std::string& label(std::size_t i) const { return points_[i]; }
  int level(std::size_t i) const { return levels_[i]; }
  const std::vector<int>& levels() const { return levels_; }
  int max_level() const { return max_level_; }
  bool is_compact() const { return max_level_ == 1; }
  bool has_coords() const { return coords_.has_value(); }
  double coord(std::size_t i) const {
    if (!coords_) throw InputError("space has no coordinates");
    return (*coords_)[i];
  }
  const std::optional<std::vector<double>>& coords() const { return coords_; }

  friend bool operator==(const FiniteSpace& a, const FiniteSpace& b) {
    return a.points_ == b.points_ && a.levels_ == b.levels_ && a.coords_ == b.coords_;
  }

 private:
  void validate() {
    if (points_.empty()) throw InputError("space must have at least one point");
    if (levels_.size() != points_.size())
      throw InputError("space: levels must align with points");
    std::vector<std::string> sorted = points_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InputError("space: point labels must be unique");
    max_level_ = 0;
    for (int l : levels_) {
      if (l < 1) throw InputError("space: exhaustion levels must be >= 1");
      max_level_ = std::max(max_level_, l);
    }
    // K_n strictly exhausting: every level 1..max attained.
    std::vector<char> seen(static_cast<std::size_t>(max_level_), 0);
    for (int l : levels_) seen[static_cast<std::size_t>(l - 1)] = 1;
    for (char s : seen)
      if (!s) throw InputError("space: every level from 1 to max(level) must be attained");
    if (coords_) {
      if (coords_->size() != points_.size())
        throw InputError("space: coords must align with points");
      for (double c : *coords_)
        if (!std::isfinite(c)) throw InputError("space: coords must be finite");
    }
  }

  std::vector<std::string> points_;
  std::vector<int> levels_;
  std::optional<std::vector<double>> coords_;
  int max_level_ = 1;
};

using SpacePtr = std::shared_ptr<const FiniteSpace>;

inline SpacePtr make_space(std::vector<std::string> points, std::vector<int> levels,
                           std::optional<std::vector<double>> coords = std::nullopt) {
  return std::make_shared<const FiniteSpace>(std::move(points), std::move(levels),
                                             std::move(coords));
}

inline bool same_space(const SpacePtr& a, const SpacePtr& b) {
  return a == b || (a && b && *a == *b);
}

// ---------------------------------------------------------------------------
// FuncOnSpace: one value per point in R u {+inf}, bounded below; the cached
// lower bound is the min over finite values (0 when every value is +inf).
// Immutable after construction.
// ---------------------------------------------------------------------------
class FuncOnSpace {
 public:
  FuncOnSpace(SpacePtr space, std::vector<double> values)
      : space_(std::move(space)), values_(std::move(values)) {
    if (!space_) throw InputError("function: null space");
    if (values_.size() != space_->size())
      throw InputError("function: values must align with the space's points");
    bool any_finite = false;
    lower_bound_ = 0.0;
    for (double v : values_) {
      if (std::isnan(v) || v == -kInf)
        throw InputError("function values must be finite or +inf");
      if (std::isfinite(v)) {
        lower_bound_ = any_finite ? std::min(lower_bound_, v) : v;
        any_finite = true;
      }
    }
    if (!any_finite) lower_bound_ = 0.0;
  }

  static FuncOnSpace constant(SpacePtr space, double c) {
    std::size_t n = space->size();
    return FuncOnSpace(std::move(space), std::vector<double>(n, c));
  }

  const SpacePtr& space() const { return space_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  double lower_bound() const { return lower_bound_; }
  bool is_nonneg() const { return lower_bound_ >= 0.0; }
  bool is_finite_everywhere() const {
    for (double v : values_)
      if (!std::isfinite(v)) return false;
    return true;
  }
  std::vector<std::size_t> infinite_points() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (!std::isfinite(values_[i])) out.push_back(i);
    return out;
  }

 private:
  SpacePtr space_;
  std::vector<double> values_;
  double lower_bound_;
};

// ---------------------------------------------------------------------------
// MeasureOnSpace: nonnegative finite weights; total mass summed left-to-right
// in point order (determinism contract). Immutable after construction.
// ---------------------------------------------------------------------------
class MeasureOnSpace {
 public:
  MeasureOnSpace(SpacePtr space, std::vector<double> weights)
      : space_(std::move(space)), weights_(std::move(weights)) {
    if (!space_) throw InputError("measure: null space");
    if (weights_.size() != space_->size())
      throw InputError("measure: weights must align with the space's points");
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      if (!std::isfinite(weights_[i]))
        throw InputError("measure: weight at index " + std::to_string(i) + " is not finite");
      if (weights_[i] < 0.0)
        throw InputError("measure: negative weight at index " + std::to_string(i));
    }
    total_mass_ = 0.0;
    for (double w : weights_) total_mass_ += w;
  }

  const SpacePtr& space() const { return space_; }
  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  double total_mass() const { return total_mass_; }

 private:
  SpacePtr space_;
  std::vector<double> weights_;
  double total_mass_;
};

// ---------------------------------------------------------------------------
// ProductSpace: left x right, points enumerated row-major (left index outer),
// exhaustion level of a pair = max of the component levels.
// ---------------------------------------------------------------------------
class ProductSpace {
 public:
  ProductSpace(SpacePtr left, SpacePtr right) : left_(std::move(left)), right_(std::move(right)) {
    if (!left_ || !right_) throw InputError("product space: null factor");
    std::vector<std::string> labels;
    std::vector<int> levels;
    labels.reserve(left_->size() * right_->size());
    levels.reserve(left_->size() * right_->size());
    for (std::size_t i = 0; i < left_->size(); ++i)
      for (std::size_t j = 0; j < right_->size(); ++j) {
        labels.push_back("(" + left_->label(i) + "," + right_->label(j) + ")");
        levels.push_back(std::max(left_->level(i), right_->level(j)));
      }
    space_ = make_space(std::move(labels), std::move(levels));
  }

  const SpacePtr& left() const { return left_; }
  const SpacePtr& right() const { return right_; }
  const SpacePtr& space() const { return space_; }
  std::size_t size() const { return space_->size(); }
  std::size_t index(std::size_t i, std::size_t j) const { return i * right_->size() + j; }
  std::size_t left_index(std::size_t p) const { return p / right_->size(); }
  std::size_t right_index(std::size_t p) const { return p % right_->size(); }

 private:
  SpacePtr left_;
  SpacePtr right_;
  SpacePtr space_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// <f,mu> = sum_omega f(omega)*mu(omega), left-to-right in point order.
/// +inf exactly when some point has f = +inf and mu > 0 (0*(+inf) = 0).
inline ExtReal pairing(const FuncOnSpace& f, const MeasureOnSpace& mu) {
  if (!same_space(f.space(), mu.space())) throw InputError("pairing: space mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double w = mu[i];
    if (w == 0.0) continue;
    if (!std::isfinite(f[i])) return ExtReal::infinity();
    acc += f[i] * w;
  }
  return ExtReal::finite(acc);
}

/// gamma(omega) = exhaustion_level(omega) - 1; {gamma <= c} = K_{floor(c)+1}.
inline FuncOnSpace gamma(const SpacePtr& space) {
  std::vector<double> v(space->size());
  for (std::size_t i = 0; i < space->size(); ++i) v[i] = static_cast<double>(space->level(i) - 1);
  return FuncOnSpace(space, std::move(v));
}

/// (h1 ⊕ h2)(w1,w2) = h1(w1) + h2(w2) on the product, row-major.
inline FuncOnSpace oplus(const ProductSpace& prod, const FuncOnSpace& h1, const FuncOnSpace& h2) {
  if (!same_space(h1.space(), prod.left()) || !same_space(h2.space(), prod.right()))
    throw InputError("oplus: factor mismatch");
  std::vector<double> v(prod.size());
  for (std::size_t i = 0; i < prod.left()->size(); ++i)
    for (std::size_t j = 0; j < prod.right()->size(); ++j)
      v[prod.index(i, j)] = h1[i] + h2[j];
  return FuncOnSpace(prod.space(), std::move(v));
}

/// Marginals mu1(x) = sum_y mu(x,y), mu2(y) = sum_x mu(x,y).
inline std::pair<MeasureOnSpace, MeasureOnSpace> marginals(const ProductSpace& prod,
                                                           const MeasureOnSpace& mu) {
  if (!same_space(mu.space(), prod.space()))
    throw InputError("marginals: measure does not live on the product space");
  std::vector<double> m1(prod.left()->size(), 0.0);
  std::vector<double> m2(prod.right()->size(), 0.0);
  for (std::size_t i = 0; i < prod.left()->size(); ++i)
    for (std::size_t j = 0; j < prod.right()->size(); ++j) m1[i] += mu[prod.index(i, j)];
  for (std::size_t j = 0; j < prod.right()->size(); ++j)
    for (std::size_t i = 0; i < prod.left()->size(); ++i) m2[j] += mu[prod.index(i, j)];
  return {MeasureOnSpace(prod.left(), std::move(m1)), MeasureOnSpace(prod.right(), std::move(m2))};
}

}  // namespace dualcone
