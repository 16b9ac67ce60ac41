#pragma once

// Seeded RNG for the verification suites. std::mt19937_64 is fully specified
// by the standard and the mappings below avoid std::uniform_*_distribution
// (implementation-defined), so identical seeds give identical instances on
// every platform.

#include <cstdint>
#include <random>
#include <vector>

namespace dualcone {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  /// Uniform in [0,1) with 53 bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * unit(); }

  /// Uniform integer in [a, b] inclusive.
  int uniform_int(int a, int b) {
    return a + static_cast<int>(next() % static_cast<std::uint64_t>(b - a + 1));
  }

  bool chance(double p) { return unit() < p; }

  /// Random probability vector of length n (normalized positive draws).
  std::vector<double> simplex_point(std::size_t n) {
    std::vector<double> w(n);
    double total = 0.0;
    for (double& x : w) {
      x = 0.05 + unit();
      total += x;
    }
    for (double& x : w) x /= total;
    return w;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace dualcone
