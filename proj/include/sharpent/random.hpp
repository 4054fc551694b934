#pragma once

// Seeded generators for property tests and CLI sampling. Uniforms are built
// from raw mt19937_64 output so sequences match across standard libraries.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "sharpent/profiles.hpp"

namespace sharpent {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Log-uniform on [lo, hi], lo > 0.
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  std::uint64_t next() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

/// exp(-r^s1) + w exp(-b r^s2): positive, smooth away from the origin,
/// super-polynomially decaying.
struct TrialMixture {
  double s1 = 2.0;
  double s2 = 2.0;
  double weight = 0.0;
  double rate = 1.0;

  double operator()(double r) const {
    return std::exp(-std::pow(r, s1)) + weight * std::exp(-rate * std::pow(r, s2));
  }
  std::string describe() const {
    return "mixture(s1=" + std::to_string(s1) + ",s2=" + std::to_string(s2) + ",w=" + std::to_string(weight) +
           ",b=" + std::to_string(rate) + ")";
  }
};

inline TrialMixture random_mixture(Rng& rng) {
  TrialMixture m;
  m.s1 = rng.uniform(1.0, 4.0);
  m.s2 = rng.uniform(1.0, 4.0);
  m.weight = rng.uniform(0.0, 1.0);
  m.rate = rng.uniform(0.2, 5.2);
  return m;
}

/// Samples a mixture on [1e-6, r_max] where both terms have decayed below 1e-26.
inline RadialProfile sample_mixture(const TrialMixture& m, int n, double nodes_per_decade = 1000.0) {
  const double tail = 60.0;
  const double r1 = std::pow(tail, 1.0 / m.s1);
  const double r2 = std::pow(tail / m.rate, 1.0 / m.s2);
  auto grid = RadialGrid::with_density(1e-6, std::max({r1, r2, 1.0}), nodes_per_decade);
  return RadialProfile::sample(std::move(grid), n, m);
}

}  // namespace sharpent
