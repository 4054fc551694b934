#pragma once

#include <cmath>
#include <numbers>
#include <utility>

#include "sharpent/error.hpp"
#include "sharpent/special_fn.hpp"

namespace sharpent {

/// Dimension and exponents shared by every inequality in the library.
///
/// `q` and `r` are the lower and upper Lebesgue exponents of the
/// Gagliardo-Nirenberg family. Setting r == p selects the single-exponent
/// family (q < p) whose constants converge to the entropy constant.
struct InequalityParams {
  int n = 3;
  double p = 2.0;
  double q = 2.0;
  double r = 2.0;

  double p_star() const { return n * p / (n - p); }
};

struct DerivedExponents {
  double theta = 0.0;
  double alpha = 1.0;
  double p_star = 0.0;
  bool degenerate = false;  // q == r: theta collapses to 0
};

/// Sobolev conjugate np/(n-p).
inline double critical_exponent(int n, double p) {
  if (n < 2) throw DomainError("critical_exponent: n must be >= 2");
  if (!(p > 1.0 && p < n)) throw DomainError("critical_exponent: need 1 < p < n");
  return n * p / (n - p);
}

/// Sharp constant of the Euclidean L^p entropy inequality.
inline double entropy_best_constant(int n, double p) {
  if (n < 2) throw DomainError("entropy_best_constant: n must be >= 2");
  if (!(p > 1.0)) throw DomainError("entropy_best_constant: p must exceed 1");
  const double log_ratio = log_gamma(0.5 * n + 1.0) - log_gamma(n * (p - 1.0) / p + 1.0);
  const double log_value = std::log(p / n) + (p - 1.0) * (std::log(p - 1.0) - 1.0) -
                           0.5 * p * std::log(std::numbers::pi) + (p / n) * log_ratio;
  return std::exp(log_value);
}

/// Sharp Euclidean L^p Sobolev constant (raised to the p-th power); it bounds
/// the entropy constant from above.
inline double sobolev_bound_constant(int n, double p) {
  if (n < 2) throw DomainError("sobolev_bound_constant: n must be >= 2");
  if (!(p > 1.0 && p < n)) throw DomainError("sobolev_bound_constant: need 1 < p < n");
  const double log_ratio = log_gamma(static_cast<double>(n)) + log_gamma(0.5 * n + 1.0) -
                           log_gamma(n / p) - log_gamma(n * (p - 1.0) / p + 1.0);
  const double log_value = -std::log(static_cast<double>(n)) +
                           (p - 1.0) * std::log((p - 1.0) / (n - p)) -
                           0.5 * p * std::log(std::numbers::pi) + (p / n) * log_ratio;
  return std::exp(log_value);
}

/// Interpolation exponent theta, Holder exponent alpha and p*.
///
/// Accepts 1 <= q <= r <= p* (q == r flagged degenerate with theta = 0) and
/// the entropy-limit family r == p with 1 <= q < p.
inline DerivedExponents derived_exponents(const InequalityParams& params) {
  const auto [n, p, q, r] = params;
  const double p_star = critical_exponent(n, p);
  const bool single_family = (r == p) && q < p;
  // Tolerate round-off when r is meant to sit exactly on p*.
  const double upper = p_star * (1.0 + 1e-14);
  if (!(q >= 1.0)) throw DomainError("derived_exponents: q must be >= 1");
  if (!single_family && !(q <= r && r <= upper))
    throw DomainError("derived_exponents: need 1 <= q <= r <= p*");

  DerivedExponents out;
  out.p_star = p_star;
  out.alpha = (n * p - n * q + p * q) / (p * q);
  if (q == r) {
    out.degenerate = true;
    out.theta = 0.0;
    return out;
  }
  out.theta = n * p * (r - q) / (r * (q * (p - n) + n * p));
  return out;
}

/// theta for the r == p family: n(p-q)/(np + pq - nq).
inline double theta_single(int n, double p, double q) {
  return n * (p - q) / (n * p + p * q - n * q);
}

struct ExponentPair {
  double q;
  double r;
};

/// Two-parameter family q = s, r = p(s-1)/(p-1) for s > p.
inline ExponentPair dpd_parameters(double p, double s) {
  if (!(p > 1.0)) throw DomainError("dpd_parameters: p must exceed 1");
  if (!(s > p)) throw DomainError("dpd_parameters: s must exceed p");
  return {s, p * (s - 1.0) / (p - 1.0)};
}

}  // namespace sharpent
