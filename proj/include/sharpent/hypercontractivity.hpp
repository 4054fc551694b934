#pragma once

// Semigroup integrals that turn a log-entropy bound with constants (A, B)
// into hypercontractive and ultracontractive heat-semigroup estimates, and
// the diagonal of the flat-torus heat kernel.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "sharpent/error.hpp"
#include "sharpent/manifold.hpp"
#include "sharpent/special_fn.hpp"

namespace sharpent {

/// Time t and exponent m of P_t : L^{p_from} -> L^{q_to}, obtained from
///   v(s) = lambda s^2/(s-1) - B/A,  phi(x) = (n/2) log(A x + B).
struct HCReport {
  int n = 0;
  double A = 0.0, B = 0.0, lambda = 0.0;
  double p_from = 1.0;
  double q_to = std::numeric_limits<double>::infinity();
  double t = 0.0;
  double m = 0.0;
  double t_closed = 0.0;
  double m_closed = 0.0;
  double t_error = 0.0;  // quadrature error estimates
  double m_error = 0.0;
  double bound_rhs = 0.0;  // log of the ultracontractive bound at t (for the (1, inf) pair)
  bool pass = false;       // both routes agree to 1e-10
};

namespace detail {

inline double reciprocal(double s) { return std::isinf(s) ? 0.0 : 1.0 / s; }

/// Antiderivative of log(sigma (1 - sigma)) with 0 log 0 = 0.
inline double log_bracket_primitive(double x) {
  auto xlogx = [](double y) { return y > 0.0 ? y * std::log(y) : 0.0; };
  return xlogx(x) - x - xlogx(1.0 - x) + (1.0 - x) - 1.0;
}

inline void require_hc_domain(int n, double A, double B, double lambda, double p_from, double q_to) {
  detail::require(n >= 1, "bakry_integrals: n must be >= 1");
  detail::require(A > 0.0 && std::isfinite(A), "bakry_integrals: A must be positive");
  detail::require(B >= 0.0 && std::isfinite(B), "bakry_integrals: B must be nonnegative");
  detail::require(lambda > 0.0 && std::isfinite(lambda), "bakry_integrals: lambda must be positive");
  detail::require(p_from >= 1.0 && q_to > p_from, "bakry_integrals: need 1 <= p_from < q_to");
}

}  // namespace detail

/// Smallest value of v(s) = lambda s^2/(s-1) - B/A on [p_from, q_to]; the
/// unconstrained minimum 4 lambda - B/A sits at s = 2.
inline double min_admissible_v(double A, double B, double lambda, double p_from, double q_to) {
  auto v = [&](double s) { return s == 1.0 ? HUGE_VAL : lambda * s * s / (s - 1.0) - B / A; };
  if (p_from <= 2.0 && q_to >= 2.0) return v(2.0);
  if (q_to < 2.0) return v(q_to);
  return v(p_from);
}

/// Largest t for which the (1, inf) ultracontractive bound is claimed:
/// (n/2)(A/B), equivalently lambda >= B/(4A).
inline double ultracontractive_range(int n, double A, double B) {
  return B > 0.0 ? 0.5 * n * A / B : std::numeric_limits<double>::infinity();
}

/// Log of (4 pi t)^{-n/2} exp((2B/(3A)) t).
inline double ultracontractive_log_bound(int n, double A, double B, double t) {
  return -0.5 * n * std::log(4.0 * std::numbers::pi * t) + (2.0 * B / (3.0 * A)) * t;
}

/// t and m by adaptive quadrature in sigma = 1/s (so q_to = inf maps to 0),
/// cross-checked against their closed forms.
inline HCReport bakry_integrals(int n, double A, double B, double lambda, double p_from, double q_to,
                                const Accuracy& acc = {}) {
  detail::require_hc_domain(n, A, B, lambda, p_from, q_to);
  if (min_admissible_v(A, B, lambda, p_from, q_to) < 0.0)
    throw DomainError("bakry_integrals: v(s) < 0 on the integration range");

  const double lo = detail::reciprocal(q_to);
  const double hi = 1.0 / p_from;
  const double half_n = 0.5 * n;
  // In sigma: s^2/(s-1) = 1/(sigma (1 - sigma)) and ds/(s-1) = -dsigma/(sigma (1-sigma)).
  auto v_of = [&](double sg) { return lambda / (sg * (1.0 - sg)) - B / A; };
  auto dphi = [&](double x) { return half_n * A / (A * x + B); };
  auto phi = [&](double x) { return half_n * std::log(A * x + B); };
  auto t_integrand = [&](double sg) { return dphi(v_of(sg)) / (4.0 * sg * (1.0 - sg)); };
  auto m_integrand = [&](double sg) {
    const double v = v_of(sg);
    return phi(v) - v * dphi(v);
  };

  HCReport rep;
  rep.n = n;
  rep.A = A;
  rep.B = B;
  rep.lambda = lambda;
  rep.p_from = p_from;
  rep.q_to = q_to;
  const auto tq = integrate(t_integrand, lo, hi, acc);
  const auto mq = integrate(m_integrand, lo, hi, acc);
  rep.t = tq.value;
  rep.m = mq.value;
  rep.t_error = tq.error;
  rep.m_error = mq.error;

  // phi'(v(s)) = (n/(2 lambda)) (s-1)/s^2 collapses t; m integrates
  // (n/2)[log(A lambda) - log(sigma(1-sigma)) - 1] + (n B/(2 A lambda)) sigma(1-sigma).
  rep.t_closed = (n / (8.0 * lambda)) * (hi - lo);
  auto cubic = [](double x) { return x * x / 2.0 - x * x * x / 3.0; };
  rep.m_closed = half_n * (std::log(A * lambda) - 1.0) * (hi - lo) -
                 half_n * (detail::log_bracket_primitive(hi) - detail::log_bracket_primitive(lo)) +
                 (n * B / (2.0 * A * lambda)) * (cubic(hi) - cubic(lo));

  const double t_rel = std::abs(rep.t - rep.t_closed) / rep.t_closed;
  const double m_rel = std::abs(rep.m - rep.m_closed) / std::max(1.0, std::abs(rep.m_closed));
  rep.pass = t_rel <= 1e-10 && m_rel <= 1e-10;
  rep.bound_rhs = ultracontractive_log_bound(n, A, B, rep.t_closed);
  return rep;
}

struct UltraRow {
  double lambda = 0.0;
  double t = 0.0;
  double m = 0.0;
  double bound = 0.0;   // log of the claimed L^1 -> L^inf bound at t
  double margin = 0.0;  // bound - m
  bool in_range = true;
  bool pass = true;
};

struct UltraReport {
  double slack_fraction = 0.05;
  double t_max = 0.0;
  double endpoint_margin = 0.0;  // bound - m at t = t_max
  std::vector<UltraRow> rows;
  bool all_pass = true;  // over in-range rows
};

/// Compares m(lambda) for (p_from, q_to) = (1, inf) with the log of the
/// ultracontractive bound at the matching t. Rows with t beyond (n/2)(A/B)
/// are reported as out of range rather than failed.
inline UltraReport ultracontractivity_check(int n, double A, double B, const std::vector<double>& lambda_grid,
                                            double slack_fraction = 0.05) {
  detail::require(B > 0.0, "ultracontractivity_check: B must be positive");
  detail::require(slack_fraction >= 0.0, "ultracontractivity_check: slack must be nonnegative");
  UltraReport rep;
  rep.slack_fraction = slack_fraction;
  rep.t_max = ultracontractive_range(n, A, B);
  const double inf = std::numeric_limits<double>::infinity();
  for (double lambda : lambda_grid) {
    detail::require(lambda > 0.0, "ultracontractivity_check: lambda must be positive");
    UltraRow row;
    row.lambda = lambda;
    row.t = n / (8.0 * lambda);
    if (row.t > rep.t_max * (1.0 + 1e-12)) {
      row.in_range = false;
      row.pass = false;
      rep.rows.push_back(row);
      continue;
    }
    const HCReport hc = bakry_integrals(n, A, B, lambda, 1.0, inf);
    row.t = hc.t;
    row.m = hc.m;
    row.bound = ultracontractive_log_bound(n, A, B, hc.t);
    row.margin = row.bound - row.m;
    row.pass = row.m <= row.bound + slack_fraction * std::abs(row.m);
    rep.all_pass = rep.all_pass && row.pass;
    rep.rows.push_back(row);
  }
  const double lambda_end = B / (4.0 * A);
  const HCReport end = bakry_integrals(n, A, B, lambda_end, 1.0, inf);
  rep.endpoint_margin = ultracontractive_log_bound(n, A, B, end.t) - end.m;
  return rep;
}

struct HeatNorm {
  double value = 0.0;  // k_t(0, 0) = sup-norm of P_t from L^1 to L^inf
  double ratio = 0.0;  // value * (4 pi t)^{n/2}
};

/// Diagonal of the heat kernel on the flat torus (R/LZ)^n via the theta
/// series, switching to its Poisson dual when t is large compared with L^2.
inline HeatNorm torus_heat_norm(int n, double L, double t) {
  detail::require(n >= 1, "torus_heat_norm: n must be >= 1");
  detail::require(L > 0.0 && std::isfinite(L), "torus_heat_norm: L must be positive");
  detail::require(t > 0.0 && std::isfinite(t), "torus_heat_norm: t must be positive");
  constexpr double kCutoff = 1e-18;
  const double a = L * L / (4.0 * t);  // decay rate of the image sum
  const double four_pi_t = 4.0 * std::numbers::pi * t;
  HeatNorm out;
  if (a >= std::numbers::pi) {
    // sum_j exp(-a j^2) = 1 + 2 sum_{j>=1}
    double s = 1.0;
    for (int j = 1;; ++j) {
      const double term = std::exp(-a * j * j);
      if (term < kCutoff) break;
      s += 2.0 * term;
    }
    out.ratio = std::pow(s, n);
    out.value = std::pow(four_pi_t, -0.5 * n) * out.ratio;
  } else {
    // Poisson: sum_j exp(-a j^2) = sqrt(pi/a) sum_k exp(-pi^2 k^2/a)
    const double b = std::numbers::pi * std::numbers::pi / a;
    double s = 1.0;
    for (int k = 1;; ++k) {
      const double term = std::exp(-b * k * k);
      if (term < kCutoff) break;
      s += 2.0 * term;
    }
    out.value = std::pow(s / L, n);
    out.ratio = std::pow(std::sqrt(std::numbers::pi / a) * s, n);
  }
  return out;
}

/// Curvature lower bound max R / (2 n pi e) for the second constant of the
/// p = 2 entropy inequality; a formula only, no claim about attainment.
inline double second_constant_lower_bound(const ManifoldModel& model) {
  return model.scalar_curvature() / (2.0 * model.n * std::numbers::pi * std::numbers::e);
}

}  // namespace sharpent
