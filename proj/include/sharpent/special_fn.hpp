#pragma once

// Gamma-family special functions, closed-form radial moments and an adaptive
// Gauss-Kronrod integrator used as an oracle throughout the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include "sharpent/error.hpp"

namespace sharpent {

struct Accuracy {
  double rel_tol = 1e-12;
  double abs_tol = 1e-15;
  int max_subdivisions = 2000;

  void validate() const {
    detail::require(rel_tol > 0.0, "Accuracy: rel_tol must be positive");
    detail::require(abs_tol > 0.0, "Accuracy: abs_tol must be positive");
    detail::require(max_subdivisions >= 1, "Accuracy: max_subdivisions must be >= 1");
  }
};

/// ln Gamma(x) for x > 0.
inline double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
  return std::lgamma(x);
}

/// Surface area of the unit (n-1)-sphere in R^n: 2 pi^{n/2} / Gamma(n/2).
inline double sphere_area(int n) {
  if (n < 1) throw DomainError("sphere_area: dimension must be >= 1");
  const double half = 0.5 * n;
  return 2.0 * std::exp(half * std::log(std::numbers::pi) - log_gamma(half));
}

/// Integral over (0, inf) of r^m exp(-c r^s) dr = Gamma((m+1)/s) / (s c^{(m+1)/s}).
inline double stretched_exp_moment(double m, double s, double c) {
  if (!(m >= 0.0)) throw DomainError("stretched_exp_moment: m must be >= 0");
  if (!(s > 0.0)) throw DomainError("stretched_exp_moment: s must be positive");
  if (!(c > 0.0)) throw DomainError("stretched_exp_moment: c must be positive");
  const double k = (m + 1.0) / s;
  return std::exp(log_gamma(k) - std::log(s) - k * std::log(c));
}

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

namespace detail {

// Kronrod 15-point nodes (symmetric; index 7 is the centre) and weights, with
// the embedded 7-point Gauss weights on the odd Kronrod nodes.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(const F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(centre - dx) + f(centre + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Globally adaptive G7/K15 quadrature on a finite interval.
/// Nodes never touch the endpoints, so integrable endpoint singularities are
/// tolerated. Throws NonConvergence when max_subdivisions is exhausted.
template <class F>
QuadratureResult integrate(const F& f, double a, double b, const Accuracy& acc = {}) {
  acc.validate();
  if (a == b) return {};
  std::priority_queue<detail::Segment> heap;
  auto first = detail::gk15(f, a, b);
  double total = first.value;
  double err = first.error;
  heap.push(first);
  int pieces = 1;
  while (err > std::max(acc.abs_tol, acc.rel_tol * std::abs(total))) {
    if (pieces >= acc.max_subdivisions)
      throw NonConvergence("integrate: subdivision budget exhausted");
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::gk15(f, worst.a, mid);
    auto right = detail::gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++pieces;
  }
  // Re-sum to shed the drift of incremental updates.
  double value = 0.0, error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return {value, error, pieces};
}

/// Integral over (0, inf) via r = t / (1 - t).
template <class F>
QuadratureResult integrate_semi_infinite(const F& f, const Accuracy& acc = {}) {
  auto mapped = [&f](double t) {
    const double one_minus = 1.0 - t;
    const double r = t / one_minus;
    const double jac = 1.0 / (one_minus * one_minus);
    const double v = f(r);
    return v == 0.0 ? 0.0 : v * jac;
  };
  return integrate(mapped, 0.0, 1.0, acc);
}

}  // namespace sharpent
