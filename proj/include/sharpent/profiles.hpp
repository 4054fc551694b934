#pragma once

// Radial functions on R^n sampled on a log-uniform grid.
//
// Integrals use the composite trapezoid rule in t = ln r with fourth-order
// Gregory end weights; for integrands that decay at both ends this is
// spectrally accurate, and constants integrate to O(h^4). Derivatives are
// second-order centred differences in t, so every gradient-dependent
// quantity carries a clean h^2 error term that Richardson extrapolation
// removes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <ostream>
#include <span>
#include <vector>

#include "sharpent/constants.hpp"
#include "sharpent/error.hpp"
#include "sharpent/special_fn.hpp"

namespace sharpent {

class RadialGrid {
public:
  RadialGrid(double r_min, double r_max, std::size_t nodes) : r_min_(r_min), r_max_(r_max) {
    detail::require(r_min > 0.0 && r_max > r_min, "RadialGrid: need 0 < r_min < r_max");
    if (nodes < 3) throw GridTooCoarse("RadialGrid: at least 3 nodes required");
    step_ = std::log(r_max / r_min) / static_cast<double>(nodes - 1);
    radii_.resize(nodes);
    weights_.resize(nodes);
    for (std::size_t i = 0; i < nodes; ++i) radii_[i] = r_min * std::exp(step_ * static_cast<double>(i));
    radii_.back() = r_max;

    std::vector<double> factor(nodes, 1.0);
    if (nodes >= 6) {
      constexpr double end[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
      for (std::size_t k = 0; k < 3; ++k) {
        factor[k] = end[k];
        factor[nodes - 1 - k] = end[k];
      }
    } else {
      factor.front() = factor.back() = 0.5;
    }
    for (std::size_t i = 0; i < nodes; ++i) weights_[i] = step_ * radii_[i] * factor[i];
  }

  /// Grid with the same end points and `nodes_per_decade` resolution.
  /// The node count is always odd so the stride-2 subgrid shares both ends.
  static std::shared_ptr<const RadialGrid> with_density(double r_min, double r_max,
                                                        double nodes_per_decade) {
    const double decades = std::log10(r_max / r_min);
    auto intervals = static_cast<std::size_t>(std::ceil(decades * nodes_per_decade));
    intervals += intervals % 2;
    const std::size_t nodes = std::max<std::size_t>(intervals, 4) + 1;
    return std::make_shared<const RadialGrid>(r_min, r_max, nodes);
  }

  /// Same end points, half the log step.
  std::shared_ptr<const RadialGrid> refined() const {
    return std::make_shared<const RadialGrid>(r_min_, r_max_, 2 * size() - 1);
  }

  /// Same node count, all radii multiplied by `factor`.
  std::shared_ptr<const RadialGrid> scaled(double factor) const {
    return std::make_shared<const RadialGrid>(r_min_ * factor, r_max_ * factor, size());
  }

  std::size_t size() const { return radii_.size(); }
  double step() const { return step_; }
  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }
  std::span<const double> radii() const { return radii_; }
  /// dr-weights: sum_i w_i f(r_i) approximates the integral of f over [r_min, r_max].
  std::span<const double> weights() const { return weights_; }

private:
  double r_min_, r_max_, step_ = 0.0;
  std::vector<double> radii_;
  std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Nonnegative radial function on R^n. Immutable after construction.
class RadialProfile {
public:
  RadialProfile(GridPtr grid, std::vector<double> values, int dimension)
      : grid_(std::move(grid)), values_(std::move(values)), n_(dimension) {
    detail::require(grid_ != nullptr, "RadialProfile: null grid");
    detail::require(n_ >= 1, "RadialProfile: dimension must be >= 1");
    detail::require(values_.size() == grid_->size(), "RadialProfile: size mismatch with grid");
    for (double v : values_)
      detail::require(std::isfinite(v) && v >= 0.0, "RadialProfile: values must be finite and >= 0");
    const double area = sphere_area(n_);
    measure_.resize(values_.size());
    const auto r = grid_->radii();
    const auto w = grid_->weights();
    for (std::size_t i = 0; i < values_.size(); ++i)
      measure_[i] = area * w[i] * std::pow(r[i], n_ - 1);
  }

  template <class F>
  static RadialProfile sample(GridPtr grid, int dimension, const F& f) {
    std::vector<double> values(grid->size());
    const auto r = grid->radii();
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = f(r[i]);
    return RadialProfile(std::move(grid), std::move(values), dimension);
  }

  const RadialGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> radii() const { return grid_->radii(); }
  /// Volume weight of node i: |S^{n-1}| r_i^{n-1} w_i.
  std::span<const double> measure() const { return measure_; }
  int dimension() const { return n_; }
  std::size_t size() const { return values_.size(); }

  RadialProfile scaled(double c) const {
    detail::require(c >= 0.0, "RadialProfile::scaled: factor must be >= 0");
    std::vector<double> v(values_);
    for (double& x : v) x *= c;
    return RadialProfile(grid_, std::move(v), n_);
  }

  /// L^p-preserving dilation u_lambda(r) = lambda^{n/p} u(lambda r), exact on
  /// the grid r_i / lambda.
  RadialProfile dilated(double lambda, double p) const {
    detail::require(lambda > 0.0, "RadialProfile::dilated: lambda must be positive");
    std::vector<double> v(values_);
    const double amp = std::pow(lambda, n_ / p);
    for (double& x : v) x *= amp;
    return RadialProfile(grid_->scaled(1.0 / lambda), std::move(v), n_);
  }

private:
  GridPtr grid_;
  std::vector<double> values_;
  std::vector<double> measure_;
  int n_;
};

/// Stretched-exponential extremal a exp(-b r^{p/(p-1)}) with unit L^p norm.
struct ExtremalSpec {
  int n;
  double p;
  double b;
  double a;

  double shape() const { return p / (p - 1.0); }
  double operator()(double r) const { return a * std::exp(-b * std::pow(r, shape())); }
  /// Analytic radial derivative.
  double derivative(double r) const {
    const double s = shape();
    return -a * b * s * std::pow(r, s - 1.0) * std::exp(-b * std::pow(r, s));
  }
};

struct GridOptions {
  double r_min = 1e-6;
  double nodes_per_decade = 1000.0;
  double tail_cutoff = 1e-16;
};

struct ExtremalProfile {
  RadialProfile profile;
  ExtremalSpec spec;
};

// ---------------------------------------------------------------------------
// Quadrature primitives

namespace detail {

/// Second-order derivative du/dr: centred in ln r, one-sided at the ends.
inline std::vector<double> radial_derivative(const RadialProfile& u) {
  const auto v = u.values();
  const auto r = u.radii();
  const std::size_t m = v.size();
  if (m < 3) throw GridTooCoarse("radial_derivative: at least 3 nodes required");
  const double inv2h = 0.5 / u.grid().step();
  std::vector<double> d(m);
  d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) * inv2h / r[0];
  for (std::size_t i = 1; i + 1 < m; ++i) d[i] = (v[i + 1] - v[i - 1]) * inv2h / r[i];
  d[m - 1] = (3.0 * v[m - 1] - 4.0 * v[m - 2] + v[m - 3]) * inv2h / r[m - 1];
  return d;
}

/// Largest radius where u is at least `rel_floor` times its peak.
inline double support_radius(const RadialProfile& u, double rel_floor = 1e-8) {
  const auto v = u.values();
  const double peak = *std::max_element(v.begin(), v.end());
  const auto r = u.radii();
  double radius = r.front();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] >= rel_floor * peak) radius = r[i];
  return radius;
}

inline double xlogx_power(double u, double p) {
  if (u <= 0.0) return 0.0;
  const double up = std::pow(u, p);
  return up > 0.0 ? up * std::log(up) : 0.0;
}

}  // namespace detail

/// Integral of u^p over R^n.
inline double lp_integral(const RadialProfile& u, double p) {
  detail::require(p > 0.0, "lp_integral: p must be positive");
  const auto v = u.values();
  const auto mu = u.measure();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += mu[i] * std::pow(v[i], p);
  return s;
}

inline double lp_norm(const RadialProfile& u, double p) {
  detail::require(p >= 1.0, "lp_norm: p must be >= 1");
  return std::pow(lp_integral(u, p), 1.0 / p);
}

/// Integral of |u'|^p |x|^k over R^n with a finite-difference derivative.
inline double grad_weighted_moment(const RadialProfile& u, double p, int k) {
  detail::require(p >= 1.0, "grad_lp_norm_p: p must be >= 1");
  detail::require(k >= 0, "grad_weighted_moment: k must be >= 0");
  const auto d = detail::radial_derivative(u);
  const auto mu = u.measure();
  const auto r = u.radii();
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) s += mu[i] * std::pow(std::abs(d[i]), p) * std::pow(r[i], k);
  return s;
}

/// Integral of |grad u|^p over R^n.
inline double grad_lp_norm_p(const RadialProfile& u, double p) { return grad_weighted_moment(u, p, 0); }

/// Stride-2 restriction of `u` onto the grid with twice the log step.
inline RadialProfile coarsened(const RadialProfile& u) {
  detail::require(u.size() % 2 == 1 && u.size() >= 5, "coarsened: odd node count >= 5 required");
  const auto v = u.values();
  std::vector<double> half;
  half.reserve(u.size() / 2 + 1);
  for (std::size_t i = 0; i < v.size(); i += 2) half.push_back(v[i]);
  auto grid = std::make_shared<const RadialGrid>(u.grid().r_min(), u.grid().r_max(), half.size());
  return RadialProfile(std::move(grid), std::move(half), u.dimension());
}

/// Gradient integral with the h^2 term removed by Richardson extrapolation
/// against the stride-2 subgrid of the same samples. Grids with an even node
/// count fall back to the plain second-order value.
inline double grad_lp_norm_p_extrapolated(const RadialProfile& u, double p) {
  const double fine = grad_lp_norm_p(u, p);
  if (u.size() % 2 == 0 || u.size() < 5) return fine;
  const double coarse = grad_lp_norm_p(coarsened(u), p);
  return (4.0 * fine - coarse) / 3.0;
}

/// Integral of u^p log(u^p) |x|^k, with 0 log 0 = 0.
inline double entropy_moment(const RadialProfile& u, double p, int k) {
  detail::require(p >= 1.0, "entropy_integral: p must be >= 1");
  const auto v = u.values();
  const auto mu = u.measure();
  const auto r = u.radii();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += mu[i] * detail::xlogx_power(v[i], p) * std::pow(r[i], k);
  return s;
}

inline double entropy_integral(const RadialProfile& u, double p) { return entropy_moment(u, p, 0); }

/// Integral of u^p |x|^k.
inline double weighted_moment(const RadialProfile& u, double p, int k) {
  detail::require(p >= 1.0, "weighted_moment: p must be >= 1");
  detail::require(k >= 0, "weighted_moment: k must be >= 0");
  const auto v = u.values();
  const auto mu = u.measure();
  const auto r = u.radii();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += mu[i] * std::pow(v[i], p) * std::pow(r[i], k);
  return s;
}

/// Divide by the L^p norm.
inline RadialProfile normalized(const RadialProfile& u, double p) {
  const double norm = lp_norm(u, p);
  if (!(norm > 0.0)) throw DegenerateProfile("normalized: zero profile");
  return u.scaled(1.0 / norm);
}

// ---------------------------------------------------------------------------
// Extremal family

/// Amplitude a making a exp(-b r^{p'}) unit in L^p(R^n).
inline double extremal_amplitude(int n, double p, double b) {
  if (!(p > 1.0)) throw DomainError("extremal_profile: p must exceed 1");
  detail::require(b > 0.0, "extremal_profile: b must be positive");
  detail::require(n >= 1, "extremal_profile: n must be >= 1");
  const double s = p / (p - 1.0);
  const double mass = sphere_area(n) * stretched_exp_moment(n - 1.0, s, p * b);
  return std::pow(mass, -1.0 / p);
}

inline ExtremalSpec extremal_spec(int n, double p, double b) {
  return {n, p, b, extremal_amplitude(n, p, b)};
}

/// Radius beyond which the extremal drops below `cutoff`.
inline double extremal_tail_radius(const ExtremalSpec& e, double cutoff) {
  return std::pow(std::log(e.a / cutoff) / e.b, 1.0 / e.shape());
}

inline ExtremalProfile extremal_profile(int n, double p, double b, const GridOptions& opt = {}) {
  const ExtremalSpec spec = extremal_spec(n, p, b);
  const double r_max = extremal_tail_radius(spec, opt.tail_cutoff);
  auto grid = RadialGrid::with_density(opt.r_min, std::max(r_max, 10.0 * opt.r_min), opt.nodes_per_decade);
  return {RadialProfile::sample(std::move(grid), n, spec), spec};
}

// ---------------------------------------------------------------------------
// I/J integrals of the normalized extremal

struct IJValues {
  double I1 = 0.0, I2 = 0.0, J1 = 0.0, J2 = 0.0, J3 = 0.0;
};

struct IJReport {
  IJValues quadrature;   // Richardson-extrapolated grid quadrature
  IJValues closed_form;  // Gamma reduction
  double max_rel_diff = 0.0;
  double richardson_ratio = 0.0;  // successive-difference ratio of I2 over three grids
};

/// Gamma-function reduction of the five extremal integrals.
inline IJValues ij_closed_form(const ExtremalSpec& e) {
  const double s = e.shape();
  const double c = e.p * e.b;
  const double area = sphere_area(e.n);
  const double ap = std::pow(e.a, e.p);
  const double grad_amp = std::pow(e.a * e.b * s, e.p);
  const double log_ap = e.p * std::log(e.a);
  auto moment = [&](double m) { return area * stretched_exp_moment(m, s, c); };
  IJValues v;
  // u^p log u^p = u^p (p ln a - c r^s); |u'|^p = (abs)^p r^s e^{-c r^s}
  v.I1 = log_ap * ap * moment(e.n - 1.0) - c * ap * moment(e.n - 1.0 + s);
  v.I2 = grad_amp * moment(e.n - 1.0 + s);
  v.J1 = ap * moment(e.n + 1.0);
  v.J2 = grad_amp * moment(e.n + 1.0 + s);
  v.J3 = log_ap * v.J1 - c * ap * moment(e.n + 1.0 + s);
  return v;
}

inline IJValues ij_quadrature(const RadialProfile& u, double p) {
  return {entropy_moment(u, p, 0), grad_weighted_moment(u, p, 0), weighted_moment(u, p, 2),
          grad_weighted_moment(u, p, 2), entropy_moment(u, p, 2)};
}

/// Computes I1, I2, J1, J2, J3 for the normalized extremal by two independent
/// routes and throws OracleDisagreement if they differ by more than `rel_tol`.
inline IJReport compute_IJ(int n, double p, double b, const GridOptions& opt = {}, double rel_tol = 1e-8) {
  const auto coarse = extremal_profile(n, p, b, opt);
  const ExtremalSpec& spec = coarse.spec;
  auto fine_grid = coarse.profile.grid().refined();
  auto finer_grid = fine_grid->refined();
  const auto fine = RadialProfile::sample(fine_grid, n, spec);
  const auto finer = RadialProfile::sample(finer_grid, n, spec);

  const IJValues q0 = ij_quadrature(coarse.profile, p);
  const IJValues q1 = ij_quadrature(fine, p);
  const IJValues q2 = ij_quadrature(finer, p);

  auto extrapolate = [](double coarse_value, double fine_value) { return (4.0 * fine_value - coarse_value) / 3.0; };
  IJReport rep;
  rep.quadrature = {extrapolate(q1.I1, q2.I1), extrapolate(q1.I2, q2.I2), extrapolate(q1.J1, q2.J1),
                    extrapolate(q1.J2, q2.J2), extrapolate(q1.J3, q2.J3)};
  rep.closed_form = ij_closed_form(spec);
  rep.richardson_ratio = (q0.I2 - q1.I2) / (q1.I2 - q2.I2);

  auto rel = [](double x, double y) { return std::abs(x - y) / std::max(std::abs(y), 1e-300); };
  const auto& a = rep.quadrature;
  const auto& c = rep.closed_form;
  // I1 crosses zero for some dilations; measure it against the I1 + n/p scale.
  const double i1_scale = std::abs(c.I1) + 1.0;
  rep.max_rel_diff = std::max({std::abs(a.I1 - c.I1) / i1_scale, rel(a.I2, c.I2), rel(a.J1, c.J1),
                               rel(a.J2, c.J2), std::abs(a.J3 - c.J3) / (std::abs(c.J3) + c.J1)});
  if (rep.max_rel_diff > rel_tol)
    throw OracleDisagreement("compute_IJ: quadrature and closed form disagree");
  return rep;
}

/// CSV projection: header "r,u" then one row per node.
inline void write_csv(std::ostream& os, const RadialProfile& u) {
  os << "r,u\n";
  os.precision(17);
  const auto r = u.radii();
  const auto v = u.values();
  for (std::size_t i = 0; i < v.size(); ++i) os << r[i] << ',' << v[i] << '\n';
}

}  // namespace sharpent
