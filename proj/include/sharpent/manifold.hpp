#pragma once

// Homogeneous model manifolds, geodesic bubbles built from the Euclidean
// extremal, curvature expansions of their integrals and a numerical witness
// for the failure of entropy inequalities with a sub-optimal leading constant.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sharpent/constants.hpp"
#include "sharpent/error.hpp"
#include "sharpent/profiles.hpp"
#include "sharpent/special_fn.hpp"

namespace sharpent {

enum class ManifoldKind { sphere, torus };

inline const char* to_string(ManifoldKind k) { return k == ManifoldKind::sphere ? "sphere" : "torus"; }
inline std::ostream& operator<<(std::ostream& os, ManifoldKind k) { return os << to_string(k); }

/// Round sphere of radius `scale` or flat cubic torus of side `scale`.
struct ManifoldModel {
  ManifoldKind kind = ManifoldKind::sphere;
  int n = 3;
  double scale = 1.0;

  static ManifoldModel sphere(int n, double radius = 1.0) { return make(ManifoldKind::sphere, n, radius); }
  static ManifoldModel torus(int n, double side = 2.0 * std::numbers::pi) {
    return make(ManifoldKind::torus, n, side);
  }
  static ManifoldModel make(ManifoldKind kind, int n, double scale) {
    ManifoldModel m{kind, n, scale};
    m.validate();
    return m;
  }

  void validate() const {
    detail::require(n >= 2, "ManifoldModel: dimension must be >= 2");
    detail::require(scale > 0.0 && std::isfinite(scale), "ManifoldModel: scale must be positive");
  }

  double scalar_curvature() const {
    return kind == ManifoldKind::sphere ? n * (n - 1.0) / (scale * scale) : 0.0;
  }
  double volume() const {
    return kind == ManifoldKind::sphere ? sphere_area(n + 1) * std::pow(scale, n) : std::pow(scale, n);
  }
  double injectivity_radius() const {
    return kind == ManifoldKind::sphere ? std::numbers::pi * scale : 0.5 * scale;
  }
  double default_delta() const { return std::min(1.0, 0.5 * injectivity_radius()); }
};

/// Exact density of the volume element in geodesic polar coordinates,
/// relative to the Euclidean r^{n-1} dr dS.
inline double geodesic_density(const ManifoldModel& m, double r) {
  detail::require(r >= 0.0, "geodesic_density: r must be nonnegative");
  if (m.kind == ManifoldKind::torus) return 1.0;
  if (!(r < std::numbers::pi * m.scale)) throw DomainError("geodesic_density: radius reaches the cut locus");
  if (r == 0.0) return 1.0;
  const double x = r / m.scale;
  const double ratio = x < 1e-4 ? 1.0 - x * x / 6.0 + x * x * x * x / 120.0 : std::sin(x) / x;
  return std::pow(ratio, m.n - 1);
}

/// Second-order Taylor coefficient of geodesic_density in r.
inline double geodesic_density_r2(const ManifoldModel& m) { return -m.scalar_curvature() / (6.0 * m.n); }

/// eta(r) ε^{-n/p} u0(r/ε) centred at a pole (sphere) or the origin (torus).
struct BubbleSpec {
  ManifoldModel model;
  double epsilon = 0.05;
  double delta = 1.0;
  double p = 2.0;
  ExtremalSpec base{3, 2.0, 1.0, 1.0};

  static BubbleSpec make(const ManifoldModel& model, double p, double epsilon,
                         std::optional<double> delta = std::nullopt, double b = 1.0) {
    BubbleSpec s{model, epsilon, delta.value_or(model.default_delta()), p, extremal_spec(model.n, p, b)};
    s.validate();
    return s;
  }

  void validate() const {
    model.validate();
    detail::require(p > 1.0 && p < model.n, "BubbleSpec: need 1 < p < n");
    detail::require(base.n == model.n && base.p == p, "BubbleSpec: extremal does not match model");
    detail::require(epsilon > 0.0 && 2.0 * epsilon < delta, "BubbleSpec: need 0 < 2 eps < delta");
    detail::require(delta < model.injectivity_radius(), "BubbleSpec: delta must stay inside the injectivity radius");
  }

  /// C^1 cutoff: 1 on [0, δ/2], cubic Hermite step to 0 at δ.
  double eta(double r) const {
    const double x = (r - 0.5 * delta) / (0.5 * delta);
    if (x <= 0.0) return 1.0;
    if (x >= 1.0) return 0.0;
    return 1.0 - x * x * (3.0 - 2.0 * x);
  }
  double eta_slope(double r) const {
    const double x = (r - 0.5 * delta) / (0.5 * delta);
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -6.0 * x * (1.0 - x) / (0.5 * delta);
  }
  double amplitude() const { return std::pow(epsilon, -model.n / p); }
  double operator()(double r) const { return eta(r) * amplitude() * base(r / epsilon); }
  double derivative(double r) const {
    const double x = r / epsilon;
    return amplitude() * (eta_slope(r) * base(x) + eta(r) * base.derivative(x) / epsilon);
  }
};

struct BubbleIntegrals {
  double mass_p = 0.0;   // int u^p
  double entropy = 0.0;  // int u^p log u^p
  double grad_p = 0.0;   // int |grad u|^p
};

struct BubbleQuadrature {
  double nodes_per_decade = 400.0;
  double inner_radius_factor = 1e-6;  // integration starts at this multiple of ε
};

/// The three bubble integrals by log-grid quadrature in geodesic polar
/// coordinates against the exact density.
inline BubbleIntegrals bubble_integrals(const BubbleSpec& spec, const BubbleQuadrature& quad = {}) {
  spec.validate();
  if (quad.nodes_per_decade < 50.0) throw GridTooCoarse("bubble_integrals: at least 50 nodes per decade required");
  detail::require(quad.inner_radius_factor > 0.0 && quad.inner_radius_factor < 1e-2,
                  "bubble_integrals: inner radius factor must lie in (0, 1e-2)");
  const int n = spec.model.n;
  const double p = spec.p;
  const auto grid = RadialGrid::with_density(quad.inner_radius_factor * spec.epsilon, spec.delta, quad.nodes_per_decade);
  const double area = sphere_area(n);
  const auto r = grid->radii();
  const auto w = grid->weights();
  BubbleIntegrals out;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double mu = area * std::pow(r[i], n - 1) * geodesic_density(spec.model, r[i]) * w[i];
    const double u = spec(r[i]);
    if (u > 0.0) {
      out.mass_p += mu * std::pow(u, p);
      out.entropy += mu * detail::xlogx_power(u, p);
    }
    out.grad_p += mu * std::pow(std::abs(spec.derivative(r[i])), p);
  }
  return out;
}

/// Geometric ε grid from `largest` down to `smallest` with ratio 2^{-1/2}.
inline std::vector<double> default_eps_grid(double delta, double largest_factor = 0.1, double smallest_factor = 0.01) {
  detail::require(delta > 0.0 && largest_factor > smallest_factor && smallest_factor > 0.0,
                  "default_eps_grid: need delta > 0 and largest > smallest > 0");
  std::vector<double> eps;
  const double ratio = std::sqrt(0.5);
  for (double e = largest_factor * delta; e >= smallest_factor * delta * (1.0 - 1e-12); e *= ratio) eps.push_back(e);
  return eps;
}

struct FittedCoefficient {
  double value = 0.0;
  double std_error = 0.0;
  double target = 0.0;

  /// |value - target| / |target|, or |value| when the target vanishes.
  double rel_deviation() const {
    return target != 0.0 ? std::abs(value - target) / std::abs(target) : std::abs(value);
  }
  bool within_sigma(double k) const { return std::abs(value - target) <= k * std_error; }
};

struct ExpansionReport {
  ManifoldModel model;
  double p = 2.0;
  double b = 1.0;
  double delta = 1.0;
  std::vector<double> eps_grid;
  std::vector<BubbleIntegrals> values;
  IJValues ij;
  FittedCoefficient mass_eps2;        // mass - 1
  FittedCoefficient grad_eps2;        // ε^p grad - I2
  FittedCoefficient entropy_eps2;     // entropy - I1 + n log ε
  FittedCoefficient entropy_eps2_log;
  double mass_fit_rms = 0.0;
  double grad_fit_rms = 0.0;
  double entropy_fit_rms = 0.0;
  double window_min = 0.0;
  double window_max = 0.0;
  std::string warning;
};

namespace detail {

struct LinearFit {
  Eigen::VectorXd coef;
  Eigen::VectorXd std_error;
  double rms = 0.0;
};

/// Least squares on column-scaled data. The noise variance is floored at
/// `noise_floor`^2 so that exact data still yields meaningful error bars.
inline LinearFit least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double noise_floor) {
  const Eigen::Index m = X.rows(), k = X.cols();
  detail::require(m > k, "least_squares: need more points than unknowns");
  Eigen::VectorXd colscale(k);
  Eigen::MatrixXd Xs = X;
  for (Eigen::Index j = 0; j < k; ++j) {
    colscale(j) = X.col(j).norm();
    if (colscale(j) == 0.0) colscale(j) = 1.0;
    Xs.col(j) /= colscale(j);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xs);
  const Eigen::VectorXd cs = qr.solve(y);
  const Eigen::VectorXd resid = y - Xs * cs;
  const double rss = resid.squaredNorm();
  const double sigma2 = std::max(rss / static_cast<double>(m - k), noise_floor * noise_floor);
  const Eigen::MatrixXd cov = sigma2 * (Xs.transpose() * Xs).inverse();
  LinearFit out;
  out.coef = cs.cwiseQuotient(colscale);
  out.std_error = cov.diagonal().cwiseSqrt().cwiseQuotient(colscale);
  out.rms = std::sqrt(rss / static_cast<double>(m));
  return out;
}

}  // namespace detail

struct ExpansionOptions {
  double b = 1.0;
  std::optional<double> delta;
  BubbleQuadrature quadrature;
  double noise_floor = 1e-13;  // per-point quadrature noise, relative to the leading term
};

/// Fits the curvature coefficients of the bubble integrals over `eps_grid`
/// (strictly decreasing, within [δ/100, δ/10]) and compares them with the
/// closed-form targets built from the extremal moments and R.
inline ExpansionReport fit_expansion(const ManifoldModel& model, double p, std::vector<double> eps_grid,
                                     const ExpansionOptions& opt = {}) {
  model.validate();
  const double delta = opt.delta.value_or(model.default_delta());
  if (eps_grid.empty()) eps_grid = default_eps_grid(delta);
  detail::require(eps_grid.size() >= 5, "fit_expansion: need at least 5 eps values");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    detail::require(eps_grid[i] >= 1e-2 * delta * (1.0 - 1e-9) && eps_grid[i] <= 1e-1 * delta * (1.0 + 1e-9),
                    "fit_expansion: eps must lie in [delta/100, delta/10]");
    if (i > 0) detail::require(eps_grid[i] < eps_grid[i - 1], "fit_expansion: eps_grid must be strictly decreasing");
  }

  ExpansionReport rep;
  rep.model = model;
  rep.p = p;
  rep.b = opt.b;
  rep.delta = delta;
  rep.eps_grid = eps_grid;
  rep.window_max = eps_grid.front();
  rep.window_min = eps_grid.back();
  if (rep.window_max / rep.window_min < std::sqrt(10.0))
    rep.warning = "ill-conditioned fit: eps grid spans less than half a decade";

  const ExtremalSpec base = extremal_spec(model.n, p, opt.b);
  rep.ij = ij_closed_form(base);
  const int n = model.n;
  const auto m = static_cast<Eigen::Index>(eps_grid.size());
  Eigen::MatrixXd X2(m, 2), X4(m, 4);
  Eigen::VectorXd y_mass(m), y_grad(m), y_ent(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double e = eps_grid[static_cast<std::size_t>(i)];
    BubbleSpec spec{model, e, delta, p, base};
    const BubbleIntegrals v = bubble_integrals(spec, opt.quadrature);
    rep.values.push_back(v);
    const double e2 = e * e, le = std::log(e);
    X2(i, 0) = e2;
    X2(i, 1) = e2 * e2;
    X4(i, 0) = e2;
    X4(i, 1) = e2 * le;
    X4(i, 2) = e2 * e2;
    X4(i, 3) = e2 * e2 * le;
    y_mass(i) = v.mass_p - 1.0;
    y_grad(i) = std::pow(e, p) * v.grad_p - rep.ij.I2;
    y_ent(i) = v.entropy - rep.ij.I1 + n * le;
  }

  const double floor = opt.noise_floor;
  const auto fm = detail::least_squares(X2, y_mass, floor);
  const auto fg = detail::least_squares(X2, y_grad, floor * std::max(1.0, rep.ij.I2));
  const auto fe = detail::least_squares(X4, y_ent, floor * std::max(1.0, std::abs(rep.ij.I1) + n * std::abs(std::log(rep.window_min))));

  const double k = model.scalar_curvature() / (6.0 * n);
  rep.mass_eps2 = {fm.coef(0), fm.std_error(0), -k * rep.ij.J1};
  rep.grad_eps2 = {fg.coef(0), fg.std_error(0), -k * rep.ij.J2};
  rep.entropy_eps2 = {fe.coef(0), fe.std_error(0), -k * rep.ij.J3};
  rep.entropy_eps2_log = {fe.coef(1), fe.std_error(1), (model.scalar_curvature() / 6.0) * rep.ij.J1};
  rep.mass_fit_rms = fm.rms;
  rep.grad_fit_rms = fg.rms;
  rep.entropy_fit_rms = fe.rms;
  return rep;
}

// ---------------------------------------------------------------------------
// Witness for the failure of  (normalized entropy)  <=  (n/p) log(A |grad u|^p + B)

struct WitnessRow {
  double epsilon = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // lhs - rhs; positive means the inequality fails at this bubble
};

struct WitnessReport {
  bool violated = false;
  std::optional<double> eps_star;
  double margin = 0.0;             // at the smallest ε
  double asymptotic_margin = 0.0;  // (n/p) log(A(p)/A)
  std::vector<WitnessRow> rows;
};

/// Evaluates both sides of the scale-free form of the inequality
///   int u^p log u^p <= (n/p) log(A int |grad u|^p + B int u^p)   (for |u|_p = 1)
/// on bubbles of decreasing width. Rows follow `eps_grid` sorted largest first.
inline WitnessReport lower_bound_witness(const ManifoldModel& model, double p, double A, double B,
                                         std::vector<double> eps_grid = {}, double b = 1.0,
                                         std::optional<double> delta_opt = std::nullopt,
                                         const BubbleQuadrature& quad = {}) {
  model.validate();
  const int n = model.n;
  if (!(p > 1.0 && p < n)) throw DomainError("lower_bound_witness: need 1 < p < n");
  if (!(A > 0.0)) throw DomainError("lower_bound_witness: A must be positive");
  detail::require(std::isfinite(B), "lower_bound_witness: B must be finite");
  const double delta = delta_opt.value_or(model.default_delta());
  if (eps_grid.empty()) eps_grid = default_eps_grid(delta, 0.1, 1e-3);
  std::sort(eps_grid.begin(), eps_grid.end(), std::greater<>());

  const ExtremalSpec base = extremal_spec(n, p, b);
  WitnessReport rep;
  rep.asymptotic_margin = (n / p) * std::log(entropy_best_constant(n, p) / A);
  for (double e : eps_grid) {
    const BubbleSpec spec{model, e, delta, p, base};
    const BubbleIntegrals v = bubble_integrals(spec, quad);
    WitnessRow row;
    row.epsilon = e;
    row.lhs = v.entropy / v.mass_p + (n / p - 1.0) * std::log(v.mass_p);
    const double arg = A * v.grad_p + B * v.mass_p;
    row.rhs = arg > 0.0 ? (n / p) * std::log(arg) : -HUGE_VAL;
    row.margin = row.lhs - row.rhs;
    if (row.margin > 0.0 && !rep.violated) {
      rep.violated = true;
      rep.eps_star = e;
    }
    rep.rows.push_back(row);
  }
  if (!rep.rows.empty()) rep.margin = rep.rows.back().margin;
  return rep;
}

}  // namespace sharpent
