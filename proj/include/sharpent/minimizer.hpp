#pragma once

// Constrained minimization of the penalized Gagliardo-Nirenberg functional
//   J(u) = (int |grad u|^p + C int u^p) (int u^q)^{p(1-theta)/(q theta)}
// over unit-L^p nonnegative functions of one coordinate on a model manifold.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sharpent/constants.hpp"
#include "sharpent/error.hpp"
#include "sharpent/gn_estimator.hpp"
#include "sharpent/manifold.hpp"
#include "sharpent/special_fn.hpp"

namespace sharpent {

/// Nodes of the reduced coordinate with lumped node weights and exact cell
/// volumes. Sphere: polar angle on [0, pi] including both poles. Torus: one
/// periodic coordinate on [0, L) with the other n-1 directions integrated out.
class SymmetricGrid {
public:
  SymmetricGrid(const ManifoldModel& model, std::size_t nodes) : model_(model) {
    model.validate();
    if (nodes < 5) throw GridTooCoarse("SymmetricGrid: at least 5 nodes required");
    const bool sphere = model.kind == ManifoldKind::sphere;
    const std::size_t cells = sphere ? nodes - 1 : nodes;
    const double span = sphere ? std::numbers::pi : model.scale;
    const double h = span / static_cast<double>(cells);
    coords_.resize(nodes);
    for (std::size_t i = 0; i < nodes; ++i) coords_[i] = h * static_cast<double>(i);
    if (sphere) coords_.back() = std::numbers::pi;

    cell_volume_.resize(cells);
    cell_length_.assign(cells, sphere ? model.scale * h : h);
    weights_.assign(nodes, 0.0);
    const int n = model.n;
    if (sphere) {
      const double factor = sphere_area(n) * std::pow(model.scale, n);
      auto density = [n](double t) { return std::pow(std::sin(t), n - 1); };
      for (std::size_t c = 0; c < cells; ++c)
        cell_volume_[c] = factor * integrate(density, coords_[c], coords_[c + 1]).value;
    } else {
      std::fill(cell_volume_.begin(), cell_volume_.end(), std::pow(model.scale, n - 1) * h);
    }
    for (std::size_t c = 0; c < cells; ++c) {
      const auto [i, j] = cell_nodes(c);
      weights_[i] += 0.5 * cell_volume_[c];
      weights_[j] += 0.5 * cell_volume_[c];
    }
    // Three-point Gauss rule per cell against the volume density, rescaled so
    // each cell integrates constants exactly.
    gauss_weight_.resize(cells);
    for (std::size_t c = 0; c < cells; ++c) {
      double total = 0.0;
      for (std::size_t k = 0; k < 3; ++k) {
        const double t = coords_[c] + kGaussNode[k] * h;
        const double density = sphere ? std::pow(std::sin(t), n - 1) : 1.0;
        gauss_weight_[c][k] = kGaussWeight[k] * density;
        total += gauss_weight_[c][k];
      }
      for (double& w : gauss_weight_[c]) w *= cell_volume_[c] / total;
    }
  }

  static constexpr std::array<double, 3> kGaussNode = {0.1127016653792583, 0.5, 0.8872983346207417};
  static constexpr std::array<double, 3> kGaussWeight = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

  const ManifoldModel& model() const { return model_; }
  bool periodic() const { return model_.kind == ManifoldKind::torus; }
  std::size_t size() const { return coords_.size(); }
  std::size_t cells() const { return cell_volume_.size(); }
  std::pair<std::size_t, std::size_t> cell_nodes(std::size_t c) const { return {c, (c + 1) % size()}; }
  const std::vector<double>& coords() const { return coords_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& cell_volumes() const { return cell_volume_; }
  /// Volume weights of the Gauss points of cell c (local positions kGaussNode).
  const std::array<double, 3>& gauss_weights(std::size_t c) const { return gauss_weight_[c]; }
  /// Metric length of each cell (geodesic distance between its nodes).
  const std::vector<double>& cell_lengths() const { return cell_length_; }
  /// Length of the coordinate range in the metric: pi rho or L.
  double extent() const {
    return model_.kind == ManifoldKind::sphere ? std::numbers::pi * model_.scale : model_.scale;
  }

  /// Coordinate distance, periodic on the torus.
  double distance(double a, double b) const {
    double d = std::abs(a - b);
    if (periodic()) d = std::min(d, model_.scale - d);
    return d;
  }

  /// Geodesic distance of node i from the pole/origin.
  double distance_from_centre(std::size_t i) const {
    return periodic() ? distance(coords_[i], 0.0) : coords_[i] * model_.scale;
  }

private:
  ManifoldModel model_;
  std::vector<double> coords_, weights_, cell_volume_, cell_length_;
  std::vector<std::array<double, 3>> gauss_weight_;
};

using SymmetricGridPtr = std::shared_ptr<const SymmetricGrid>;

struct SymmetricManifoldProfile {
  SymmetricGridPtr grid;
  std::vector<double> values;

  static SymmetricManifoldProfile constant(SymmetricGridPtr grid, double value) {
    const std::size_t m = grid->size();
    return {std::move(grid), std::vector<double>(m, value)};
  }

  void validate() const {
    detail::require(grid != nullptr, "SymmetricManifoldProfile: missing grid");
    detail::require(values.size() == grid->size(), "SymmetricManifoldProfile: size mismatch");
    for (double v : values) detail::require(std::isfinite(v) && v >= 0.0, "SymmetricManifoldProfile: values must be finite and >= 0");
  }
};

/// Integral of u^p for the piecewise-linear interpolant of the nodal values.
inline double lp_integral(const SymmetricManifoldProfile& u, double p) {
  const auto& g = *u.grid;
  double s = 0.0;
  for (std::size_t c = 0; c < g.cells(); ++c) {
    const auto [i, j] = g.cell_nodes(c);
    const auto& w = g.gauss_weights(c);
    for (std::size_t k = 0; k < 3; ++k) {
      const double t = SymmetricGrid::kGaussNode[k];
      const double v = (1.0 - t) * u.values[i] + t * u.values[j];
      if (v > 0.0) s += w[k] * std::pow(v, p);
    }
  }
  return s;
}

inline double grad_lp_integral(const SymmetricManifoldProfile& u, double p) {
  const auto& g = *u.grid;
  double s = 0.0;
  for (std::size_t c = 0; c < g.cells(); ++c) {
    const auto [i, j] = g.cell_nodes(c);
    const double slope = (u.values[j] - u.values[i]) / g.cell_lengths()[c];
    s += g.cell_volumes()[c] * std::pow(std::abs(slope), p);
  }
  return s;
}

/// Exponent of the L^q factor, p(1-theta)/(q theta), for the r = p family.
inline double jq_exponent(int n, double p, double q) {
  const double theta = theta_single(n, p, q);
  return p * (1.0 - theta) / (q * theta);
}

namespace detail {

inline void require_jq_exponents(int n, double p, double q) {
  if (!(p > 1.0 && p < n)) throw DomainError("J_q: need 1 < p < n");
  if (!(q >= 1.0 && q < p)) throw DomainError("J_q: need 1 <= q < p");
}

struct JqParts {
  double G = 0.0, P = 0.0, Q = 0.0, value = 0.0;
};

inline JqParts jq_parts(const SymmetricManifoldProfile& u, double p, double q, double C) {
  JqParts out;
  out.G = grad_lp_integral(u, p);
  out.P = lp_integral(u, p);
  out.Q = lp_integral(u, q);
  if (!(out.Q > 0.0)) throw DegenerateProfile("J_q: zero profile");
  out.value = (out.G + C * out.P) * std::pow(out.Q, jq_exponent(u.grid->model().n, p, q));
  return out;
}

}  // namespace detail

inline double functional_Jq(const SymmetricManifoldProfile& u, double p, double q, double C) {
  u.validate();
  detail::require_jq_exponents(u.grid->model().n, p, q);
  return detail::jq_parts(u, p, q, C).value;
}

/// Value of J_q at the unit-L^p constant: C V^{(1 - q/p) e}.
inline double constant_ceiling(const ManifoldModel& model, double p, double q, double C) {
  detail::require_jq_exponents(model.n, p, q);
  return C * std::pow(model.volume(), (1.0 - q / p) * jq_exponent(model.n, p, q));
}

struct MinimizeConfig {
  std::size_t nodes = 201;
  int max_iterations = 20000;
  double tol = 1e-7;  // weak Euler-Lagrange residual at which descent stops
  std::uint64_t seed = 1;
  double bump_amplitude = 0.1;
  int test_functions = 16;
  std::vector<double> initial;  // optional nodal start (e.g. a neighbouring C); replaces both defaults
  bool multi_start = true;      // also descend from a concentrated spike
};

struct MinimizeResult {
  double nu = 0.0;
  SymmetricManifoldProfile profile;
  int iterations = 0;
  double el_residual = 0.0;
  double Aq = 0.0;
  double Bq = 0.0;
  double q_integral = 0.0;
  double stationarity = 0.0;
  int clamp_events = 0;
  bool from_constant = false;  // the constant beat the descent and was returned
  std::string start;           // "constant", "bump", "spike" or "initial"
  std::vector<double> history;  // J at accepted iterates
};

namespace detail {

/// Solves (K + beta W) x = rhs, with K the P1 stiffness of the grid and W the
/// lumped mass; cyclic on the torus (Sherman-Morrison). Nodes flagged in
/// `fixed` are decoupled and return 0.
inline std::vector<double> h1_solve(const SymmetricGrid& g, double beta, std::vector<double> rhs,
                                    const std::vector<char>& fixed) {
  const std::size_t m = g.size();
  std::vector<double> diag(m), off(g.cells());
  for (std::size_t i = 0; i < m; ++i) diag[i] = beta * g.weights()[i];
  for (std::size_t c = 0; c < g.cells(); ++c) {
    const auto [i, j] = g.cell_nodes(c);
    const double k = g.cell_volumes()[c] / (g.cell_lengths()[c] * g.cell_lengths()[c]);
    diag[i] += k;
    diag[j] += k;
    off[c] = (fixed[i] || fixed[j]) ? 0.0 : -k;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!fixed[i]) continue;
    diag[i] = 1.0;
    rhs[i] = 0.0;
  }
  // off[c] couples c and c+1; in the periodic case off[m-1] couples m-1 and 0.
  auto thomas = [m](std::vector<double> a_diag, const std::vector<double>& sub, std::vector<double> x) {
    for (std::size_t i = 1; i < m; ++i) {
      const double f = sub[i - 1] / a_diag[i - 1];
      a_diag[i] -= f * sub[i - 1];
      x[i] -= f * x[i - 1];
    }
    x[m - 1] /= a_diag[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) x[i] = (x[i] - sub[i] * x[i + 1]) / a_diag[i];
    return x;
  };
  if (!g.periodic()) return thomas(diag, off, rhs);

  const double corner = off[m - 1];
  const double gamma = -diag[0];
  std::vector<double> d2 = diag;
  d2[0] -= gamma;
  d2[m - 1] -= corner * corner / gamma;
  std::vector<double> z(m, 0.0);
  z[0] = gamma;
  z[m - 1] = corner;
  const auto y = thomas(d2, off, rhs);
  const auto w = thomas(d2, off, z);
  const double fact = (y[0] + corner * y[m - 1] / gamma) / (1.0 + w[0] + corner * w[m - 1] / gamma);
  std::vector<double> x(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = y[i] - fact * w[i];
  return x;
}

/// Nodal pieces of the first variation: gradient of int |grad u|^p, and
/// int u^{p-1} phi_i, int u^{q-1} phi_i against the hat functions phi_i.
struct FirstVariation {
  std::vector<double> dG, up1, uq1;
};

inline FirstVariation first_variation(const SymmetricManifoldProfile& u, double p, double q) {
  const auto& g = *u.grid;
  const std::size_t m = g.size();
  FirstVariation fv{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
  for (std::size_t c = 0; c < g.cells(); ++c) {
    const auto [i, j] = g.cell_nodes(c);
    const double len = g.cell_lengths()[c];
    const double slope = (u.values[j] - u.values[i]) / len;
    const double a = std::abs(slope);
    const double flux = a > 0.0 ? p * std::pow(a, p - 2.0) * slope : 0.0;
    fv.dG[j] += g.cell_volumes()[c] * flux / len;
    fv.dG[i] -= g.cell_volumes()[c] * flux / len;
  }
  for (std::size_t c = 0; c < g.cells(); ++c) {
    const auto [i, j] = g.cell_nodes(c);
    const auto& w = g.gauss_weights(c);
    for (std::size_t k = 0; k < 3; ++k) {
      const double t = SymmetricGrid::kGaussNode[k];
      const double v = (1.0 - t) * u.values[i] + t * u.values[j];
      const double a = v > 0.0 ? w[k] * std::pow(v, p - 1.0) : 0.0;
      const double b = v > 0.0 ? w[k] * std::pow(v, q - 1.0) : (q == 1.0 ? w[k] : 0.0);
      fv.up1[i] += (1.0 - t) * a;
      fv.up1[j] += t * a;
      fv.uq1[i] += (1.0 - t) * b;
      fv.uq1[j] += t * b;
    }
  }
  return fv;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline void normalize_lp(SymmetricManifoldProfile& u, double p) {
  const double mass = lp_integral(u, p);
  if (!(mass > 0.0)) throw DegenerateProfile("minimize_Jq: iterate collapsed to zero");
  const double s = std::pow(mass, -1.0 / p);
  for (double& v : u.values) v *= s;
}

/// Bumps (1 - (d/w)^2)^2 in the reduced coordinate, evenly spread.
inline std::vector<std::vector<double>> coordinate_bumps(const SymmetricGrid& g, int count) {
  const double span = g.periodic() ? g.model().scale : std::numbers::pi;
  const int centres = g.periodic() ? count : count;
  const double spacing = g.periodic() ? span / centres : span / (centres - 1);
  std::vector<std::vector<double>> out;
  for (int k = 0; k < centres; ++k) {
    const double c = k * spacing;
    std::vector<double> phi(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.distance(g.coords()[i], c) / (1.5 * spacing);
      phi[i] = x < 1.0 ? (1.0 - x * x) * (1.0 - x * x) : 0.0;
    }
    out.push_back(std::move(phi));
  }
  return out;
}

}  // namespace detail

/// A_q, B_q and the nodal residual of the Euler-Lagrange system
///   A (Delta_p u + C u^{p-1}) + ((1-theta)/theta) B u^{q-1} = (nu/theta) u^{p-1}
/// in weak form. Nodes clamped at zero only count when the multiplier has the
/// wrong sign.
struct ELTerms {
  double Aq = 0.0, Bq = 0.0, nu = 0.0, theta = 0.0;
  std::vector<double> residual, scale;
};

inline ELTerms el_terms(const SymmetricManifoldProfile& u, double p, double q, double C) {
  const int n = u.grid->model().n;
  const auto parts = detail::jq_parts(u, p, q, C);
  const double e = jq_exponent(n, p, q);
  ELTerms t;
  t.theta = theta_single(n, p, q);
  t.Aq = std::pow(parts.Q, e);
  t.Bq = (parts.G + C * parts.P) * std::pow(parts.Q, e - 1.0);
  t.nu = parts.value;
  const auto fv = detail::first_variation(u, p, q);
  const std::size_t m = u.values.size();
  t.residual.resize(m);
  t.scale.resize(m);
  const double k = (1.0 - t.theta) / t.theta;
  for (std::size_t i = 0; i < m; ++i) {
    const double a = t.Aq * fv.dG[i] / p;
    const double b = t.Aq * C * fv.up1[i];
    const double c = k * t.Bq * fv.uq1[i];
    const double d = (t.nu / t.theta) * fv.up1[i];
    double r = a + b + c - d;
    if (u.values[i] == 0.0 && r > 0.0) r = 0.0;
    t.residual[i] = r;
    t.scale[i] = std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d);
  }
  return t;
}

/// Relative weak residual against `test_count` coordinate bumps; absolute when
/// every term vanishes (constant profile at C = 0).
inline double el_residual(const SymmetricManifoldProfile& u, double p, double q, double C, int test_count = 16) {
  u.validate();
  detail::require_jq_exponents(u.grid->model().n, p, q);
  detail::require(test_count >= 2, "el_residual: need at least two test functions");
  const auto t = el_terms(u, p, q, C);
  const auto basis = detail::coordinate_bumps(*u.grid, test_count);
  double r2 = 0.0, s2 = 0.0;
  for (const auto& phi : basis) {
    const double r = detail::dot(t.residual, phi);
    const double s = detail::dot(t.scale, phi);
    r2 += r * r;
    s2 += s * s;
  }
  return s2 > 0.0 ? std::sqrt(r2 / s2) : std::sqrt(r2);
}

inline double el_residual(const MinimizeResult& result, double p, double q, double C, int test_count = 16) {
  return el_residual(result.profile, p, q, C, test_count);
}

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

inline MinimizeResult finish_result(SymmetricManifoldProfile u, double p, double q, double C, int iterations,
                                    int tests) {
  MinimizeResult res;
  const auto t = el_terms(u, p, q, C);
  res.nu = t.nu;
  res.Aq = t.Aq;
  res.Bq = t.Bq;
  res.q_integral = lp_integral(u, q);
  res.iterations = iterations;
  res.el_residual = el_residual(u, p, q, C, tests);
  res.profile = std::move(u);
  return res;
}

/// Outcome of one descent run from a given start.
struct DescentRun {
  SymmetricManifoldProfile u;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  bool budget_exhausted = false;
  double stationarity = 0.0;
  int clamp_events = 0;
  std::vector<double> history;
};

/// Preconditioned projected nonlinear CG on the unit L^p sphere intersected
/// with the nonnegative cone.
inline DescentRun descend(SymmetricManifoldProfile u, double p, double q, double C, const MinimizeConfig& config) {
  const SymmetricGrid& grid = *u.grid;
  const int n = grid.model().n;
  normalize_lp(u, p);
  const double beta = std::pow(std::numbers::pi / grid.extent(), 2);
  const double e = jq_exponent(n, p, q);
  auto parts = jq_parts(u, p, q, C);
  DescentRun run;
  run.history.push_back(parts.value);
  double step = 1.0;
  int it = 0;
  std::vector<char> prev_fixed;
  std::vector<double> prev_z, prev_dir;
  double prev_tz = 0.0;
  int stalled = 0;
  for (; it < config.max_iterations; ++it) {
    const auto fv = first_variation(u, p, q);
    const double qe = std::pow(parts.Q, e);
    const double qe1 = (parts.G + C * parts.P) * e * std::pow(parts.Q, e - 1.0);
    std::vector<double> grad(u.values.size()), normal(u.values.size());
    for (std::size_t i = 0; i < grad.size(); ++i) {
      grad[i] = qe * (fv.dG[i] + C * p * fv.up1[i]) + qe1 * q * fv.uq1[i];
      normal[i] = p * fv.up1[i];
    }
    // Nodes at zero stay put while the Lagrangian gradient (with the exact
    // multiplier J/theta) pushes them further down.
    std::vector<char> fixed(grad.size(), 0);
    const double multiplier = parts.value / theta_single(n, p, q);
    for (std::size_t i = 0; i < grad.size(); ++i)
      fixed[i] = u.values[i] == 0.0 && grad[i] - multiplier * normal[i] >= 0.0;
    // The smoothed step can still point below zero at a free zero node; such
    // nodes join the fixed set until it settles.
    std::vector<double> pg, pn, z(grad.size());
    double lambda = 0.0;
    for (int pass = 0; pass < 8; ++pass) {
      pg = h1_solve(grid, beta, grad, fixed);
      pn = h1_solve(grid, beta, normal, fixed);
      lambda = dot(normal, pg) / dot(normal, pn);
      bool changed = false;
      for (std::size_t i = 0; i < grad.size(); ++i) {
        z[i] = pg[i] - lambda * pn[i];
        if (u.values[i] == 0.0 && !fixed[i] && z[i] > 0.0) {
          fixed[i] = 1;
          changed = true;
        }
      }
      if (!changed) break;
    }
    std::vector<double> tangent(grad.size());
    for (std::size_t i = 0; i < grad.size(); ++i) tangent[i] = fixed[i] ? 0.0 : grad[i] - lambda * normal[i];
    const double tz = dot(tangent, z);
    run.stationarity = std::sqrt(std::max(tz, 0.0)) / parts.value;
    const double current_el = el_residual(u, p, q, C, config.test_functions);
    if (current_el <= config.tol) {
      run.converged = true;
      break;
    }

    // Preconditioned Polak-Ribiere+ direction, restarted whenever the active
    // set changes, then projected back onto the constraint tangent.
    std::vector<double> dir(grad.size());
    double mix = 0.0;
    if (fixed == prev_fixed && prev_tz > 0.0) {
      double num = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) num += tangent[i] * (z[i] - prev_z[i]);
      mix = std::max(0.0, num / prev_tz);
    }
    for (std::size_t i = 0; i < dir.size(); ++i) dir[i] = fixed[i] ? 0.0 : -z[i] + (mix > 0.0 ? mix * prev_dir[i] : 0.0);
    const double drift = dot(normal, dir) / dot(normal, pn);
    for (std::size_t i = 0; i < dir.size(); ++i) dir[i] -= drift * pn[i];
    double decrease = -dot(tangent, dir);
    if (!(decrease > 0.0)) {
      for (std::size_t i = 0; i < dir.size(); ++i) dir[i] = -z[i];
      decrease = tz;
    }
    prev_fixed = fixed;
    prev_z = z;
    prev_tz = tz;

    // Backtracking line search; a conjugate direction that yields nothing is
    // retried once as the plain preconditioned direction.
    bool accepted = false;
    const double start_step = std::min(step * 2.0, 1e6);
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      if (attempt == 1) {
        if (mix == 0.0) break;
        for (std::size_t i = 0; i < dir.size(); ++i) dir[i] = fixed[i] ? 0.0 : -z[i];
        decrease = tz;
      }
      step = start_step;
      for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
        auto trial = u;
        int clamps = 0;
        for (std::size_t i = 0; i < dir.size(); ++i) {
          trial.values[i] += step * dir[i];
          if (trial.values[i] < 0.0) {
            trial.values[i] = 0.0;
            ++clamps;
          }
        }
        normalize_lp(trial, p);
        const auto tp = jq_parts(trial, p, q, C);
        // Near stationarity the decrease drops below round-off in J; there a
        // step is judged by the residual instead.
        const bool in_noise = std::abs(tp.value - parts.value) <= 64.0 * kEps * parts.value;
        const bool armijo = tp.value <= parts.value - 1e-4 * step * decrease;
        if (armijo || (in_noise && el_residual(trial, p, q, C, config.test_functions) < current_el)) {
          stalled = tp.value < parts.value ? 0 : stalled + 1;
          u = std::move(trial);
          parts = tp;
          run.clamp_events += clamps;
          accepted = true;
          break;
        }
      }
    }
    prev_dir = dir;
    if (!accepted || stalled >= 50) {
      // No representable decrease left; accept if close to stationary.
      run.converged = el_residual(u, p, q, C, config.test_functions) <= 10.0 * config.tol;
      break;
    }
    run.history.push_back(parts.value);
  }
  run.budget_exhausted = it >= config.max_iterations;
  if (run.budget_exhausted) run.converged = el_residual(u, p, q, C, config.test_functions) <= 10.0 * config.tol;
  run.iterations = it;
  run.value = parts.value;
  run.u = std::move(u);
  return run;
}

/// Constant plus a seeded smooth bump of width 0.2 to 0.4 of the extent,
/// centred at the pole/origin.
inline SymmetricManifoldProfile bump_start(const SymmetricManifoldProfile& constant, const MinimizeConfig& config) {
  const SymmetricGrid& grid = *constant.grid;
  std::mt19937_64 rng(config.seed);
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  const double width = (0.2 + 0.2 * unit) * grid.extent();
  auto u = constant;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    const double x = grid.distance_from_centre(i) / width;
    if (x < 1.0) u.values[i] *= 1.0 + config.bump_amplitude * (1.0 - x * x) * (1.0 - x * x);
  }
  return u;
}

/// Gaussian spike three cells wide on a faint floor: reaches the
/// concentrated branch that a small bump misses when C is moderate.
inline SymmetricManifoldProfile spike_start(const SymmetricManifoldProfile& constant) {
  const SymmetricGrid& grid = *constant.grid;
  const double width = 3.0 * grid.extent() / static_cast<double>(grid.cells());
  auto u = constant;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    const double x = grid.distance_from_centre(i) / width;
    u.values[i] = constant.values[i] * (0.01 + 100.0 * std::exp(-x * x));
  }
  return u;
}

}  // namespace detail

/// nu_q = inf J_q over nonnegative unit-L^p profiles. Descends from the
/// seeded bump start and from a concentrated spike (or from
/// `config.initial` alone) and keeps the lowest converged value; the exact
/// constant critical point is returned when nothing beats it.
inline MinimizeResult minimize_Jq(const ManifoldModel& model, double p, double q, double C,
                                  const MinimizeConfig& config = {}) {
  model.validate();
  const int n = model.n;
  if (!(p > 1.0 && p <= 2.0 && p < n)) throw DomainError("minimize_Jq: need 1 < p <= 2 and p < n");
  if (!(q >= 1.0 && q < p)) throw DomainError("minimize_Jq: need 1 <= q < p");
  if (!(C >= 0.0 && std::isfinite(C))) throw DomainError("minimize_Jq: C must be finite and >= 0");
  detail::require(config.max_iterations >= 1 && config.tol > 0.0, "minimize_Jq: invalid budget");

  auto grid = std::make_shared<const SymmetricGrid>(model, config.nodes);
  const double level = std::pow(model.volume(), -1.0 / p);
  auto constant = SymmetricManifoldProfile::constant(grid, level);
  // Constants give J = 0, the global minimum, when there is no penalty.
  if (C == 0.0) {
    auto res = detail::finish_result(constant, p, q, C, 0, config.test_functions);
    res.from_constant = true;
    res.start = "constant";
    res.history = {res.nu};
    return res;
  }
  const double ceiling = detail::jq_parts(constant, p, q, C).value;

  std::vector<std::pair<std::string, SymmetricManifoldProfile>> starts;
  if (!config.initial.empty()) {
    detail::require(config.initial.size() == constant.values.size(), "minimize_Jq: initial profile size mismatch");
    auto u = constant;
    for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] = std::max(config.initial[i], 0.0);
    starts.emplace_back("initial", std::move(u));
  } else {
    starts.emplace_back("bump", detail::bump_start(constant, config));
    if (config.multi_start) starts.emplace_back("spike", detail::spike_start(constant));
  }

  std::optional<detail::DescentRun> best;
  std::string best_start;
  int total_iterations = 0;
  std::string failure;
  for (auto& [name, start] : starts) {
    auto run = detail::descend(std::move(start), p, q, C, config);
    total_iterations += run.iterations;
    if (!run.converged) {
      // For p < 2 the energy of a small perturbation of a constant scales like
      // its amplitude^p, so descent toward the constant stalls at round-off.
      if (run.value >= ceiling * (1.0 - 1e-12)) continue;
      failure = std::string(run.budget_exhausted ? "iteration budget exhausted" : "descent stalled") + " from the " +
                name + " start (residual " + detail::sci(el_residual(run.u, p, q, C, config.test_functions)) +
                ", tolerance " + detail::sci(config.tol) + ")";
      continue;
    }
    if (!best || run.value < best->value) {
      best = std::move(run);
      best_start = name;
    }
  }

  // The constant is an exact critical point; it wins ties and covers runs
  // that drifted back to it.
  const bool constant_wins = !best || best->value >= ceiling * (1.0 - 1e-12);
  if (constant_wins && !failure.empty()) throw NonConvergence("minimize_Jq: " + failure);
  MinimizeResult res;
  if (constant_wins) {
    res = detail::finish_result(constant, p, q, C, total_iterations, config.test_functions);
    res.from_constant = true;
    res.start = "constant";
    res.history = {ceiling};
  } else {
    res = detail::finish_result(std::move(best->u), p, q, C, total_iterations, config.test_functions);
    res.start = best_start;
    res.history = std::move(best->history);
    res.clamp_events = best->clamp_events;
    res.stationarity = best->stationarity;
  }
  return res;
}

struct NuScanRow {
  double q = 0.0;
  double nu = 0.0;
  double constant_ceiling = 0.0;
  std::optional<double> gn_ceiling;  // 1 / estimated A0(p,q,p)
  bool below_gn_ceiling = true;
  double el_residual = 0.0;
  int iterations = 0;
};

struct NuScanOptions {
  MinimizeConfig minimize;
  bool compare_gn = true;
  EstimateBudget gn_budget;
  double tolerance = 1e-6;
};

/// nu_q(C) for each q of `q_list`, with the constant-profile value and the
/// inverse of the estimated Euclidean constant reported alongside.
inline std::vector<NuScanRow> nu_limit_scan(const ManifoldModel& model, double p, const std::vector<double>& q_list,
                                            double C, const NuScanOptions& opt = {}) {
  std::vector<NuScanRow> rows;
  for (double q : q_list) {
    const auto res = minimize_Jq(model, p, q, C, opt.minimize);
    NuScanRow row;
    row.q = q;
    row.nu = res.nu;
    row.constant_ceiling = constant_ceiling(model, p, q, C);
    row.el_residual = res.el_residual;
    row.iterations = res.iterations;
    if (opt.compare_gn) {
      const auto est = estimate_gn_constant(InequalityParams{model.n, p, q, p}, opt.gn_budget);
      row.gn_ceiling = 1.0 / est.value;
      row.below_gn_ceiling = row.nu <= *row.gn_ceiling * (1.0 + opt.tolerance);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace sharpent
