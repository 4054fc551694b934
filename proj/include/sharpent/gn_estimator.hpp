#pragma once

// Variational lower bounds for the Euclidean Gagliardo-Nirenberg constants
//
//   (int u^r)^{p/(r theta)} <= A(p,q,r) (int |grad u|^p) (int u^q)^{p(1-theta)/(q theta)}
//
// by maximizing the quotient over radial trial families followed by a
// preconditioned projected-gradient ascent on the sampled profile.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sharpent/constants.hpp"
#include "sharpent/error.hpp"
#include "sharpent/profiles.hpp"

namespace sharpent {

struct GNQuotientReport {
  InequalityParams params;
  double theta = 0.0;
  double quotient = 0.0;
  double norm_r = 0.0;  // |u|_r
  double grad_p = 0.0;  // int |grad u|^p
  double norm_q = 0.0;  // |u|_q
  std::string profile_id;

  /// quotient rebuilt from the stored parts.
  double recomputed() const {
    const double p = params.p;
    return std::pow(norm_r, p / theta) / (grad_p * std::pow(norm_q, p * (1.0 - theta) / theta));
  }
};

/// Validates a GN parameter triple and returns theta.
inline double gn_theta(const InequalityParams& params) {
  if (params.n < 2) throw DomainError("gn: n must be >= 2");
  if (!(params.p > 1.0 && params.p < params.n)) throw DomainError("gn: need 1 < p < n");
  if (!(params.q < params.r)) throw DomainError("gn: need q < r");
  const DerivedExponents ex = derived_exponents(params);
  if (!(ex.theta > 0.0 && ex.theta <= 1.0 + 1e-14)) throw DomainError("gn: theta outside (0, 1]");
  return ex.theta;
}

/// The GN quotient of a profile; by definition a lower bound for A(p,q,r).
/// Scale and dilation invariant.
inline GNQuotientReport gn_quotient(const RadialProfile& u, const InequalityParams& params,
                                    std::string profile_id = {}) {
  detail::require(u.dimension() == params.n, "gn_quotient: dimension mismatch");
  GNQuotientReport rep;
  rep.params = params;
  rep.theta = gn_theta(params);
  rep.profile_id = std::move(profile_id);
  rep.norm_q = lp_norm(u, params.q);
  if (!(rep.norm_q > 0.0)) throw DegenerateProfile("gn_quotient: zero profile");
  rep.norm_r = lp_norm(u, params.r);
  rep.grad_p = grad_lp_norm_p_extrapolated(u, params.p);
  if (!(rep.grad_p > 0.0)) throw DegenerateProfile("gn_quotient: profile has no gradient energy");
  // Evaluate in log space; the exponents blow up as theta -> 0.
  const double p = params.p;
  const double log_q = (p / rep.theta) * std::log(rep.norm_r) - std::log(rep.grad_p) -
                       (p * (1.0 - rep.theta) / rep.theta) * std::log(rep.norm_q);
  rep.quotient = std::exp(log_q);
  return rep;
}

struct EstimateBudget {
  int family_points = 25;      // scan resolution per family parameter
  int refine_iterations = 40;  // golden-section steps per coordinate
  int ascent_iterations = 200;
  int max_halvings = 30;
  double rel_improvement_tol = 1e-9;
  double nodes_per_decade = 400.0;
};

struct GNEstimate {
  double value = 0.0;
  GNQuotientReport best;
  double stretched_best = 0.0;  // sup over a exp(-b r^s)
  double stretched_shape = 0.0;
  double algebraic_best = 0.0;  // sup over (1 + r^s)^{-k}
  double algebraic_shape = 0.0;
  double algebraic_power = 0.0;
  double ascent_best = 0.0;
  int ascent_iterations = 0;
  bool ascent_step_failed = false;
  std::vector<double> ascent_history;  // internal objective at accepted iterates
  std::string warning;
};

namespace detail {

inline RadialProfile stretched_trial(int n, double s, double density) {
  const double r_max = std::pow(std::log(1e16), 1.0 / s);
  auto grid = RadialGrid::with_density(1e-6, r_max, density);
  return RadialProfile::sample(std::move(grid), n, [s](double r) { return std::exp(-std::pow(r, s)); });
}

inline double algebraic_min_power(const InequalityParams& params, double s) {
  return (params.n + 2.0) / (s * std::min(params.q, params.r));
}

inline RadialProfile algebraic_trial(const InequalityParams& params, double s, double k, double density) {
  const double decay = k * s * std::min(params.q, params.r) - params.n;
  const double r_max = std::min(1e8, std::pow(10.0, 12.0 / decay));
  auto grid = RadialGrid::with_density(1e-6, std::max(r_max, 10.0), density);
  return RadialProfile::sample(std::move(grid), params.n,
                               [s, k](double r) { return std::pow(1.0 + std::pow(r, s), -k); });
}

template <class F>
double golden_max(const F& f, double lo, double hi, int iterations, double& arg) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < iterations; ++it) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  arg = f1 >= f2 ? x1 : x2;
  return std::max(f1, f2);
}

inline double safe_log_quotient(const RadialProfile& u, const InequalityParams& params) {
  try {
    return std::log(gn_quotient(u, params).quotient);
  } catch (const DomainError&) {
    return -std::numeric_limits<double>::infinity();
  }
}

/// Quotient with the gradient taken cell-wise, (u_{i+1} - u_i)/(r_{i+1} - r_i),
/// so no oscillatory mode escapes the gradient term. Provides the objective
/// and its exact derivative for the ascent.
class CellQuotient {
public:
  CellQuotient(const RadialProfile& shape, const InequalityParams& params, double theta)
      : params_(params), theta_(theta) {
    const auto r = shape.radii();
    const double area = sphere_area(params.n);
    node_measure_.assign(shape.measure().begin(), shape.measure().end());
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
      const double dr = r[i + 1] - r[i];
      cell_dr_.push_back(dr);
      cell_measure_.push_back(area * (std::pow(r[i + 1], params.n) - std::pow(r[i], params.n)) / params.n);
    }
  }

  double log_value(const std::vector<double>& u) const {
    const auto [sr, sq, g] = parts(u);
    if (!(sr > 0.0 && sq > 0.0 && g > 0.0)) return -std::numeric_limits<double>::infinity();
    return coeff_r() * std::log(sr) - std::log(g) - coeff_q() * std::log(sq);
  }

  std::vector<double> gradient(const std::vector<double>& u) const {
    const auto [sr, sq, g] = parts(u);
    const double p = params_.p, q = params_.q, r = params_.r;
    std::vector<double> out(u.size(), 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) {
      out[i] = coeff_r() * r * node_measure_[i] * std::pow(u[i], r - 1.0) / sr -
               coeff_q() * q * node_measure_[i] * std::pow(u[i], q - 1.0) / sq;
    }
    for (std::size_t c = 0; c < cell_dr_.size(); ++c) {
      const double slope = (u[c + 1] - u[c]) / cell_dr_[c];
      const double mag = std::abs(slope);
      if (mag == 0.0) continue;
      const double dg = p * cell_measure_[c] * std::pow(mag, p - 2.0) * slope / cell_dr_[c] / g;
      out[c] += dg;
      out[c + 1] -= dg;
    }
    return out;
  }

  /// Solves (K + beta M) d = g for the H^1 representative of a gradient.
  std::vector<double> precondition(const std::vector<double>& grad, double beta) const {
    const std::size_t m = grad.size();
    std::vector<double> diag(m), off(m - 1), rhs(grad);
    for (std::size_t i = 0; i < m; ++i) diag[i] = beta * node_measure_[i];
    for (std::size_t c = 0; c + 1 < m; ++c) {
      const double k = cell_measure_[c] / (cell_dr_[c] * cell_dr_[c]);
      diag[c] += k;
      diag[c + 1] += k;
      off[c] = -k;
    }
    // Thomas algorithm
    for (std::size_t i = 1; i < m; ++i) {
      const double w = off[i - 1] / diag[i - 1];
      diag[i] -= w * off[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> d(m);
    d[m - 1] = rhs[m - 1] / diag[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) d[i] = (rhs[i] - off[i] * d[i + 1]) / diag[i];
    return d;
  }

  double lp_mass(const std::vector<double>& u, double p) const {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += node_measure_[i] * std::pow(u[i], p);
    return s;
  }

private:
  struct Parts {
    double sr, sq, g;
  };
  Parts parts(const std::vector<double>& u) const {
    Parts out{lp_mass(u, params_.r), lp_mass(u, params_.q), 0.0};
    for (std::size_t c = 0; c < cell_dr_.size(); ++c)
      out.g += cell_measure_[c] * std::pow(std::abs(u[c + 1] - u[c]) / cell_dr_[c], params_.p);
    return out;
  }
  double coeff_r() const { return params_.p / (theta_ * params_.r); }
  double coeff_q() const { return params_.p * (1.0 - theta_) / (theta_ * params_.q); }

  InequalityParams params_;
  double theta_;
  std::vector<double> node_measure_, cell_measure_, cell_dr_;
};

}  // namespace detail

/// Lower bound for A(p,q,r): the best quotient over the stretched-exponential
/// and algebraic trial families, then improved by projected-gradient ascent
/// on the sampled profile (unit L^p after every step, clamped at zero,
/// halving line search).
inline GNEstimate estimate_gn_constant(const InequalityParams& params, const EstimateBudget& budget = {}) {
  const double theta = gn_theta(params);
  const double density = budget.nodes_per_decade;
  GNEstimate out;

  // (i) a exp(-b r^s): amplitude and dilation drop out, only s matters.
  {
    auto f = [&](double s) { return detail::safe_log_quotient(detail::stretched_trial(params.n, s, density), params); };
    double best_s = 1.0, best = -std::numeric_limits<double>::infinity();
    const int pts = std::max(budget.family_points, 3);
    for (int i = 0; i < pts; ++i) {
      const double s = 1.0 + 3.0 * i / (pts - 1);
      const double v = f(s);
      if (v > best + 1e-12) best = v, best_s = s;
    }
    const double step = 3.0 / (pts - 1);
    double arg = best_s;
    const double refined = detail::golden_max(f, std::max(1.0, best_s - step), std::min(4.0, best_s + step),
                                              budget.refine_iterations, arg);
    if (refined > best + 1e-12) best = refined, best_s = arg;
    out.stretched_best = std::exp(best);
    out.stretched_shape = best_s;
  }

  // (ii) (1 + r^s)^{-k}, k scanned on a log scale above the integrability floor.
  {
    auto f = [&](double s, double log_k) {
      return detail::safe_log_quotient(detail::algebraic_trial(params, s, std::exp(log_k), density), params);
    };
    const int pts = std::max(budget.family_points, 3);
    auto k_range = [&](double s) {
      const double lo = std::log(detail::algebraic_min_power(params, s));
      return std::pair{lo, lo + std::log(100.0)};
    };
    double best = -std::numeric_limits<double>::infinity(), best_s = 2.0, best_lk = 0.0;
    for (int i = 0; i < pts; ++i) {
      const double s = 1.0 + 3.0 * i / (pts - 1);
      const auto [lo, hi] = k_range(s);
      for (int j = 0; j < pts; ++j) {
        const double lk = lo + (hi - lo) * j / (pts - 1);
        const double v = f(s, lk);
        if (v > best + 1e-12) best = v, best_s = s, best_lk = lk;
      }
    }
    // Two rounds of coordinate refinement.
    double s_step = 3.0 / (pts - 1);
    for (int round = 0; round < 2; ++round) {
      const auto [lo, hi] = k_range(best_s);
      const double k_step = (hi - lo) / (pts - 1);
      double arg = best_lk;
      double v = detail::golden_max([&](double lk) { return f(best_s, lk); }, std::max(lo, best_lk - k_step),
                                    best_lk + k_step, budget.refine_iterations / 2, arg);
      if (v > best + 1e-12) best = v, best_lk = arg;
      // Keep the power fixed relative to its floor while moving s.
      const double offset = best_lk - k_range(best_s).first;
      auto fs = [&](double s) { return f(s, k_range(s).first + offset); };
      v = detail::golden_max(fs, std::max(1.0, best_s - s_step), std::min(4.0, best_s + s_step),
                             budget.refine_iterations / 2, arg);
      if (v > best + 1e-12) best = v, best_s = arg, best_lk = k_range(arg).first + offset;
      s_step *= 0.5;
    }
    out.algebraic_best = std::exp(best);
    out.algebraic_shape = best_s;
    out.algebraic_power = std::exp(best_lk);
  }

  // Seed profile: first maximizer wins ties.
  const bool stretched_wins = out.stretched_best >= out.algebraic_best * (1.0 - 1e-12);
  RadialProfile seed = stretched_wins
                           ? detail::stretched_trial(params.n, out.stretched_shape, density)
                           : detail::algebraic_trial(params, out.algebraic_shape, out.algebraic_power, density);
  seed = normalized(seed, params.p);
  out.best = gn_quotient(seed, params, stretched_wins ? "stretched_exp" : "algebraic");

  // (iii) ascent
  const detail::CellQuotient objective(seed, params, theta);
  std::vector<double> u(seed.values().begin(), seed.values().end());
  double current = objective.log_value(u);
  out.ascent_history.push_back(current);
  const double support = detail::support_radius(seed, 1e-3);
  const double beta = 1.0 / (support * support);
  double step = 0.0;
  for (int it = 0; it < budget.ascent_iterations; ++it) {
    const auto direction = objective.precondition(objective.gradient(u), beta);
    const double peak = *std::max_element(u.begin(), u.end());
    double dmax = 0.0;
    for (double d : direction) dmax = std::max(dmax, std::abs(d));
    if (dmax == 0.0) break;
    if (step == 0.0) step = 0.05 * peak / dmax;
    bool accepted = false;
    std::vector<double> trial(u.size());
    for (int h = 0; h <= budget.max_halvings; ++h) {
      for (std::size_t i = 0; i < u.size(); ++i) trial[i] = std::max(0.0, u[i] + step * direction[i]);
      const double mass = objective.lp_mass(trial, params.p);
      if (mass > 0.0) {
        const double scale = std::pow(mass, -1.0 / params.p);
        for (double& x : trial) x *= scale;
        const double value = objective.log_value(trial);
        if (value > current) {
          const double gain = value - current;
          u.swap(trial);
          current = value;
          out.ascent_history.push_back(current);
          accepted = true;
          step *= 2.0;
          if (gain < budget.rel_improvement_tol) it = budget.ascent_iterations;
          break;
        }
      }
      step *= 0.5;
    }
    ++out.ascent_iterations;
    if (!accepted) {
      out.ascent_step_failed = true;
      break;
    }
  }
  if (out.ascent_step_failed && out.ascent_iterations <= 1)
    out.warning = "ascent line search failed on the first step";

  const RadialProfile ascended(seed.grid_ptr(), u, params.n);
  const GNQuotientReport final_report = gn_quotient(ascended, params, "ascent");
  out.ascent_best = final_report.quotient;
  if (final_report.quotient > out.best.quotient * (1.0 + 1e-12)) out.best = final_report;
  out.value = out.best.quotient;
  return out;
}

struct LimitScanRow {
  double q;
  double estimate;
  double gap;  // (A(p) - estimate) / A(p)
};

/// Estimates A(p,q,p) along a sequence q -> p^- and reports the relative gap
/// to the entropy constant.
inline std::vector<LimitScanRow> limit_scan(int n, double p, const std::vector<double>& q_list,
                                            const EstimateBudget& budget = {}) {
  for (std::size_t i = 0; i < q_list.size(); ++i) {
    if (!(q_list[i] > 1.0 && q_list[i] < p)) throw DomainError("limit_scan: every q must lie in (1, p)");
    if (i > 0 && !(q_list[i] > q_list[i - 1]))
      throw DomainError("limit_scan: q_list must approach p monotonically from below");
  }
  const double target = entropy_best_constant(n, p);
  std::vector<LimitScanRow> rows;
  for (double q : q_list) {
    const double est = estimate_gn_constant({n, p, q, p}, budget).value;
    rows.push_back({q, est, (target - est) / target});
  }
  return rows;
}

struct MonotonicityReport {
  std::vector<double> q_values;
  std::vector<double> r_values;
  std::vector<std::vector<double>> estimates;  // [i][j] at (q_values[i], r_values[j])
  double noise_band = 0.0;      // allowed reversal: fraction of the spread of estimates
  double max_violation = 0.0;   // largest est(q1,r1) - est(q2,r2) over ordered pairs
  int soft_violations = 0;      // reversals inside the noise band
  int hard_violations = 0;      // reversals beyond it
};

/// Estimates the constants on a (q, r) grid and checks that they increase
/// with both exponents: A(p,q1,r1) <= A(p,q2,r2) when q1 <= q2 and r1 <= r2.
/// Estimates are lower bounds, so reversals up to `noise_fraction` times the
/// spread of the grid are attributed to the optimizer.
inline MonotonicityReport monotonicity_check(int n, double p, const std::vector<double>& q_values,
                                             const std::vector<double>& r_values, double noise_fraction = 0.1,
                                             const EstimateBudget& budget = {}) {
  detail::require(!q_values.empty() && !r_values.empty(), "monotonicity_check: empty grid");
  detail::require(std::is_sorted(q_values.begin(), q_values.end()) && std::is_sorted(r_values.begin(), r_values.end()),
                  "monotonicity_check: q and r values must be ascending");
  MonotonicityReport rep;
  rep.q_values = q_values;
  rep.r_values = r_values;
  double lo = INFINITY, hi = -INFINITY;
  for (double q : q_values) {
    std::vector<double> row;
    for (double r : r_values) {
      if (!(q < r)) throw DomainError("monotonicity_check: every q must be below every r");
      row.push_back(estimate_gn_constant({n, p, q, r}, budget).value);
      lo = std::min(lo, row.back());
      hi = std::max(hi, row.back());
    }
    rep.estimates.push_back(std::move(row));
  }
  rep.noise_band = noise_fraction * (hi - lo);
  const std::size_t nq = q_values.size(), nr = r_values.size();
  for (std::size_t i1 = 0; i1 < nq; ++i1)
    for (std::size_t j1 = 0; j1 < nr; ++j1)
      for (std::size_t i2 = i1; i2 < nq; ++i2)
        for (std::size_t j2 = j1; j2 < nr; ++j2) {
          const double excess = rep.estimates[i1][j1] - rep.estimates[i2][j2];
          if (excess <= 0.0) continue;
          rep.max_violation = std::max(rep.max_violation, excess);
          (excess <= rep.noise_band ? rep.soft_violations : rep.hard_violations) += 1;
        }
  return rep;
}

/// True when the gap column decreases along the scan, allowing upticks of at
/// most `noise` times the previous gap.
inline bool gap_trend_ok(const std::vector<LimitScanRow>& rows, double noise = 0.1) {
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].gap > rows[i - 1].gap + noise * std::abs(rows[i - 1].gap)) return false;
  return true;
}

}  // namespace sharpent
