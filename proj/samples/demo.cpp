// Walks through the library on its standard cases and prints a short summary.

#include <cstdio>
#include <limits>

#include "sharpent/sharpent.hpp"

int main() {
  using namespace sharpent;
  const int n = 3;
  const double p = 2.0;

  const double A0 = entropy_best_constant(n, p);
  std::printf("entropy constant (n=%d, p=%.1f): %.12f\n", n, p, A0);

  const auto ext = extremal_profile(n, p, 1.0);
  std::printf("deficit of the extremal: %.3e\n", entropy_deficit(ext.profile, p));

  const auto est = estimate_gn_constant({n, p, 1.99, p});
  std::printf("GN constant at q=1.99: %.8f (gap %.3e)\n", est.value, (A0 - est.value) / A0);

  const auto fit = fit_expansion(ManifoldModel::sphere(n), p, {});
  std::printf("sphere mass coefficient: %.8f (target %.8f)\n", fit.mass_eps2.value, fit.mass_eps2.target);

  const auto wit = lower_bound_witness(ManifoldModel::sphere(n), p, 0.9 * A0, 0.0);
  std::printf("witness at 0.9 A0: violated=%d margin=%.6f (limit %.6f)\n", wit.violated, wit.margin,
              wit.asymptotic_margin);

  const auto res = minimize_Jq(ManifoldModel::torus(n), p, 1.9, 5.0);
  std::printf("torus minimum nu=%.8f after %d iterations, residual %.2e\n", res.nu, res.iterations,
              res.el_residual);

  const auto hc = bakry_integrals(n, A0, 1.0, 10.0, 1.0, std::numeric_limits<double>::infinity());
  std::printf("semigroup time t=%.12f (closed form %.12f)\n", hc.t, hc.t_closed);

  const auto heat = torus_heat_norm(1, 2.0 * 3.141592653589793, 0.01);
  std::printf("torus heat ratio at t=0.01: %.15f\n", heat.ratio);
  return 0;
}
