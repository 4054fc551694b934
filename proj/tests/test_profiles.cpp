#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sharpent/constants.hpp"
#include "sharpent/profiles.hpp"
#include "sharpent/random.hpp"

using namespace sharpent;

namespace {

constexpr double kPi = std::numbers::pi;

RadialProfile gaussian(int n, double npd = 1000.0) {
  auto grid = RadialGrid::with_density(1e-6, 6.5, npd);
  return RadialProfile::sample(grid, n, [](double r) { return std::exp(-r * r); });
}

struct Case {
  int n;
  double p;
};
const Case kCases[] = {{3, 1.5}, {3, 2.0}, {4, 2.0}};

}  // namespace

TEST(RadialGrid, RejectsBadConstruction) {
  EXPECT_THROW(RadialGrid(1e-6, 1.0, 2), GridTooCoarse);
  EXPECT_THROW(RadialGrid(0.0, 1.0, 10), DomainError);
  EXPECT_THROW(RadialGrid(2.0, 1.0, 10), DomainError);
}

TEST(RadialGrid, OddNodeCountAndEndpoints) {
  auto g = RadialGrid::with_density(1e-6, 10.0, 333.0);
  EXPECT_EQ(g->size() % 2, 1u);
  EXPECT_DOUBLE_EQ(g->radii().front(), 1e-6);
  EXPECT_DOUBLE_EQ(g->radii().back(), 10.0);
}

TEST(RadialGrid, WeightsIntegrateSmoothFunctionsAtSecondOrder) {
  auto integral = [](const RadialGrid& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g.weights()[i] * g.radii()[i] * g.radii()[i];
    return s;
  };
  const double exact = (8.0 - 1e-9) / 3.0;
  auto g = RadialGrid::with_density(1e-3, 2.0, 200.0);
  const double e0 = std::abs(integral(*g) - exact);
  const double e1 = std::abs(integral(*g->refined()) - exact);
  EXPECT_LT(e0 / exact, 1e-7);
  EXPECT_GT(e0 / e1, 3.5);
}

TEST(RadialProfile, RejectsNegativeOrNonFinite) {
  auto g = RadialGrid::with_density(1e-3, 1.0, 10.0);
  EXPECT_THROW(RadialProfile::sample(g, 3, [](double) { return -1.0; }), DomainError);
  EXPECT_THROW(RadialProfile::sample(g, 3, [](double) { return std::nan(""); }), DomainError);
}

TEST(LpNorm, ZeroProfile) {
  auto g = RadialGrid::with_density(1e-3, 1.0, 50.0);
  const auto z = RadialProfile::sample(g, 3, [](double) { return 0.0; });
  EXPECT_EQ(lp_norm(z, 2.0), 0.0);
  EXPECT_EQ(entropy_integral(z, 2.0), 0.0);
  EXPECT_EQ(weighted_moment(z, 2.0, 2), 0.0);
  EXPECT_EQ(grad_lp_norm_p(z, 2.0), 0.0);
  EXPECT_THROW(normalized(z, 2.0), DegenerateProfile);
}

TEST(LpNorm, GaussianInThreeDimensions) {
  // |u|_2^2 = 4 pi Gamma(3/2) / (2 2^{3/2}) = (pi/2)^{3/2}
  const double oracle = std::pow(4.0 * kPi * stretched_exp_moment(2.0, 2.0, 2.0), 0.5);
  EXPECT_NEAR(oracle, std::pow(kPi / 2.0, 0.75), 1e-14);
  EXPECT_NEAR(lp_norm(gaussian(3), 2.0), oracle, 1e-10);
}

TEST(LpNorm, PositiveHomogeneity) {
  Rng rng(21);
  const auto u = sample_mixture(random_mixture(rng), 3);
  for (double c : {0.1, 2.0, 37.5})
    for (double p : {1.2, 2.0, 3.0}) EXPECT_NEAR(lp_norm(u.scaled(c), p) / (c * lp_norm(u, p)), 1.0, 1e-13);
}

TEST(GradNorm, ConstantProfileHasNoEnergy) {
  auto g = RadialGrid::with_density(1e-3, 1.0, 50.0);
  EXPECT_EQ(grad_lp_norm_p(RadialProfile::sample(g, 3, [](double) { return 2.0; }), 2.0), 0.0);
}

TEST(GradNorm, GaussianMatchesMomentOracle) {
  // |u'|^2 = 4 r^2 e^{-2r^2}: integral = 4 pi * 4 * moment(4, 2, 2) = 3 (pi/2)^{3/2}.
  const double oracle = 4.0 * kPi * 4.0 * stretched_exp_moment(4.0, 2.0, 2.0);
  EXPECT_NEAR(oracle, 3.0 * std::pow(kPi / 2.0, 1.5), 1e-13);
  EXPECT_NEAR(grad_lp_norm_p_extrapolated(gaussian(3), 2.0) / oracle, 1.0, 1e-9);
}

TEST(GradNorm, SecondOrderConvergenceUnderRefinement) {
  const double oracle = 4.0 * kPi * 4.0 * stretched_exp_moment(4.0, 2.0, 2.0);
  const auto coarse = gaussian(3, 50.0);
  const auto fine = RadialProfile::sample(coarse.grid().refined(), 3, [](double r) { return std::exp(-r * r); });
  const double e0 = std::abs(grad_lp_norm_p(coarse, 2.0) - oracle);
  const double e1 = std::abs(grad_lp_norm_p(fine, 2.0) - oracle);
  EXPECT_GT(e0 / e1, 3.5);
}

TEST(WeightedMoment, ZeroOrderIsMass) {
  const auto u = gaussian(3);
  EXPECT_NEAR(weighted_moment(u, 2.0, 0), std::pow(lp_norm(u, 2.0), 2.0), 1e-14);
  EXPECT_THROW(weighted_moment(u, 2.0, -1), DomainError);
}

TEST(Extremal, AmplitudeExamples) {
  EXPECT_NEAR(extremal_spec(3, 2.0, 1.0).a, std::pow(2.0 / kPi, 0.75), 1e-14);
  // n=3, p=1.5: shape 3, a^{3/2} * 4 pi * moment(2, 3, 1.5) = 1.
  const auto e = extremal_spec(3, 1.5, 1.0);
  EXPECT_DOUBLE_EQ(e.shape(), 3.0);
  EXPECT_NEAR(std::pow(e.a, 1.5) * 4.0 * kPi * stretched_exp_moment(2.0, 3.0, 1.5), 1.0, 1e-14);
}

TEST(Extremal, UnitNormForSampledParameters) {
  Rng rng(22);
  for (int i = 0; i < 20; ++i) {
    const int n = 2 + static_cast<int>(rng.next() % 5);
    const double p = rng.uniform(1.2, 2.5);
    const double b = rng.log_uniform(0.2, 5.0);
    EXPECT_NEAR(lp_norm(extremal_profile(n, p, b).profile, p), 1.0, 1e-10) << n << ' ' << p << ' ' << b;
  }
}

TEST(Extremal, RejectsInvalidParameters) {
  EXPECT_THROW(extremal_profile(3, 1.0, 1.0), DomainError);
  EXPECT_THROW(extremal_profile(3, 2.0, 0.0), DomainError);
}

TEST(Entropy, DilationCovariance) {
  Rng rng(23);
  for (int i = 0; i < 10; ++i) {
    const auto u = normalized(sample_mixture(random_mixture(rng), 3), 2.0);
    for (double lambda : {0.5, 2.0, 3.7})
      EXPECT_NEAR(entropy_integral(u.dilated(lambda, 2.0), 2.0) - entropy_integral(u, 2.0) - 3.0 * std::log(lambda),
                  0.0, 1e-8);
  }
}

TEST(ComputeIJ, DualRouteAgreement) {
  for (const auto& c : kCases)
    for (double b : {0.5, 1.0, 2.0}) {
      const auto rep = compute_IJ(c.n, c.p, b);
      EXPECT_LE(rep.max_rel_diff, 1e-8) << c.n << ' ' << c.p << ' ' << b;
    }
}

TEST(ComputeIJ, SecondOrderRichardsonRatio) {
  for (const auto& c : kCases) {
    const auto rep = compute_IJ(c.n, c.p, 1.0);
    EXPECT_GE(rep.richardson_ratio, 3.5);
    EXPECT_LE(rep.richardson_ratio, 4.5);
  }
}

TEST(ComputeIJ, SaturationIdentity) {
  for (const auto& c : kCases) {
    const auto rep = compute_IJ(c.n, c.p, 1.0);
    const double A = entropy_best_constant(c.n, c.p);
    EXPECT_NEAR(rep.closed_form.I1 - (c.n / c.p) * std::log(A * rep.closed_form.I2), 0.0, 1e-12);
    EXPECT_NEAR(rep.quadrature.I1 - (c.n / c.p) * std::log(A * rep.quadrature.I2), 0.0, 1e-8);
  }
}

TEST(ComputeIJ, DeficitIndependentOfRate) {
  for (const auto& c : kCases) {
    const double A = entropy_best_constant(c.n, c.p);
    for (double b : {0.3, 1.0, 4.0}) {
      const auto v = ij_closed_form(extremal_spec(c.n, c.p, b));
      EXPECT_NEAR(v.I1 - (c.n / c.p) * std::log(A * v.I2), 0.0, 1e-12);
    }
  }
}

TEST(ComputeIJ, SecondMomentSigns) {
  for (const auto& c : kCases) {
    const auto v = compute_IJ(c.n, c.p, 1.0).closed_form;
    EXPECT_GT(v.J1, 0.0);
    EXPECT_GT(v.J2, 0.0);
    // The entropy density u^p log u^p is negative where u < 1; with a < 1 so is J3.
    ASSERT_LT(extremal_spec(c.n, c.p, 1.0).a, 1.0);
    EXPECT_LT(v.J3, 0.0);
  }
}

TEST(ComputeIJ, SecondMassMomentForGaussian) {
  // J1 for a^2 e^{-2 r^2} in R^3 with a = (2/pi)^{3/4}: a^2 4 pi moment(4, 2, 2).
  const double a = std::pow(2.0 / kPi, 0.75);
  const double oracle = a * a * 4.0 * kPi * stretched_exp_moment(4.0, 2.0, 2.0);
  EXPECT_NEAR(compute_IJ(3, 2.0, 1.0).quadrature.J1 / oracle, 1.0, 1e-9);
}

TEST(ComputeIJ, CoarseGridRaisesOracleDisagreement) {
  GridOptions opt;
  opt.nodes_per_decade = 5.0;
  EXPECT_THROW(compute_IJ(3, 2.0, 1.0, opt), OracleDisagreement);
}

TEST(ProfileCsv, HeaderAndRows) {
  auto g = RadialGrid::with_density(1e-3, 1.0, 4.0);
  std::ostringstream os;
  write_csv(os, RadialProfile::sample(g, 3, [](double r) { return r; }));
  const std::string s = os.str();
  EXPECT_EQ(s.rfind("r,u\n", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')), g->size() + 1);
}
