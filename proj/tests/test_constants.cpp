#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sharpent/constants.hpp"
#include "sharpent/special_fn.hpp"

using namespace sharpent;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;
}  // namespace

TEST(EntropyConstant, QuadraticCaseIdentity) {
  for (int n = 2; n <= 10; ++n)
    EXPECT_NEAR(entropy_best_constant(n, 2.0) * n * kPi * kE, 2.0, 1e-13) << "n=" << n;
}

TEST(EntropyConstant, ThreeDimensionalQuadraticDecimal) {
  // 2 / (3 pi e) evaluated independently.
  EXPECT_NEAR(entropy_best_constant(3, 2.0), 0.078066442032425548, 1e-16);  // 30-digit reference
}

TEST(EntropyConstant, GoldenValueAtThreeHalves) {
  // Direct evaluation of the Gamma formula with independently computed pieces:
  // (p/n) ((p-1)/e)^{p-1} pi^{-p/2} (Gamma(n/2+1)/Gamma(n(p-1)/p+1))^{p/n}, n=3, p=3/2.
  const double n = 3.0, p = 1.5;
  const double gamma_ratio = std::tgamma(2.5) / std::tgamma(2.0);
  const double expected =
      (p / n) * std::pow((p - 1.0) / kE, p - 1.0) * std::pow(kPi, -p / 2.0) * std::pow(gamma_ratio, p / n);
  EXPECT_NEAR(entropy_best_constant(3, 1.5) / expected, 1.0, 1e-13);
  EXPECT_NEAR(entropy_best_constant(3, 1.5), 0.10477639720285214, 1e-15);  // 30-digit reference
}

TEST(EntropyConstant, RejectsOutsideDomain) {
  EXPECT_THROW(entropy_best_constant(1, 2.0), DomainError);
  EXPECT_THROW(entropy_best_constant(3, 1.0), DomainError);
}

TEST(SobolevConstant, GoldenValues) {
  // Sharp L^2 Sobolev constant squared: 4 / (n (n-2) |S^n|^{2/n}).
  for (int n : {3, 4}) {
    const double area = 2.0 * std::pow(kPi, (n + 1) / 2.0) / std::tgamma((n + 1) / 2.0);
    const double expected = 4.0 / (n * (n - 2.0) * std::pow(area, 2.0 / n));
    EXPECT_NEAR(sobolev_bound_constant(n, 2.0) / expected, 1.0, 1e-13) << "n=" << n;
  }
}

TEST(SobolevConstant, BoundsTheEntropyConstant) {
  EXPECT_LT(entropy_best_constant(3, 2.0), sobolev_bound_constant(3, 2.0));
  for (int n : {3, 4, 5})
    for (int k = 1; k <= 9; ++k) {
      const double p = 1.0 + 0.1 * k;
      EXPECT_LE(entropy_best_constant(n, p), sobolev_bound_constant(n, p)) << "n=" << n << " p=" << p;
    }
}

TEST(SobolevConstant, RejectsSupercritical) {
  EXPECT_THROW(sobolev_bound_constant(3, 3.0), DomainError);
  EXPECT_THROW(critical_exponent(2, 2.0), DomainError);
}

TEST(DerivedExponents, DegenerateEqualExponents) {
  const auto d = derived_exponents({3, 2.0, 2.0, 2.0});
  EXPECT_TRUE(d.degenerate);
  EXPECT_EQ(d.theta, 0.0);
  EXPECT_EQ(d.alpha, 1.0);
}

TEST(DerivedExponents, CriticalUpperExponentGivesThetaOne) {
  EXPECT_NEAR(derived_exponents({3, 2.0, 1.0, 6.0}).theta, 1.0, 1e-15);
}

TEST(DerivedExponents, RationalExample) {
  EXPECT_NEAR(derived_exponents({3, 2.0, 1.0, 2.0}).theta, 3.0 / 5.0, 1e-15);
}

TEST(DerivedExponents, AlphaEndpoints) {
  for (int n : {3, 4, 6})
    for (double p : {1.2, 1.5, 2.0}) {
      const double ps = critical_exponent(n, p);
      EXPECT_NEAR(derived_exponents({n, p, p, ps}).alpha, 1.0, 1e-14);
      EXPECT_NEAR(derived_exponents({n, p, ps, ps}).alpha, 0.0, 1e-14);
    }
}

TEST(DerivedExponents, ThetaInUnitIntervalAndIncreasingInR) {
  for (int n : {3, 4, 5})
    for (double p : {1.3, 1.7, 2.0}) {
      const double ps = critical_exponent(n, p);
      for (double q = 1.0; q < ps; q += 0.25) {
        double prev = 0.0;
        for (int k = 1; k <= 20; ++k) {
          const double r = q + (ps - q) * k / 20.0;
          const double theta = derived_exponents({n, p, q, r}).theta;
          EXPECT_GT(theta, 0.0);
          EXPECT_LE(theta, 1.0 + 1e-14);
          EXPECT_GT(theta, prev);
          prev = theta;
        }
      }
    }
}

TEST(DerivedExponents, SingleExponentFamilyMatchesShortcut) {
  for (double q : {1.0, 1.5, 1.9, 1.99})
    EXPECT_NEAR(derived_exponents({3, 2.0, q, 2.0}).theta, theta_single(3, 2.0, q), 1e-15);
}

TEST(DerivedExponents, RejectsInvalidOrdering) {
  EXPECT_THROW(derived_exponents({3, 2.0, 0.5, 2.0}), DomainError);
  EXPECT_THROW(derived_exponents({3, 2.0, 3.0, 2.5}), DomainError);
  EXPECT_THROW(derived_exponents({3, 2.0, 1.0, 7.0}), DomainError);
}

TEST(DpdParameters, Examples) {
  auto a = dpd_parameters(2.0, 3.0);
  EXPECT_DOUBLE_EQ(a.q, 3.0);
  EXPECT_DOUBLE_EQ(a.r, 4.0);
  auto b = dpd_parameters(1.5, 2.0);
  EXPECT_DOUBLE_EQ(b.q, 2.0);
  EXPECT_DOUBLE_EQ(b.r, 3.0);
  auto c = dpd_parameters(2.0, 2.0 + 1e-9);
  EXPECT_NEAR(c.r, 2.0, 1e-8);
  EXPECT_THROW(dpd_parameters(2.0, 2.0), DomainError);
}
