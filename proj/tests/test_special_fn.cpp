#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sharpent/random.hpp"
#include "sharpent/special_fn.hpp"

using namespace sharpent;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(LogGamma, IntegerPointsAreZero) {
  EXPECT_EQ(log_gamma(1.0), 0.0);
  EXPECT_EQ(log_gamma(2.0), 0.0);
}

TEST(LogGamma, HalfIsLogSqrtPi) {
  // Independent route: Gamma(1/2) = sqrt(pi).
  EXPECT_NEAR(log_gamma(0.5), 0.5 * std::log(kPi), 1e-15);
  EXPECT_NEAR(log_gamma(0.5), 0.57236494292470008, 1e-15);
}

TEST(LogGamma, RejectsNonPositive) {
  EXPECT_THROW(log_gamma(0.0), DomainError);
  EXPECT_THROW(log_gamma(-1.5), DomainError);
  EXPECT_THROW(log_gamma(std::nan("")), DomainError);
}

TEST(LogGamma, RecurrenceOnSampledArguments) {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const double x = rng.uniform(0.5, 100.0);
    EXPECT_NEAR(log_gamma(x + 1.0) - log_gamma(x), std::log(x), 1e-12) << "x=" << x;
  }
}

TEST(LogGamma, DuplicationFormulaOnSampledArguments) {
  Rng rng(12);
  for (int i = 0; i < 500; ++i) {
    const double x = rng.uniform(0.5, 50.0);
    const double rhs = log_gamma(x) + log_gamma(x + 0.5) + (2.0 * x - 1.0) * std::log(2.0) - 0.5 * std::log(kPi);
    EXPECT_NEAR(log_gamma(2.0 * x), rhs, 1e-11) << "x=" << x;
  }
}

TEST(SphereArea, LowDimensions) {
  EXPECT_NEAR(sphere_area(1), 2.0, 1e-15);
  EXPECT_NEAR(sphere_area(2), 2.0 * kPi, 1e-14);
  EXPECT_NEAR(sphere_area(3), 4.0 * kPi, 1e-14);
  EXPECT_NEAR(sphere_area(4), 2.0 * kPi * kPi, 1e-13);
  EXPECT_THROW(sphere_area(0), DomainError);
}

TEST(SphereArea, RecursionInDimension) {
  // |S^{n+1}| = 2 pi |S^{n-1}| / n in this indexing.
  for (int n = 1; n < 20; ++n) EXPECT_NEAR(sphere_area(n + 2) / sphere_area(n), 2.0 * kPi / n, 1e-12);
}

TEST(StretchedExpMoment, ClosedFormExamples) {
  EXPECT_NEAR(stretched_exp_moment(0.0, 1.0, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(stretched_exp_moment(2.0, 2.0, 1.0), std::sqrt(kPi) / 4.0, 1e-15);
  EXPECT_NEAR(stretched_exp_moment(0.0, 2.0, 2.0), std::sqrt(kPi / 2.0) / 2.0, 1e-15);
}

TEST(StretchedExpMoment, RejectsInvalidParameters) {
  EXPECT_THROW(stretched_exp_moment(-0.1, 1.0, 1.0), DomainError);
  EXPECT_THROW(stretched_exp_moment(0.0, 0.0, 1.0), DomainError);
  EXPECT_THROW(stretched_exp_moment(0.0, 1.0, -1.0), DomainError);
}

TEST(StretchedExpMoment, MatchesAdaptiveQuadratureOnRandomParameters) {
  Rng rng(13);
  for (int i = 0; i < 50; ++i) {
    const double m = rng.uniform(0.0, 6.0);
    const double s = rng.uniform(1.0, 4.0);
    const double c = rng.log_uniform(0.2, 5.0);
    const auto q = integrate_semi_infinite([&](double r) { return std::pow(r, m) * std::exp(-c * std::pow(r, s)); });
    const double exact = stretched_exp_moment(m, s, c);
    EXPECT_NEAR(q.value / exact, 1.0, 1e-9) << "m=" << m << " s=" << s << " c=" << c;
  }
}

TEST(Integrate, PolynomialAndEndpointSingularity) {
  EXPECT_NEAR(integrate([](double x) { return x * x; }, 0.0, 3.0).value, 9.0, 1e-13);
  // Integrable 1/sqrt singularity at the left endpoint.
  EXPECT_NEAR(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0).value, 2.0, 1e-10);
}

TEST(Integrate, ReportsNonConvergenceWhenBudgetTooSmall) {
  Accuracy acc;
  acc.max_subdivisions = 1;
  EXPECT_THROW(integrate([](double x) { return std::sin(1.0 / x); }, 1e-3, 1.0, acc), NonConvergence);
}

TEST(Integrate, ValidatesAccuracy) {
  Accuracy acc;
  acc.rel_tol = 0.0;
  EXPECT_THROW(integrate([](double x) { return x; }, 0.0, 1.0, acc), DomainError);
}
