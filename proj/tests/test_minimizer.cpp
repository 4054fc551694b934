#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "sharpent/minimizer.hpp"

using namespace sharpent;

namespace {

double lp_norm(const SymmetricManifoldProfile& u, double p) { return std::pow(lp_integral(u, p), 1.0 / p); }

struct Case {
  ManifoldKind kind;
  double p, q, C;
};

void PrintTo(const Case& c, std::ostream* os) {
  *os << to_string(c.kind) << " p=" << c.p << " q=" << c.q << " C=" << c.C;
}

ManifoldModel model_of(ManifoldKind kind) {
  return kind == ManifoldKind::sphere ? ManifoldModel::sphere(3) : ManifoldModel::torus(3);
}

std::string case_name(const ::testing::TestParamInfo<Case>& info) {
  auto tag = [](double x) {
    std::string s = std::to_string(x);
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') s.pop_back();
    for (char& c : s)
      if (c == '.') c = '_';
    return s;
  };
  return std::string(to_string(info.param.kind)) + "_p" + tag(info.param.p) + "_q" + tag(info.param.q) + "_C" +
         tag(info.param.C);
}

}  // namespace

class MinimizerIdentities : public ::testing::TestWithParam<Case> {};

TEST_P(MinimizerIdentities, ConvergedMinimizerSatisfiesIdentities) {
  const auto [kind, p, q, C] = GetParam();
  const auto model = model_of(kind);
  const auto res = minimize_Jq(model, p, q, C);
  const double scale = std::max(1.0, std::abs(res.nu));
  EXPECT_NEAR(lp_norm(res.profile, p), 1.0, 1e-10);
  EXPECT_NEAR(res.Bq * res.q_integral, res.nu, 1e-10 * scale);
  EXPECT_NEAR(functional_Jq(res.profile, p, q, C), res.nu, 1e-12 * scale);
  EXPECT_LE(res.el_residual, 1e-6);
  EXPECT_LE(res.nu, constant_ceiling(model, p, q, C) * (1.0 + 1e-12));
  for (double v : res.profile.values) EXPECT_GE(v, 0.0);

  // Testing the discrete Euler-Lagrange system against u itself.
  const auto terms = el_terms(res.profile, p, q, C);
  double paired = 0.0, size = 0.0;
  for (std::size_t i = 0; i < terms.residual.size(); ++i) {
    paired += terms.residual[i] * res.profile.values[i];
    size += terms.scale[i] * res.profile.values[i];
  }
  EXPECT_LE(std::abs(paired), 1e-10 * size);
}

INSTANTIATE_TEST_SUITE_P(Cases, MinimizerIdentities,
                         ::testing::Values(Case{ManifoldKind::sphere, 2.0, 1.9, 0.5},
                                           Case{ManifoldKind::sphere, 2.0, 1.9, 5.0},
                                           Case{ManifoldKind::sphere, 2.0, 1.5, 3.0},
                                           Case{ManifoldKind::torus, 2.0, 1.9, 0.5},
                                           Case{ManifoldKind::torus, 2.0, 1.9, 5.0},
                                           Case{ManifoldKind::sphere, 1.5, 1.2, 1.0}),
                         case_name);

TEST(Minimizer, ZeroPenaltyGivesZero) {
  for (auto kind : {ManifoldKind::sphere, ManifoldKind::torus}) {
    const auto res = minimize_Jq(model_of(kind), 2.0, 1.9, 0.0);
    EXPECT_EQ(res.nu, 0.0);
    EXPECT_TRUE(res.from_constant);
    EXPECT_LE(res.el_residual, 1e-12);
    EXPECT_NEAR(lp_norm(res.profile, 2.0), 1.0, 1e-12);
  }
}

TEST(Minimizer, ConstantProfileHasClosedFormValue) {
  for (auto kind : {ManifoldKind::sphere, ManifoldKind::torus}) {
    const auto model = model_of(kind);
    auto grid = std::make_shared<const SymmetricGrid>(model, 101);
    const auto u = SymmetricManifoldProfile::constant(grid, std::pow(model.volume(), -0.5));
    EXPECT_NEAR(lp_norm(u, 2.0), 1.0, 1e-12);
    const double C = 2.5;
    EXPECT_NEAR(functional_Jq(u, 2.0, 1.7, C) / constant_ceiling(model, 2.0, 1.7, C), 1.0, 1e-12);
    EXPECT_LE(el_residual(u, 2.0, 1.7, C), 1e-12);
  }
}

TEST(Minimizer, FunctionalIsScaleInvariant) {
  const auto model = ManifoldModel::sphere(3);
  auto grid = std::make_shared<const SymmetricGrid>(model, 101);
  SymmetricManifoldProfile u{grid, {}};
  for (double t : grid->coords()) u.values.push_back(1.0 + 0.5 * std::cos(t) + 0.2 * std::cos(3.0 * t));
  for (double q : {1.2, 1.6, 1.9}) {
    const double base = functional_Jq(u, 2.0, q, 1.5);
    for (double c : {0.1, 7.0}) {
      auto v = u;
      for (double& x : v.values) x *= c;
      // J is homogeneous of degree p/theta in u.
      const double degree = 2.0 / theta_single(3, 2.0, q);
      EXPECT_NEAR(functional_Jq(v, 2.0, q, 1.5) / base, std::pow(c, degree), 1e-11 * std::pow(c, degree));
    }
  }
}

TEST(Minimizer, HistoryIsNonincreasing) {
  const auto res = minimize_Jq(ManifoldModel::sphere(3), 2.0, 1.9, 5.0);
  ASSERT_FALSE(res.history.empty());
  for (std::size_t i = 1; i < res.history.size(); ++i) EXPECT_LE(res.history[i], res.history[i - 1]);
  EXPECT_NEAR(res.history.back(), res.nu, 1e-12 * res.nu);
}

TEST(Minimizer, DeterministicForFixedSeed) {
  MinimizeConfig cfg;
  cfg.seed = 7;
  const auto a = minimize_Jq(ManifoldModel::torus(3), 2.0, 1.9, 2.0, cfg);
  const auto b = minimize_Jq(ManifoldModel::torus(3), 2.0, 1.9, 2.0, cfg);
  EXPECT_EQ(a.nu, b.nu);
  EXPECT_EQ(a.profile.values, b.profile.values);
}

TEST(Minimizer, SeedsAgreeOnValue) {
  const auto model = ManifoldModel::sphere(3);
  MinimizeConfig cfg;
  cfg.seed = 1;
  const double ref = minimize_Jq(model, 2.0, 1.9, 5.0, cfg).nu;
  for (std::uint64_t seed : {2u, 3u}) {
    cfg.seed = seed;
    EXPECT_NEAR(minimize_Jq(model, 2.0, 1.9, 5.0, cfg).nu / ref, 1.0, 1e-6);
  }
}

class NuInPenalty : public ::testing::TestWithParam<ManifoldKind> {};

// nu(C) is an infimum of functions affine in C, hence nondecreasing and concave.
TEST_P(NuInPenalty, NondecreasingAndConcave) {
  const auto model = model_of(GetParam());
  const std::vector<double> Cs{0.0, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0};
  std::vector<double> nu;
  for (double C : Cs) nu.push_back(minimize_Jq(model, 2.0, 1.9, C).nu);
  for (std::size_t i = 1; i < Cs.size(); ++i) EXPECT_GE(nu[i], nu[i - 1] * (1.0 - 1e-9)) << "C=" << Cs[i];
  for (std::size_t i = 1; i + 1 < Cs.size(); ++i) {
    const double w = (Cs[i] - Cs[i - 1]) / (Cs[i + 1] - Cs[i - 1]);
    const double chord = (1.0 - w) * nu[i - 1] + w * nu[i + 1];
    EXPECT_GE(nu[i], chord * (1.0 - 1e-6)) << "C=" << Cs[i];
  }
}

INSTANTIATE_TEST_SUITE_P(Models, NuInPenalty, ::testing::Values(ManifoldKind::sphere, ManifoldKind::torus),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(NuScan, EmptyListGivesEmptyTable) { EXPECT_TRUE(nu_limit_scan(ManifoldModel::sphere(3), 2.0, {}, 1.0).empty()); }

TEST(NuScan, ZeroPenaltyOnTorusIsZero) {
  NuScanOptions opt;
  opt.compare_gn = false;
  for (const auto& row : nu_limit_scan(ManifoldModel::torus(3), 2.0, {1.5, 1.7, 1.9}, 0.0, opt)) {
    EXPECT_EQ(row.nu, 0.0);
    EXPECT_EQ(row.constant_ceiling, 0.0);
  }
}

TEST(NuScan, ReportsBothCeilings) {
  for (double C : {0.5, 10.0}) {
    const auto rows = nu_limit_scan(ManifoldModel::sphere(3), 2.0, {1.7, 1.9}, C);
    ASSERT_EQ(rows.size(), 2u);
    for (const auto& row : rows) {
      EXPECT_LE(row.nu, row.constant_ceiling * (1.0 + 1e-12));
      ASSERT_TRUE(row.gn_ceiling.has_value());
      EXPECT_EQ(row.below_gn_ceiling, row.nu <= *row.gn_ceiling * (1.0 + 1e-6));
      // A small penalty keeps the constant profile itself below the Euclidean ceiling.
      if (C == 0.5) {
        EXPECT_TRUE(row.below_gn_ceiling);
      }
      EXPECT_LE(row.el_residual, 1e-6);
    }
  }
}

TEST(Minimizer, RejectsInvalidInputs) {
  const auto s = ManifoldModel::sphere(3);
  EXPECT_THROW(minimize_Jq(s, 2.5, 1.9, 1.0), DomainError);
  EXPECT_THROW(minimize_Jq(s, 2.0, 2.0, 1.0), DomainError);
  EXPECT_THROW(minimize_Jq(s, 2.0, 0.5, 1.0), DomainError);
  EXPECT_THROW(minimize_Jq(s, 2.0, 1.9, -1.0), DomainError);
  MinimizeConfig cfg;
  cfg.nodes = 3;
  EXPECT_THROW(minimize_Jq(s, 2.0, 1.9, 1.0, cfg), GridTooCoarse);
  cfg = {};
  cfg.initial = {1.0, 2.0};
  EXPECT_THROW(minimize_Jq(s, 2.0, 1.9, 1.0, cfg), DomainError);
}

TEST(Minimizer, WarmStartReproducesMinimum) {
  const auto model = ManifoldModel::torus(3);
  const auto cold = minimize_Jq(model, 2.0, 1.9, 3.0);
  MinimizeConfig cfg;
  cfg.initial = cold.profile.values;
  const auto warm = minimize_Jq(model, 2.0, 1.9, 3.0, cfg);
  EXPECT_NEAR(warm.nu / cold.nu, 1.0, 1e-7);
  EXPECT_EQ(warm.start, "initial");
}
