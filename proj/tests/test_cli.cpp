#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace sharpent;

namespace {

struct Outcome {
  int code = 0;
  std::string out, err;
  Json doc;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sharpent");
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  if (!o.out.empty() && o.out.front() == '{') o.doc = Json::parse(o.out);
  return o;
}

}  // namespace

TEST(Cli, ConstantsExample) {
  const auto o = run_cli({"constants", "--n", "3", "--p", "2"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.doc["tool"], "sharpent");
  EXPECT_EQ(o.doc["version"], kVersion);
  EXPECT_EQ(o.doc["command"], "constants");
  EXPECT_NEAR(o.doc["result"]["entropy_constant"].get<double>(), 2.0 / (3.0 * std::numbers::pi * std::numbers::e), 1e-16);
  EXPECT_NEAR(o.doc["result"]["entropy_constant_times_n_pi_e"].get<double>(), 2.0, 1e-13);
  EXPECT_FALSE(o.doc.contains("error"));
}

TEST(Cli, DeficitExample) {
  const auto o = run_cli({"deficit", "--n", "3", "--p", "2", "--b", "1"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NEAR(o.doc["result"]["deficit"].get<double>(), 0.0, 1e-6);
}

TEST(Cli, HeatNormExample) {
  const auto o = run_cli({"heat-norm", "--n", "1", "--scale", "6.2832", "--t", "0.01"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NEAR(o.doc["result"]["ratio"].get<double>(), 1.0, 1e-12);
}

TEST(Cli, EmbedsResolvedConfiguration) {
  const auto o = run_cli({"minimize", "--model", "torus", "--C", "2", "--q", "1.8", "--nodes", "101", "--seed", "9"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto& cfg = o.doc["config"];
  EXPECT_EQ(cfg["model"]["kind"], "torus");
  EXPECT_DOUBLE_EQ(cfg["C"].get<double>(), 2.0);
  EXPECT_DOUBLE_EQ(cfg["q"].get<double>(), 1.8);
  EXPECT_EQ(cfg["nodes"].get<int>(), 101);
  EXPECT_EQ(cfg["seed"].get<int>(), 9);
  EXPECT_TRUE(cfg.contains("tol"));
  EXPECT_NEAR(o.doc["result"]["lp_norm"].get<double>(), 1.0, 1e-10);
}

TEST(Cli, DeterministicOutput) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"deficit", "--samples", "20", "--seed", "5"},
        std::vector<std::string>{"minimize", "--C", "3", "--seed", "4"},
        std::vector<std::string>{"witness", "--A", "0.07"}}) {
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(Cli, SeedChangesSampledProfiles) {
  const auto a = run_cli({"deficit", "--samples", "5", "--seed", "1"});
  const auto b = run_cli({"deficit", "--samples", "5", "--seed", "2"});
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  EXPECT_NE(a.doc["result"]["samples"], b.doc["result"]["samples"]);
}

TEST(Cli, UsageErrorExits64) {
  const auto o = run_cli({"constants", "--bogus-flag"});
  EXPECT_EQ(o.code, 64);
  EXPECT_NE(o.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run_cli({}).code, 64);
  EXPECT_EQ(run_cli({"no-such-command"}).code, 64);
  EXPECT_EQ(run_cli({"bubble", "--model", "cube"}).code, 64);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run_cli({"--help"}).code, 0); }

TEST(Cli, DomainErrorExits1) {
  const auto o = run_cli({"constants", "--n", "1"});
  EXPECT_EQ(o.code, 1);
  EXPECT_EQ(o.doc["error"]["kind"], "domain_error");
  EXPECT_EQ(run_cli({"hc", "--q-to", "abc"}).code, 1);
  EXPECT_EQ(run_cli({"hc", "--q-to", "1e999"}).code, 1);
  EXPECT_EQ(run_cli({"bubble", "--eps-grid", "0.5,0.4,0.3,0.2,0.1"}).code, 1);
}

TEST(Cli, NonConvergenceExits2) {
  const auto o = run_cli({"minimize", "--C", "5", "--tol", "1e-300", "--nodes", "41"});
  EXPECT_EQ(o.code, 2);
  EXPECT_EQ(o.doc["error"]["kind"], "non_convergence");
}

TEST(Cli, PropertyFailureExits3) {
  const double A = 0.9 * entropy_best_constant(3, 2.0);
  const auto found = run_cli({"witness", "--A", std::to_string(A), "--expect", "none"});
  EXPECT_EQ(found.code, 3);
  EXPECT_EQ(found.doc["error"]["kind"], "property_failure");
  EXPECT_TRUE(found.doc["result"]["violated"].get<bool>());
  const auto missing = run_cli({"witness", "--B", "10", "--expect", "violation"});
  EXPECT_EQ(missing.code, 3);
  EXPECT_EQ(run_cli({"witness", "--A", std::to_string(A), "--expect", "violation"}).code, 0);
}

TEST(Cli, SemigroupDefaultsPass) {
  const auto o = run_cli({"hc"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(o.doc["result"]["all_pass"].get<bool>());
  EXPECT_EQ(o.doc["config"]["q_to"], "inf");
  EXPECT_TRUE(o.doc["result"].contains("ultracontractivity"));
}

TEST(Cli, CsvProjection) {
  const auto path = (std::filesystem::temp_directory_path() / "sharpent_cli_test.csv").string();
  std::filesystem::remove(path);
  const auto o = run_cli({"bubble", "--out", path});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.doc["result"]["csv"], path);
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, "epsilon,mass_p,entropy,grad_p");
  std::size_t rows = 0;
  for (std::string line; std::getline(f, line);) ++rows;
  EXPECT_EQ(rows, o.doc["result"]["values"].size());
  std::filesystem::remove(path);
}

TEST(Cli, EverySubcommandRuns) {
  for (const std::vector<std::string>& args : {
           std::vector<std::string>{"extremal", "--p", "1.5"},
           std::vector<std::string>{"gn-estimate", "--q", "1.5", "--r", "3"},
           std::vector<std::string>{"gn-limit", "--q-list", "1.5,1.9"},
           std::vector<std::string>{"bubble", "--model", "torus"},
           std::vector<std::string>{"nu-scan", "--q-list", "1.8,1.9", "--C", "2", "--skip-gn"},
       }) {
    const auto o = run_cli(args);
    EXPECT_EQ(o.code, 0) << args[0] << ": " << o.err;
    EXPECT_TRUE(o.doc.contains("result")) << args[0];
  }
}
