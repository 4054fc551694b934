#pragma once

// Command-line front end. Every subcommand prints one JSON document
//   {tool, version, command, config, result | error}
// to `out`. Exit codes: 0 ok, 1 domain error, 2 non-convergence,
// 3 property-check failure, 64 usage error.

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sharpent/report.hpp"
#include "sharpent/sharpent.hpp"

namespace sharpent::cli {

enum ExitCode : int { kOk = 0, kDomain = 1, kNonConvergence = 2, kPropertyFailure = 3, kUsage = 64 };

/// Signals a failed self-check; the partial result is still printed.
struct PropertyFailure {
  std::string message;
};

struct Options {
  int n = 3;
  double p = 2.0;
  std::optional<double> q;
  std::optional<double> r;
  double b = 1.0;
  std::vector<double> eps_grid;
  double C = 1.0;
  std::vector<double> lambda;
  std::string model = "sphere";
  std::optional<double> scale;
  std::uint64_t seed = 1;
  std::optional<double> tol;
  std::string out;
  double t = 0.01;
  std::optional<double> A;
  double B = 1.0;
  std::vector<double> q_list;
  double p_from = 1.0;
  std::string q_to = "inf";
  int samples = 0;
  std::string expect = "any";
  std::size_t nodes = 201;
  bool skip_gn = false;
  std::optional<double> delta;
};

namespace detail {

inline ManifoldModel model_of(const Options& o) {
  const auto kind = o.model == "torus" ? ManifoldKind::torus : ManifoldKind::sphere;
  const double scale = o.scale.value_or(kind == ManifoldKind::torus ? 2.0 * std::numbers::pi : 1.0);
  return ManifoldModel::make(kind, o.n, scale);
}

inline double parse_extended(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "+inf") return std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw DomainError("not a number: " + s);
  }
  if (pos != s.size()) throw DomainError("not a number: " + s);
  return v;
}

inline Json json_list(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(json_number(x));
  return a;
}

template <class T>
void maybe_write_csv(const Options& o, Json& result, const T& table) {
  if (o.out.empty()) return;
  std::ofstream f(o.out);
  if (!f) throw DomainError("cannot open --out file: " + o.out);
  write_csv(f, table);
  result["csv"] = o.out;
}

inline void check(bool ok, const std::string& what) {
  if (!ok) throw PropertyFailure{what};
}

// ---------------------------------------------------------------------------
// Subcommand bodies: fill config and result, throw on failure.

inline void cmd_constants(const Options& o, Json& config, Json& result) {
  config = {{"n", o.n}, {"p", o.p}};
  if (o.q) config["q"] = *o.q;
  if (o.r) config["r"] = *o.r;
  const double A = entropy_best_constant(o.n, o.p);
  result["entropy_constant"] = A;
  result["entropy_constant_times_n_pi_e"] = A * o.n * std::numbers::pi * std::numbers::e;
  if (o.p < o.n) {
    result["critical_exponent"] = critical_exponent(o.n, o.p);
    result["sobolev_bound_constant"] = sobolev_bound_constant(o.n, o.p);
  }
  if (o.q) {
    const InequalityParams params{o.n, o.p, *o.q, o.r.value_or(o.p)};
    result["exponents"] = to_json(derived_exponents(params));
  }
}

inline void cmd_extremal(const Options& o, Json& config, Json& result) {
  config = {{"n", o.n}, {"p", o.p}, {"b", o.b}};
  const auto ext = extremal_profile(o.n, o.p, o.b);
  result["amplitude"] = ext.spec.a;
  result["shape"] = ext.spec.shape();
  result["grid_nodes"] = ext.profile.size();
  result["lp_norm"] = lp_norm(ext.profile, o.p);
  result["ij"] = to_json(compute_IJ(o.n, o.p, o.b));
  maybe_write_csv(o, result, ext.profile);
}

inline void cmd_deficit(const Options& o, Json& config, Json& result) {
  const double tol = o.tol.value_or(1e-8);
  config = {{"n", o.n}, {"p", o.p}, {"b", o.b}, {"samples", o.samples}, {"seed", o.seed}, {"tol", tol}};
  const auto ext = extremal_profile(o.n, o.p, o.b);
  result["deficit"] = entropy_deficit(ext.profile, o.p);
  Rng rng(o.seed);
  Json rows = Json::array();
  double min_deficit = std::numeric_limits<double>::infinity();
  for (int i = 0; i < o.samples; ++i) {
    const auto m = random_mixture(rng);
    const double d = entropy_deficit(sample_mixture(m, o.n), o.p);
    min_deficit = std::min(min_deficit, d);
    rows.push_back(Json{{"profile", m.describe()}, {"deficit", d}});
  }
  if (o.samples > 0) {
    result["samples"] = rows;
    result["min_sample_deficit"] = min_deficit;
    check(min_deficit >= -tol, "a sampled profile has deficit below -tol");
  }
  check(result["deficit"].get<double>() >= -tol, "extremal deficit below -tol");
}

inline void cmd_gn_estimate(const Options& o, Json& config, Json& result) {
  const InequalityParams params{o.n, o.p, o.q.value_or(1.99), o.r.value_or(o.p)};
  config = {{"n", params.n}, {"p", params.p}, {"q", params.q}, {"r", params.r}};
  const auto est = estimate_gn_constant(params);
  result = to_json(est);
  if (params.r == params.p) {
    const double target = entropy_best_constant(o.n, o.p);
    result["entropy_constant"] = target;
    result["relative_gap"] = (target - est.value) / target;
  }
}

inline void cmd_gn_limit(const Options& o, Json& config, Json& result) {
  const std::vector<double> q_list = o.q_list.empty() ? std::vector<double>{1.7, 1.9, 1.99} : o.q_list;
  config = {{"n", o.n}, {"p", o.p}, {"q_list", json_list(q_list)}};
  const auto rows = limit_scan(o.n, o.p, q_list);
  Json arr = Json::array();
  for (const auto& r : rows) arr.push_back(to_json(r));
  result["entropy_constant"] = entropy_best_constant(o.n, o.p);
  result["rows"] = arr;
  result["gap_trend_ok"] = gap_trend_ok(rows);
  maybe_write_csv(o, result, rows);
  check(result["gap_trend_ok"].get<bool>(), "gap does not shrink as q approaches p");
}

inline void cmd_bubble(const Options& o, Json& config, Json& result) {
  const auto model = model_of(o);
  ExpansionOptions opt;
  opt.b = o.b;
  opt.delta = o.delta;
  config = {{"model", to_json(model)}, {"p", o.p}, {"b", o.b}, {"eps_grid", json_list(o.eps_grid)}};
  if (o.delta) config["delta"] = *o.delta;
  const auto rep = fit_expansion(model, o.p, o.eps_grid, opt);
  result = to_json(rep);
  maybe_write_csv(o, result, rep);
}

inline void cmd_witness(const Options& o, Json& config, Json& result) {
  const auto model = model_of(o);
  const double A0 = entropy_best_constant(o.n, o.p);
  const double A = o.A.value_or(A0);
  config = {{"model", to_json(model)}, {"p", o.p},  {"A", A},
            {"B", o.B},                {"b", o.b},  {"eps_grid", json_list(o.eps_grid)},
            {"expect", o.expect}};
  if (o.delta) config["delta"] = *o.delta;
  const auto rep = lower_bound_witness(model, o.p, A, o.B, o.eps_grid, o.b, o.delta);
  result = to_json(rep);
  result["entropy_constant"] = A0;
  maybe_write_csv(o, result, rep);
  if (o.expect == "violation") check(rep.violated, "expected a violation, none found");
  if (o.expect == "none") check(!rep.violated, "violation found where none was expected");
}

inline void cmd_minimize(const Options& o, Json& config, Json& result) {
  const auto model = model_of(o);
  const double q = o.q.value_or(1.9);
  MinimizeConfig mc;
  mc.nodes = o.nodes;
  mc.seed = o.seed;
  if (o.tol) mc.tol = *o.tol;
  config = {{"model", to_json(model)}, {"p", o.p},     {"q", q},         {"C", o.C},
            {"nodes", mc.nodes},       {"seed", o.seed}, {"tol", mc.tol}};
  const auto res = minimize_Jq(model, o.p, q, o.C, mc);
  result = to_json(res);
  const double ceiling = constant_ceiling(model, o.p, q, o.C);
  const double norm = std::pow(lp_integral(res.profile, o.p), 1.0 / o.p);
  result["constant_ceiling"] = ceiling;
  result["lp_norm"] = norm;
  maybe_write_csv(o, result, res.profile);
  check(std::abs(norm - 1.0) <= 1e-10, "minimizer is not unit in L^p");
  check(std::abs(res.Bq * res.q_integral - res.nu) <= 1e-10 * std::max(1.0, std::abs(res.nu)),
        "multiplier identity violated");
  check(res.nu <= ceiling * (1.0 + 1e-12), "nu exceeds the constant-profile value");
}

inline void cmd_nu_scan(const Options& o, Json& config, Json& result) {
  const auto model = model_of(o);
  const std::vector<double> q_list = o.q_list.empty() ? std::vector<double>{1.5, 1.7, 1.9} : o.q_list;
  NuScanOptions opt;
  opt.minimize.nodes = o.nodes;
  opt.minimize.seed = o.seed;
  if (o.tol) opt.minimize.tol = *o.tol;
  opt.compare_gn = !o.skip_gn;
  config = {{"model", to_json(model)}, {"p", o.p},          {"q_list", json_list(q_list)},
            {"C", o.C},                {"nodes", o.nodes},  {"seed", o.seed},
            {"tol", opt.minimize.tol}, {"compare_gn", opt.compare_gn}};
  const auto rows = nu_limit_scan(model, o.p, q_list, o.C, opt);
  Json arr = Json::array();
  for (const auto& r : rows) arr.push_back(to_json(r));
  result["rows"] = arr;
  maybe_write_csv(o, result, rows);
}

inline void cmd_hc(const Options& o, Json& config, Json& result) {
  const double A = o.A.value_or(entropy_best_constant(o.n, 2.0));
  const double q_to = parse_extended(o.q_to);
  // Default grid: multiples of the smallest admissible lambda B/(4A).
  std::vector<double> lambdas = o.lambda;
  if (lambdas.empty()) {
    const double floor = o.B > 0.0 ? o.B / (4.0 * A) : 1.0;
    for (double f : {1.0, 1.5, 2.0, 4.0, 8.0}) lambdas.push_back(f * floor);
  }
  config = {{"n", o.n},       {"A", A},
            {"B", o.B},       {"lambda", json_list(lambdas)},
            {"p_from", o.p_from}, {"q_to", json_number(q_to)}};
  Json rows = Json::array();
  bool all_pass = true;
  for (double lambda : lambdas) {
    const auto rep = bakry_integrals(o.n, A, o.B, lambda, o.p_from, q_to);
    all_pass = all_pass && rep.pass;
    rows.push_back(to_json(rep));
  }
  result["integrals"] = rows;
  if (o.p_from == 1.0 && std::isinf(q_to) && o.B > 0.0) {
    const auto ultra = ultracontractivity_check(o.n, A, o.B, lambdas);
    result["ultracontractivity"] = to_json(ultra);
    maybe_write_csv(o, result, ultra);
    all_pass = all_pass && ultra.all_pass;
  }
  result["all_pass"] = all_pass;
  check(all_pass, "semigroup integral check failed");
}

inline void cmd_heat_norm(const Options& o, Json& config, Json& result) {
  const double L = o.scale.value_or(2.0 * std::numbers::pi);
  config = {{"n", o.n}, {"scale", L}, {"t", o.t}};
  result = to_json(torus_heat_norm(o.n, L, o.t));
  result["euclidean_value"] = std::pow(4.0 * std::numbers::pi * o.t, -0.5 * o.n);
}

}  // namespace detail

/// Parses `args` (args[0] is the program name) and runs one subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sharp entropy and Gagliardo-Nirenberg inequality toolkit", "sharpent"};
  app.require_subcommand(1, 1);
  Options o;
  std::optional<double> q, r, scale, tol, A, delta;

  using Body = std::function<void(const Options&, Json&, Json&)>;
  std::vector<std::pair<CLI::App*, Body>> commands;

  auto sub = [&](const std::string& name, const std::string& help, Body body) {
    CLI::App* s = app.add_subcommand(name, help);
    commands.emplace_back(s, std::move(body));
    return s;
  };
  auto add_n = [&](CLI::App* s) { s->add_option("--n", o.n, "dimension")->capture_default_str(); };
  auto add_p = [&](CLI::App* s) { s->add_option("--p", o.p, "gradient exponent")->capture_default_str(); };
  auto add_q = [&](CLI::App* s) { s->add_option("--q", q, "lower Lebesgue exponent"); };
  auto add_r = [&](CLI::App* s) { s->add_option("--r", r, "upper Lebesgue exponent (default p)"); };
  auto add_b = [&](CLI::App* s) { s->add_option("--b", o.b, "extremal rate")->capture_default_str(); };
  auto add_model = [&](CLI::App* s) {
    s->add_option("--model", o.model, "sphere or torus")->check(CLI::IsMember({"sphere", "torus"}))->capture_default_str();
    s->add_option("--scale", scale, "sphere radius or torus side");
  };
  auto add_eps = [&](CLI::App* s) {
    s->add_option("--eps-grid", o.eps_grid, "comma-separated bubble widths")->delimiter(',');
    s->add_option("--delta", delta, "cutoff radius");
  };
  auto add_seed = [&](CLI::App* s) { s->add_option("--seed", o.seed, "random seed")->capture_default_str(); };
  auto add_tol = [&](CLI::App* s) { s->add_option("--tol", tol, "tolerance"); };
  auto add_out = [&](CLI::App* s) { s->add_option("--out", o.out, "CSV output path"); };
  auto add_qlist = [&](CLI::App* s) { s->add_option("--q-list", o.q_list, "comma-separated q values")->delimiter(','); };
  auto add_nodes = [&](CLI::App* s) { s->add_option("--nodes", o.nodes, "mesh nodes")->capture_default_str(); };

  auto* c = sub("constants", "sharp constants and exponents", detail::cmd_constants);
  add_n(c), add_p(c), add_q(c), add_r(c);

  c = sub("extremal", "extremal profile and its moment integrals", detail::cmd_extremal);
  add_n(c), add_p(c), add_b(c), add_out(c);

  c = sub("deficit", "entropy deficit of the extremal and of random profiles", detail::cmd_deficit);
  add_n(c), add_p(c), add_b(c), add_seed(c), add_tol(c);
  c->add_option("--samples", o.samples, "random trial profiles")->capture_default_str();

  c = sub("gn-estimate", "estimate a Gagliardo-Nirenberg constant", detail::cmd_gn_estimate);
  add_n(c), add_p(c), add_q(c), add_r(c);

  c = sub("gn-limit", "Gagliardo-Nirenberg constants as q approaches p", detail::cmd_gn_limit);
  add_n(c), add_p(c), add_qlist(c), add_out(c);

  c = sub("bubble", "curvature expansion of bubble integrals", detail::cmd_bubble);
  add_n(c), add_p(c), add_b(c), add_model(c), add_eps(c), add_out(c);

  c = sub("witness", "bubble test of an entropy inequality with constants A, B", detail::cmd_witness);
  add_n(c), add_p(c), add_b(c), add_model(c), add_eps(c), add_out(c);
  c->add_option("--A", A, "first constant (default: Euclidean sharp constant)");
  c->add_option("--B", o.B, "second constant")->capture_default_str();
  c->add_option("--expect", o.expect, "violation, none or any")
      ->check(CLI::IsMember({"violation", "none", "any"}))
      ->capture_default_str();

  c = sub("minimize", "minimize the penalized functional on a symmetric manifold", detail::cmd_minimize);
  add_n(c), add_p(c), add_q(c), add_model(c), add_seed(c), add_tol(c), add_out(c), add_nodes(c);
  c->add_option("--C", o.C, "penalty constant")->capture_default_str();

  c = sub("nu-scan", "minimum value along a sequence of q", detail::cmd_nu_scan);
  add_n(c), add_p(c), add_model(c), add_seed(c), add_tol(c), add_out(c), add_nodes(c), add_qlist(c);
  c->add_option("--C", o.C, "penalty constant")->capture_default_str();
  c->add_flag("--skip-gn", o.skip_gn, "skip the Euclidean constant comparison");

  c = sub("hc", "semigroup integrals and ultracontractivity table", detail::cmd_hc);
  add_n(c), add_out(c);
  c->add_option("--A", A, "first constant (default: sharp constant at p = 2)");
  c->add_option("--B", o.B, "second constant")->capture_default_str();
  c->add_option("--lambda", o.lambda, "comma-separated lambda values")->delimiter(',');
  c->add_option("--p-from", o.p_from, "source exponent")->capture_default_str();
  c->add_option("--q-to", o.q_to, "target exponent (number or inf)")->capture_default_str();

  c = sub("heat-norm", "flat-torus heat kernel diagonal", detail::cmd_heat_norm);
  add_n(c);
  c->add_option("--scale", scale, "torus side (default 2 pi)");
  c->add_option("--t", o.t, "time")->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }
  o.q = q, o.r = r, o.scale = scale, o.tol = tol, o.A = A, o.delta = delta;

  for (auto& [s, body] : commands) {
    if (!s->parsed()) continue;
    Json doc = {{"tool", "sharpent"}, {"version", kVersion}, {"command", s->get_name()}};
    Json config = Json::object();
    Json result = Json::object();
    int code = kOk;
    std::string kind, message;
    try {
      body(o, config, result);
    } catch (const PropertyFailure& e) {
      code = kPropertyFailure, kind = "property_failure", message = e.message;
    } catch (const OracleDisagreement& e) {
      code = kPropertyFailure, kind = "oracle_disagreement", message = e.what();
    } catch (const NonConvergence& e) {
      code = kNonConvergence, kind = "non_convergence", message = e.what();
    } catch (const DomainError& e) {
      code = kDomain, kind = "domain_error", message = e.what();
    } catch (const std::invalid_argument& e) {
      code = kDomain, kind = "domain_error", message = e.what();
    }
    doc["config"] = config;
    if (!result.empty() || code == kOk) doc["result"] = result;
    if (code != kOk) {
      doc["error"] = {{"kind", kind}, {"message", message}};
      err << "error: " << message << '\n';
    }
    out << doc.dump(2) << '\n';
    return code;
  }
  return kUsage;
}

}  // namespace sharpent::cli
