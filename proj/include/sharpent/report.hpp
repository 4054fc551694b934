#pragma once

// JSON and CSV projections of the library's reports. Key order is fixed so
// identical inputs serialize byte-identically.

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "sharpent/constants.hpp"
#include "sharpent/euclidean.hpp"
#include "sharpent/gn_estimator.hpp"
#include "sharpent/hypercontractivity.hpp"
#include "sharpent/manifold.hpp"
#include "sharpent/minimizer.hpp"
#include "sharpent/profiles.hpp"

namespace sharpent {

using Json = nlohmann::ordered_json;

/// Finite doubles as numbers; inf and nan as strings, which JSON lacks.
inline Json json_number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

inline Json to_json(const InequalityParams& p) {
  return Json{{"n", p.n}, {"p", p.p}, {"q", p.q}, {"r", p.r}};
}

inline Json to_json(const DerivedExponents& d) {
  return Json{{"theta", d.theta}, {"alpha", d.alpha}, {"p_star", d.p_star}, {"degenerate", d.degenerate}};
}

inline Json to_json(const IJValues& v) {
  return Json{{"I1", v.I1}, {"I2", v.I2}, {"J1", v.J1}, {"J2", v.J2}, {"J3", v.J3}};
}

inline Json to_json(const IJReport& r) {
  return Json{{"quadrature", to_json(r.quadrature)},
              {"closed_form", to_json(r.closed_form)},
              {"max_rel_diff", r.max_rel_diff},
              {"richardson_ratio", r.richardson_ratio}};
}

inline Json to_json(const LimitPdeResidual& r) {
  return Json{{"residual", r.residual}, {"absolute", r.absolute}, {"C", r.C}, {"tests", r.tests}};
}

inline Json to_json(const LogNormDerivative& d) {
  return Json{{"fd", d.fd}, {"exact", d.exact}, {"err", d.err}};
}

inline Json to_json(const GNQuotientReport& r) {
  return Json{{"params", to_json(r.params)}, {"theta", r.theta},   {"quotient", r.quotient},
              {"norm_r", r.norm_r},         {"grad_p", r.grad_p}, {"norm_q", r.norm_q},
              {"profile_id", r.profile_id}};
}

inline Json to_json(const GNEstimate& e) {
  return Json{{"value", e.value},
              {"best", to_json(e.best)},
              {"stretched_best", e.stretched_best},
              {"stretched_shape", e.stretched_shape},
              {"algebraic_best", e.algebraic_best},
              {"algebraic_shape", e.algebraic_shape},
              {"algebraic_power", e.algebraic_power},
              {"ascent_best", e.ascent_best},
              {"ascent_iterations", e.ascent_iterations},
              {"ascent_step_failed", e.ascent_step_failed},
              {"warning", e.warning}};
}

inline Json to_json(const LimitScanRow& r) {
  return Json{{"q", r.q}, {"estimate", r.estimate}, {"gap", r.gap}};
}

inline Json to_json(const MonotonicityReport& r) {
  Json estimates = Json::array();
  for (const auto& row : r.estimates) estimates.push_back(row);
  return Json{{"q_values", r.q_values},
              {"r_values", r.r_values},
              {"estimates", estimates},
              {"noise_band", r.noise_band},
              {"max_violation", r.max_violation},
              {"soft_violations", r.soft_violations},
              {"hard_violations", r.hard_violations}};
}

inline Json to_json(const ManifoldModel& m) {
  return Json{{"kind", to_string(m.kind)},
              {"n", m.n},
              {"scale", m.scale},
              {"scalar_curvature", m.scalar_curvature()},
              {"volume", m.volume()},
              {"injectivity_radius", m.injectivity_radius()}};
}

inline Json to_json(const BubbleIntegrals& b) {
  return Json{{"mass_p", b.mass_p}, {"entropy", b.entropy}, {"grad_p", b.grad_p}};
}

inline Json to_json(const FittedCoefficient& c) {
  return Json{{"value", c.value},
              {"std_error", c.std_error},
              {"target", c.target},
              {"rel_deviation", json_number(c.rel_deviation())}};
}

inline Json to_json(const ExpansionReport& r) {
  Json values = Json::array();
  for (std::size_t i = 0; i < r.eps_grid.size(); ++i) {
    Json row = to_json(r.values[i]);
    row["epsilon"] = r.eps_grid[i];
    values.push_back(row);
  }
  return Json{{"model", to_json(r.model)},
              {"p", r.p},
              {"b", r.b},
              {"delta", r.delta},
              {"window", {{"eps_min", r.window_min}, {"eps_max", r.window_max}}},
              {"reference", to_json(r.ij)},
              {"values", values},
              {"fitted",
               {{"mass_eps2", to_json(r.mass_eps2)},
                {"grad_eps2", to_json(r.grad_eps2)},
                {"entropy_eps2", to_json(r.entropy_eps2)},
                {"entropy_eps2_log", to_json(r.entropy_eps2_log)}}},
              {"fit_rms", {{"mass", r.mass_fit_rms}, {"grad", r.grad_fit_rms}, {"entropy", r.entropy_fit_rms}}},
              {"warning", r.warning}};
}

inline Json to_json(const WitnessReport& w) {
  Json rows = Json::array();
  for (const auto& r : w.rows)
    rows.push_back(Json{{"epsilon", r.epsilon}, {"lhs", r.lhs}, {"rhs", json_number(r.rhs)}, {"margin", json_number(r.margin)}});
  return Json{{"violated", w.violated},
              {"eps_star", w.eps_star ? Json(*w.eps_star) : Json(nullptr)},
              {"margin", json_number(w.margin)},
              {"asymptotic_margin", w.asymptotic_margin},
              {"rows", rows}};
}

inline Json to_json(const MinimizeResult& r) {
  return Json{{"nu", r.nu},
              {"Aq", r.Aq},
              {"Bq", r.Bq},
              {"q_integral", r.q_integral},
              {"identity_residual", r.Bq * r.q_integral - r.nu},
              {"el_residual", r.el_residual},
              {"iterations", r.iterations},
              {"stationarity", r.stationarity},
              {"clamp_events", r.clamp_events},
              {"from_constant", r.from_constant},
              {"start", r.start},
              {"nodes", r.profile.values.size()}};
}

inline Json to_json(const NuScanRow& r) {
  return Json{{"q", r.q},
              {"nu", r.nu},
              {"constant_ceiling", r.constant_ceiling},
              {"gn_ceiling", r.gn_ceiling ? Json(*r.gn_ceiling) : Json(nullptr)},
              {"below_gn_ceiling", r.below_gn_ceiling},
              {"el_residual", r.el_residual},
              {"iterations", r.iterations}};
}

inline Json to_json(const HCReport& r) {
  return Json{{"n", r.n},
              {"A", r.A},
              {"B", r.B},
              {"lambda", r.lambda},
              {"p_from", json_number(r.p_from)},
              {"q_to", json_number(r.q_to)},
              {"t", r.t},
              {"m", r.m},
              {"t_closed", r.t_closed},
              {"m_closed", r.m_closed},
              {"t_error", r.t_error},
              {"m_error", r.m_error},
              {"bound_rhs", r.bound_rhs},
              {"pass", r.pass}};
}

inline Json to_json(const UltraReport& u) {
  Json rows = Json::array();
  for (const auto& r : u.rows)
    rows.push_back(Json{{"lambda", r.lambda},
                        {"t", r.t},
                        {"m", r.m},
                        {"bound", r.bound},
                        {"margin", r.margin},
                        {"in_range", r.in_range},
                        {"pass", r.pass}});
  return Json{{"slack_fraction", u.slack_fraction},
              {"t_max", json_number(u.t_max)},
              {"endpoint_margin", u.endpoint_margin},
              {"all_pass", u.all_pass},
              {"rows", rows}};
}

inline Json to_json(const HeatNorm& h) { return Json{{"value", h.value}, {"ratio", h.ratio}}; }

// ---------------------------------------------------------------------------
// CSV

inline void write_csv(std::ostream& os, const ExpansionReport& r) {
  os << "epsilon,mass_p,entropy,grad_p\n";
  os.precision(17);
  for (std::size_t i = 0; i < r.eps_grid.size(); ++i)
    os << r.eps_grid[i] << ',' << r.values[i].mass_p << ',' << r.values[i].entropy << ',' << r.values[i].grad_p << '\n';
}

inline void write_csv(std::ostream& os, const WitnessReport& w) {
  os << "epsilon,lhs,rhs,margin\n";
  os.precision(17);
  for (const auto& r : w.rows) os << r.epsilon << ',' << r.lhs << ',' << r.rhs << ',' << r.margin << '\n';
}

inline void write_csv(std::ostream& os, const SymmetricManifoldProfile& u) {
  os << "coordinate,u\n";
  os.precision(17);
  for (std::size_t i = 0; i < u.values.size(); ++i) os << u.grid->coords()[i] << ',' << u.values[i] << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<NuScanRow>& rows) {
  os << "q,nu,constant_ceiling,gn_ceiling\n";
  os.precision(17);
  for (const auto& r : rows)
    os << r.q << ',' << r.nu << ',' << r.constant_ceiling << ',' << (r.gn_ceiling ? *r.gn_ceiling : NAN) << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<LimitScanRow>& rows) {
  os << "q,estimate,gap\n";
  os.precision(17);
  for (const auto& r : rows) os << r.q << ',' << r.estimate << ',' << r.gap << '\n';
}

inline void write_csv(std::ostream& os, const UltraReport& u) {
  os << "lambda,t,m,bound,margin,in_range,pass\n";
  os.precision(17);
  for (const auto& r : u.rows)
    os << r.lambda << ',' << r.t << ',' << r.m << ',' << r.bound << ',' << r.margin << ',' << r.in_range << ','
       << r.pass << '\n';
}

}  // namespace sharpent
