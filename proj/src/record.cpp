#include "arealaw/record.hpp"

#include <cmath>
#include <limits>

namespace arealaw {

Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from(const Json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

namespace {

Json numbers(std::span<const double> v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

}  // namespace

Json to_json(const InequalityCheck& c) {
  return {{"name", c.name},
          {"lhs", number(c.lhs)},
          {"rhs", number(c.rhs)},
          {"slack", number(c.slack)},
          {"verdict", to_string(c.verdict)}};
}

Json to_json(const HypothesisCheck& h) {
  return {{"holds", h.holds},
          {"monotone_shortcut", h.monotone_shortcut},
          {"worst_log_margin", number(h.worst_log_margin)},
          {"worst_T", number(h.worst_T)},
          {"grid", numbers(h.grid)}};
}

Json to_json(const CouplingStrength& h) {
  Json j;
  j["value"] = number(h.value);
  j["mode"] = to_string(h.mode);
  j["operator_norm"] = number(h.operator_norm);
  j["covariance"] = h.covariance ? number(*h.covariance) : Json(nullptr);
  j["covariance_valid"] = h.covariance_valid;
  Json sites = Json::array();
  for (const auto& [site, v] : h.per_site) sites.push_back({{"site", site}, {"covariance_sum", number(v)}});
  j["per_site"] = sites;
  return j;
}

Json to_json(const EnergyBudget& b) {
  return {{"d", b.d},
          {"r", b.r},
          {"l", b.l},
          {"h", number(b.h)},
          {"boundary_sites", b.boundary_sites},
          {"boundary_sites_bound", boundary_count_bound(b.d, b.l, b.r)},
          {"exact", number(b.exact)},
          {"nominal", number(b.nominal)}};
}

Json to_json(const HeatCapFit& f) {
  return {{"regime", to_string(f.regime)},
          {"k", number(f.k)},
          {"gamma", number(f.gamma)},
          {"delta", number(f.delta)},
          {"t_min", number(f.t_min)},
          {"t_max", number(f.t_max)},
          {"points", f.points},
          {"residual_rms", number(f.residual_rms)},
          {"log_inflation", number(f.log_inflation)},
          {"min_slack", number(f.min_slack)},
          {"iterations", f.iterations},
          {"converged", f.converged},
          {"message", f.message}};
}

HeatCapFit fit_from_json(const Json& j) {
  HeatCapFit f;
  f.regime = fit_regime_from_string(j.at("regime").get<std::string>());
  f.k = number_from(j.at("k"));
  f.gamma = number_from(j.at("gamma"));
  f.delta = number_from(j.at("delta"));
  f.t_min = number_from(j.at("t_min"));
  f.t_max = number_from(j.at("t_max"));
  f.points = j.at("points").get<std::size_t>();
  f.residual_rms = number_from(j.at("residual_rms"));
  f.log_inflation = number_from(j.at("log_inflation"));
  f.min_slack = number_from(j.at("min_slack"));
  f.iterations = j.at("iterations").get<int>();
  f.converged = j.at("converged").get<bool>();
  f.message = j.at("message").get<std::string>();
  return f;
}

Json to_json(const BoundCertificate& c) {
  Json j;
  j["model"] = c.model;
  j["state"] = c.state;
  j["data_driven"] = c.data_driven;
  if (!c.note.empty()) j["note"] = c.note;
  j["geometry"] = {{"d", c.d}, {"r", c.r}, {"l", c.l}, {"n", c.n}};
  j["C"] = number(c.C);
  j["energy_density"] = number(c.energy_density);
  j["h"] = to_json(c.h);
  j["budget"] = to_json(c.budget);
  j["target"] = number(c.target);
  j["target_nominal"] = number(c.target_nominal);
  j["T_c"] = number(c.T_c);
  j["u_at_Tc"] = number(c.u_at_Tc);
  j["s_at_Tc"] = number(c.s_at_Tc);
  j["s0"] = number(c.s0);
  j["degeneracy"] = c.degeneracy;
  j["degeneracy_ambiguous"] = c.degeneracy_ambiguous;
  j["translation_invariant"] = c.translation_invariant;
  j["measured_S"] = c.measured_S ? number(*c.measured_S) : Json(nullptr);
  j["lemma2_rhs"] = number(c.lemma2_rhs);
  j["constant"] = {{"regime", to_string(c.constant.regime)},
                   {"F", number(c.constant.F)},
                   {"F_nominal_budget", number(c.F_nominal)},
                   {"branch", c.constant.branch}};
  j["prop1_rhs"] = number(c.prop1_rhs);
  j["fit"] = c.fit ? to_json(*c.fit) : Json(nullptr);
  j["fit_hypothesis"] = to_json(c.fit_hypothesis);
  Json checks = Json::array();
  for (const auto& k : c.checks) checks.push_back(to_json(k));
  j["checks"] = checks;
  j["verdict"] = to_string(c.overall());
  j["warnings"] = c.warnings;
  j["log_base"] = "e";
  return j;
}

Json to_json(const PepoBoundParams& p) {
  Json j;
  j["k"] = number(p.k);
  j["nu"] = number(p.nu);
  j["gap"] = number(p.gap);
  j["delta"] = number(p.delta);
  j["n"] = p.n;
  j["d"] = p.d;
  j["T"] = number(p.T);
  j["eta"] = number(p.eta);
  j["trace_gap"] = p.trace_gap ? number(*p.trace_gap) : Json(nullptr);
  j["hypothesis"] = to_json(p.hypothesis);
  Json checks = Json::array();
  for (const auto& k : p.checks) checks.push_back(to_json(k));
  j["checks"] = checks;
  return j;
}

Json to_json(const Lemma2Result& r) {
  Json j;
  j["T"] = number(r.T);
  j["u"] = number(r.u);
  j["s"] = number(r.s);
  j["energy_density"] = number(r.energy_density);
  j["budget"] = to_json(r.budget);
  j["hypothesis"] = to_json(r.hypothesis);
  j["conclusion"] = to_json(r.conclusion);
  j["per_cube"] = numbers(r.per_cube);
  j["translation_invariant"] = r.translation_invariant;
  j["warnings"] = r.warnings;
  return j;
}

Json to_json(const ThermalCurve& curve) {
  Json rows = Json::array();
  for (const auto& p : curve.samples) {
    rows.push_back({{"T", number(p.T)},
                    {"u", number(p.u)},
                    {"s", number(p.s)},
                    {"c", number(p.c)},
                    {"logZ", number(p.log_z)},
                    {"F", number(p.F)}});
  }
  return rows;
}

Json to_json(std::span<const ScanRow> rows) {
  Json a = Json::array();
  for (const auto& r : rows) {
    a.push_back({{"l", r.l},
                 {"S_single", number(r.s_single)},
                 {"S_avg", number(r.s_avg)},
                 {"dim_bound", number(r.dim_bound)},
                 {"spread", number(r.spread)},
                 {"translation_covariant", r.translation_covariant},
                 {"per_cube", numbers(r.per_cube)}});
  }
  return a;
}

}  // namespace arealaw
