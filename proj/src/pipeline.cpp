#include "arealaw/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>

#include "arealaw/bounds.hpp"
#include "arealaw/entangle.hpp"
#include "arealaw/spectral.hpp"
#include "arealaw/svg.hpp"
#include "arealaw/thermo.hpp"

namespace arealaw {

namespace fs = std::filesystem;

namespace {

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

std::vector<int> default_edges(int n) {
  std::vector<int> edges;
  for (int l = 1; l < n; ++l) {
    if (n % l == 0) edges.push_back(l);
  }
  if (edges.empty()) edges.push_back(n);
  return edges;
}

// Points of `grid` inside the optional window, paired with log c from the spectrum.
HeatCapFit fit_on_grid(const SpectralData& sd, int n_sites, const std::vector<double>& grid, FitRegime regime,
                       const FitConfig& fc) {
  std::vector<double> T, log_c;
  for (double t : grid) {
    if (fc.t_min && (t < *fc.t_min || t > *fc.t_max)) continue;
    const double lc = log_specific_heat(sd, t, n_sites);
    if (!std::isfinite(lc)) continue;
    T.push_back(t);
    log_c.push_back(lc);
  }
  FitOptions opts;
  opts.delta = fc.delta;
  return regime == FitRegime::exponential ? fit_exponential_log(T, log_c, opts) : fit_polynomial_log(T, log_c, opts);
}

struct EdgeOutcome {
  std::optional<BoundCertificate> cert;
  std::exception_ptr error;
};

Json error_entry(const std::string& stage, const Json& where, const std::exception_ptr& e) {
  Json j = {{"stage", stage}, {"where", where}};
  try {
    std::rethrow_exception(e);
  } catch (const UnsatisfiableError& u) {
    j["kind"] = "unsatisfiable";
    j["message"] = u.what();
  }
  return j;
}

bool is_unsatisfiable(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const UnsatisfiableError&) {
    return true;
  } catch (...) {
    return false;
  }
}

}  // namespace

RunResult run_pipeline(const RunConfig& config, const RunOptions& options) {
  RunResult out;
  Stopwatch clock;
  Json& rec = out.record;
  Json& times = out.timings = Json::object();
  rec["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  rec["config"] = to_json(config);
  rec["log_base"] = "e";

  const HamiltonianSpec spec = build_model(config.model);
  const LatticeSpec& lat = spec.lattice;
  const int n_sites = lat.site_count();
  const std::size_t cap = options.allow_large ? kLargeDimensionCap : kDefaultDimensionCap;
  const Matrix h = assemble_full(spec, cap);
  rec["model"] = {{"name", spec.name},
                  {"d", lat.d},
                  {"n", lat.n},
                  {"boundary", to_string(lat.boundary)},
                  {"sites", n_sites},
                  {"local_dim", spec.local_dim()},
                  {"r", spec.r},
                  {"dimension", h.rows()}};
  times["build"] = clock.lap();

  DiagonalizeOptions dopt;
  dopt.dimension_cap = cap;
  dopt.degeneracy_tol = config.model.degeneracy_tol;
  const SpectralData sd = diagonalize(h, dopt);
  const Matrix h_shifted = h - sd.ground_energy * Matrix::Identity(h.rows(), h.cols());
  rec["spectrum"] = {{"ground_energy", number(sd.ground_energy)},
                     {"ground_energy_density", number(sd.ground_energy / n_sites)},
                     {"gap", number(sd.gap())},
                     {"width", number(sd.width())},
                     {"degeneracy", sd.degeneracy},
                     {"degeneracy_tol", number(sd.degeneracy_tol)},
                     {"degeneracy_ambiguous", sd.degeneracy_ambiguous()},
                     {"s0", number(ground_entropy_density(sd, n_sites))}};
  times["diagonalize"] = clock.lap();

  const std::vector<double> grid = make_grid(config.grid.spacing, config.grid.min, config.grid.max, config.grid.points);
  rec["thermal_curve"] = to_json(thermal_curve(sd, grid, n_sites));
  times["thermal_curve"] = clock.lap();

  const State rho = ground_state(sd);
  const std::string state_id = sd.degeneracy == 1 ? "ground" : "groundspace_mixture";
  rec["state"] = state_id;
  const std::vector<int> edges = config.edges.empty() ? default_edges(lat.n) : config.edges;
  const auto scan = entropy_scan(rho, lat, spec.local_dim(), edges);
  rec["entropy_scan"] = to_json(std::span<const ScanRow>(scan));
  times["entropy_scan"] = clock.lap();

  Json errors = Json::array();
  Json certs = Json::array();
  const CertifyConfig& cc = config.certify;
  if (cc.lemma2 || cc.prop1) {
    Prop1Options popt;
    popt.h_mode = cc.h_mode;
    popt.C = cc.C;
    popt.grid = grid;
    popt.refinement_points = cc.refinement;
    popt.refinement_ratio = cc.refinement_ratio;
    popt.monotone_shortcut = cc.monotone_shortcut;
    popt.waive_translation_invariance = cc.waive_translation_invariance;

    // One certificate per edge; each is independent and reads the shared spectrum only.
    std::vector<EdgeOutcome> outcomes(edges.size());
    const auto count = static_cast<long>(edges.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
      try {
        const int l = edges[i];
        if (cc.prop1) {
          const BoundCertificate setup = prop1_setup(rho, spec, sd, h_shifted, l, popt);
          const auto window = hypothesis_grid(grid, setup.T_c, cc.refinement, cc.refinement_ratio);
          const HeatCapFit fit = fit_on_grid(sd, n_sites, window, config.fit.regime, config.fit);
          outcomes[i].cert = prop1_certify(rho, spec, sd, h_shifted, l, fit, popt);
        } else {
          outcomes[i].cert = prop1_setup(rho, spec, sd, h_shifted, l, popt);
        }
        outcomes[i].cert->state = state_id;
      } catch (...) {
        outcomes[i].error = std::current_exception();
      }
    }
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      if (outcomes[i].error) {
        if (!is_unsatisfiable(outcomes[i].error)) std::rethrow_exception(outcomes[i].error);
        errors.push_back(error_entry("certificate", {{"l", edges[i]}}, outcomes[i].error));
        out.exit_code = 3;
        continue;
      }
      certs.push_back(to_json(*outcomes[i].cert));
    }
  }
  rec["certificates"] = certs;
  times["certificates"] = clock.lap();

  if (cc.pepo) {
    const double t_max = 1.0 / std::log(static_cast<double>(lat.n));
    const auto window = hypothesis_grid(grid, t_max, cc.refinement, cc.refinement_ratio);
    const HeatCapFit fit = fit_on_grid(sd, n_sites, window, FitRegime::exponential, FitConfig{});
    Json bounds = Json::array();
    for (double delta : cc.deltas) bounds.push_back(to_json(pepo_certify(sd, lat, fit, delta, grid)));
    rec["trace_norm"] = {{"fit", to_json(fit)}, {"bounds", bounds}};
  } else {
    rec["trace_norm"] = nullptr;
  }
  times["trace_norm"] = clock.lap();
  rec["errors"] = errors;
  return out;
}

// ---------------------------------------------------------------------------------------------
// rendering

namespace {

std::string cell(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string cell(const Json& j) { return j.is_null() ? "-" : cell(number_from(j)); }

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' '); }

std::string csv_value(const Json& j) {
  if (j.is_null()) return "";
  if (j.is_boolean()) return j.get<bool>() ? "1" : "0";
  if (j.is_number_integer()) return std::to_string(j.get<long>());
  return format_double(number_from(j));
}

std::string curve_csv(const Json& curve) {
  std::ostringstream os;
  os << "T,u,s,c,logZ,F\n";
  for (const auto& p : curve) {
    os << csv_value(p["T"]) << ',' << csv_value(p["u"]) << ',' << csv_value(p["s"]) << ',' << csv_value(p["c"]) << ','
       << csv_value(p["logZ"]) << ',' << csv_value(p["F"]) << '\n';
  }
  return os.str();
}

const Json* certificate_for(const Json& record, int l) {
  for (const auto& c : record["certificates"]) {
    if (c["geometry"]["l"].get<int>() == l) return &c;
  }
  return nullptr;
}

std::string scan_csv(const Json& record) {
  std::ostringstream os;
  os << "l,S_single,S_avg,dim_bound\n";
  for (const auto& r : record["entropy_scan"]) {
    os << r["l"].get<int>() << ',' << csv_value(r["S_single"]) << ',' << csv_value(r["S_avg"]) << ','
       << csv_value(r["dim_bound"]) << '\n';
  }
  return os.str();
}

// One row per certificate: the measured side next to both bounds.
std::string bounds_csv(const Json& record) {
  std::ostringstream os;
  os << "l,S_avg,T_c,s_at_Tc,lemma2_rhs,prop1_rhs,h,C,verdict\n";
  for (const auto& r : record["entropy_scan"]) {
    const Json* c = certificate_for(record, r["l"].get<int>());
    if (!c) continue;
    os << r["l"].get<int>() << ',' << csv_value(r["S_avg"]) << ',' << csv_value((*c)["T_c"]) << ','
       << csv_value((*c)["s_at_Tc"]) << ',' << csv_value((*c)["lemma2_rhs"]) << ','
       << ((*c)["fit"].is_object() ? csv_value((*c)["prop1_rhs"]) : "") << ',' << csv_value((*c)["h"]["value"]) << ','
       << csv_value((*c)["C"]) << ',' << (*c)["verdict"].get<std::string>() << '\n';
  }
  return os.str();
}

std::string scan_svg(const Json& record) {
  LinePlot plot;
  plot.title = "Entanglement entropy of l-cubes";
  plot.x_label = "l";
  plot.y_label = "S (nats)";
  PlotSeries measured{"S(rho_R)", {}, {}, true, false};
  PlotSeries volume{"l^d log q", {}, {}, false, true};
  PlotSeries lemma{"l^d s(T_c)", {}, {}, true, false};
  PlotSeries prop{"s(0) l^d + F l^(d-1)", {}, {}, true, false};
  for (const auto& r : record["entropy_scan"]) {
    const double l = r["l"].get<int>();
    measured.x.push_back(l);
    measured.y.push_back(number_from(r["S_avg"]));
    volume.x.push_back(l);
    volume.y.push_back(number_from(r["dim_bound"]));
    if (const Json* c = certificate_for(record, static_cast<int>(l))) {
      lemma.x.push_back(l);
      lemma.y.push_back(number_from((*c)["lemma2_rhs"]));
      if ((*c)["fit"].is_object()) {
        prop.x.push_back(l);
        prop.y.push_back(number_from((*c)["prop1_rhs"]));
      }
    }
  }
  plot.series = {measured, volume};
  if (!lemma.x.empty()) plot.series.push_back(lemma);
  if (!prop.x.empty()) plot.series.push_back(prop);
  return render_svg(plot);
}

std::string heat_svg(const Json& record) {
  LinePlot plot;
  plot.title = "Specific heat and fitted upper bounds";
  plot.x_label = "T";
  plot.y_label = "c(T)";
  plot.log_x = true;
  plot.log_y = true;
  PlotSeries data{"c(T)", {}, {}, true, false};
  for (const auto& p : record["thermal_curve"]) {
    data.x.push_back(number_from(p["T"]));
    data.y.push_back(number_from(p["c"]));
  }
  plot.series.push_back(data);
  auto add_fit = [&](const Json& fj, const std::string& label) {
    const HeatCapFit fit = fit_from_json(fj);
    PlotSeries s{label, {}, {}, false, true};
    for (double T : data.x) {
      if (T > fit.t_max) break;
      s.x.push_back(T);
      s.y.push_back(model(fit, T));
    }
    if (s.x.size() > 1) plot.series.push_back(s);
  };
  for (const auto& c : record["certificates"]) {
    if (c["fit"].is_object()) add_fit(c["fit"], "fit, l = " + std::to_string(c["geometry"]["l"].get<int>()));
  }
  if (record.contains("trace_norm") && record["trace_norm"].is_object()) {
    add_fit(record["trace_norm"]["fit"], "fit, T <= 1/log n");
  }
  return render_svg(plot);
}

std::string branch_note(const Json& constant) {
  const std::string b = constant["branch"].get<std::string>();
  return b.empty() ? "" : ", " + b;
}

void append_checks(std::ostringstream& os, const Json& checks) {
  for (const auto& k : checks) {
    os << "    " << pad(k["name"].get<std::string>(), 22) << pad(cell(k["lhs"]), 14) << "<= " << pad(cell(k["rhs"]), 14)
       << "slack " << pad(cell(k["slack"]), 14) << k["verdict"].get<std::string>() << '\n';
  }
}

}  // namespace

std::string summary_text(const Json& record) {
  std::ostringstream os;
  const Json& m = record["model"];
  const Json& sp = record["spectrum"];
  os << record["tool"]["name"].get<std::string>() << ' ' << record["tool"]["version"].get<std::string>() << '\n';
  os << "model " << m["name"].get<std::string>() << "  d=" << m["d"] << " n=" << m["n"] << " ("
     << m["boundary"].get<std::string>() << ")  dim=" << m["dimension"] << '\n';
  os << "E0 = " << cell(sp["ground_energy"]) << "  gap = " << cell(sp["gap"]) << "  D = " << sp["degeneracy"]
     << (sp["degeneracy_ambiguous"].get<bool>() ? " (ambiguous)" : "") << "  s(0) = " << cell(sp["s0"]) << "\n\n";

  os << pad("l", 5) << pad("S(rho_R)", 14) << pad("l^d log q", 14) << pad("T_c", 14) << pad("l^d s(T_c)", 14)
     << pad("prop1 rhs", 14) << pad("h", 12) << "verdict\n";
  for (const auto& r : record["entropy_scan"]) {
    const int l = r["l"].get<int>();
    const Json* c = certificate_for(record, l);
    os << pad(std::to_string(l), 5) << pad(cell(r["S_avg"]), 14) << pad(cell(r["dim_bound"]), 14);
    if (c) {
      os << pad(cell((*c)["T_c"]), 14) << pad(cell((*c)["lemma2_rhs"]), 14)
         << pad((*c)["fit"].is_object() ? cell((*c)["prop1_rhs"]) : "-", 14) << pad(cell((*c)["h"]["value"]), 12)
         << (*c)["verdict"].get<std::string>();
    }
    os << '\n';
  }
  for (const auto& c : record["certificates"]) {
    os << "\ncertificate l=" << c["geometry"]["l"] << "  C=" << cell(c["C"]) << "  h=" << cell(c["h"]["value"]) << " ("
       << c["h"]["mode"].get<std::string>() << ")  target=" << cell(c["target"]) << "  T_c=" << cell(c["T_c"]) << '\n';
    if (c["fit"].is_object()) {
      const Json& f = c["fit"];
      os << "    fit " << f["regime"].get<std::string>() << ": k=" << cell(f["k"]) << " gamma=" << cell(f["gamma"])
         << " Delta=" << cell(f["delta"]) << "  F=" << cell(c["constant"]["F"]) << branch_note(c["constant"])
         << "  hypothesis on " << c["fit_hypothesis"]["grid"].size()
         << " points: " << (c["fit_hypothesis"]["holds"].get<bool>() ? "verified" : "not met") << '\n';
    }
    append_checks(os, c["checks"]);
    for (const auto& w : c["warnings"]) os << "    warning: " << w.get<std::string>() << '\n';
  }
  if (record.contains("trace_norm") && record["trace_norm"].is_object()) {
    const Json& tn = record["trace_norm"];
    os << "\ntrace-norm bound  fit k=" << cell(tn["fit"]["k"]) << " gamma=" << cell(tn["fit"]["gamma"])
       << " Delta=" << cell(tn["fit"]["delta"]) << '\n';
    for (const auto& b : tn["bounds"]) {
      os << "  delta=" << cell(b["delta"]) << " T=" << cell(b["T"]) << " eta=" << cell(b["eta"])
         << " trace_gap=" << cell(b["trace_gap"])
         << " hypothesis: " << (b["hypothesis"]["holds"].get<bool>() ? "verified" : "not met") << '\n';
      append_checks(os, b["checks"]);
    }
  }
  for (const auto& e : record["errors"]) {
    os << "\nerror (" << e["kind"].get<std::string>() << ") at " << e["stage"].get<std::string>() << ' '
       << e["where"].dump() << ": " << e["message"].get<std::string>() << '\n';
  }
  return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw ValidationError("failed writing '" + path.string() + "'");
}

Json read_json(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::vector<fs::path> write_outputs(const Json& record, const fs::path& dir, const std::vector<std::string>& formats) {
  for (const char* key : {"tool", "model", "spectrum", "thermal_curve", "entropy_scan", "certificates", "errors"}) {
    if (!record.contains(key)) throw ValidationError(std::string("run record lacks '") + key + "'");
  }
  fs::create_directories(dir);
  std::vector<fs::path> written;
  auto emit = [&](const std::string& name, const std::string& text) {
    write_text(dir / name, text);
    written.push_back(dir / name);
  };
  const auto wants = [&](const char* f) { return std::find(formats.begin(), formats.end(), f) != formats.end(); };
  if (wants("json")) {
    emit("run_record.json", record.dump(2) + "\n");
    Json certs = {{"certificates", record["certificates"]},
                  {"trace_norm", record.contains("trace_norm") ? record["trace_norm"] : Json(nullptr)},
                  {"errors", record["errors"]}};
    emit("certificates.json", certs.dump(2) + "\n");
  }
  if (wants("csv")) {
    emit("thermal_curve.csv", curve_csv(record["thermal_curve"]));
    emit("entropy_scan.csv", scan_csv(record));
    emit("bounds.csv", bounds_csv(record));
  }
  if (wants("txt")) emit("summary.txt", summary_text(record));
  if (wants("svg")) {
    emit("entropy_scan.svg", scan_svg(record));
    emit("heat_capacity.svg", heat_svg(record));
  }
  return written;
}

Json data_certificate_record(std::span<const HeatSample> samples, const DataCertInputs& in, const std::string& source) {
  Json rec;
  rec["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  Json inputs = {{"csv", source},
                 {"samples", samples.size()},
                 {"d", in.d},
                 {"r", in.r},
                 {"l", in.l},
                 {"n", in.n},
                 {"C", number(in.C)},
                 {"h", number(in.h)},
                 {"s0", number(in.s0)},
                 {"regime", to_string(in.regime)},
                 {"t_min", number(in.t_min)},
                 {"t_max", number(in.t_max)},
                 {"delta", number(in.delta)},
                 {"monotone_shortcut", in.monotone_shortcut}};
  rec["inputs"] = inputs;
  rec["certificate"] = to_json(certify_from_data(samples, in));
  return rec;
}

std::string data_certificate_summary(const Json& record) {
  std::ostringstream os;
  const Json& c = record["certificate"];
  const Json& f = c["fit"];
  os << c["note"].get<std::string>() << '\n';
  os << "samples " << record["inputs"]["samples"] << " from " << record["inputs"]["csv"].get<std::string>() << '\n';
  os << "fit " << f["regime"].get<std::string>() << ": k=" << cell(f["k"]) << " gamma=" << cell(f["gamma"])
     << " Delta=" << cell(f["delta"]) << " rms=" << cell(f["residual_rms"]) << " on [" << cell(f["t_min"]) << ", "
     << cell(f["t_max"]) << "]\n";
  os << "d=" << c["geometry"]["d"] << " r=" << c["geometry"]["r"] << " l=" << c["geometry"]["l"]
     << " n=" << c["geometry"]["n"] << "  C=" << cell(c["C"]) << " h=" << cell(c["h"]["value"])
     << "  target=" << cell(c["target"]) << "  T_c=" << cell(c["T_c"]) << '\n';
  os << "l^d s(T_c) <= " << cell(c["lemma2_rhs"]) << "   s(0) l^d + F l^(d-1) = " << cell(c["prop1_rhs"])
     << "  (F=" << cell(c["constant"]["F"]) << branch_note(c["constant"]) << ")\n";
  append_checks(os, c["checks"]);
  for (const auto& w : c["warnings"]) os << "warning: " << w.get<std::string>() << '\n';
  os << "verdict: " << c["verdict"].get<std::string>() << '\n';
  return os.str();
}

}  // namespace arealaw
