// arealaw: run | fit | report
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <omp.h>

#include "arealaw/config.hpp"
#include "arealaw/heatfit.hpp"
#include "arealaw/pipeline.hpp"

namespace fs = std::filesystem;
using namespace arealaw;

namespace {

enum Exit { kOk = 0, kValidation = 1, kNumeric = 2, kUnsatisfiable = 3 };

struct RunArgs {
  std::string config;
  std::optional<std::string> out;
  int threads = 1;
  bool allow_large = false;
};

struct FitArgs {
  std::string csv;
  DataCertInputs in;
  std::string regime = "exponential";
  std::optional<double> t_min;
  std::optional<double> t_max;
  std::string out;
  std::string units;
};

struct ReportArgs {
  std::string record;
  std::optional<std::string> out;
};

int do_run(const RunArgs& a) {
  omp_set_num_threads(a.threads);
  const RunConfig cfg = load_config(a.config);
  const fs::path dir = a.out ? fs::path(*a.out) : fs::path(cfg.output.directory);
  RunOptions opts;
  opts.allow_large = a.allow_large;
  RunResult res = run_pipeline(cfg, opts);
  res.timings["threads"] = a.threads;
  write_outputs(res.record, dir, cfg.output.formats);
  write_text(dir / "timings.json", res.timings.dump(2) + "\n");
  std::cout << summary_text(res.record);
  std::cout << "\noutputs in " << dir.string() << '\n';
  return res.exit_code;
}

int do_fit(FitArgs a) {
  a.in.regime = fit_regime_from_string(a.regime);
  if (a.t_min) a.in.t_min = *a.t_min;
  if (a.t_max) a.in.t_max = *a.t_max;
  const auto samples = read_heat_csv_file(a.csv);
  Json rec = data_certificate_record(samples, a.in, a.csv);
  if (!a.units.empty()) rec["inputs"]["units"] = a.units;
  const std::string summary = data_certificate_summary(rec);
  std::cout << summary;
  if (!a.out.empty()) {
    const fs::path dir(a.out);
    fs::create_directories(dir);
    write_text(dir / "certificate.json", rec.dump(2) + "\n");
    write_text(dir / "certificate.txt", summary);
  }
  return kOk;
}

int do_report(const ReportArgs& a) {
  const fs::path path(a.record);
  const Json rec = read_json(path);
  std::vector<std::string> formats{"csv", "json", "svg", "txt"};
  if (rec.contains("config") && rec["config"].contains("output")) {
    formats = rec["config"]["output"]["formats"].get<std::vector<std::string>>();
  }
  const fs::path dir = a.out ? fs::path(*a.out) : (path.has_parent_path() ? path.parent_path() : fs::path("."));
  for (const auto& p : write_outputs(rec, dir, formats)) std::cout << p.string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  Eigen::setNbThreads(1);
  CLI::App app{"Finite-size area-law certificates from thermodynamic data"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "diagonalize a configured model and emit curves, scans and certificates");
  run_cmd->add_option("--config", run.config, "YAML run configuration")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run.out, "output directory (overrides output.directory)");
  run_cmd->add_option("--threads", run.threads, "worker threads")->check(CLI::Range(1, 256));
  run_cmd->add_flag("--allow-large", run.allow_large, "raise the Hilbert-space cap from 4096 to 8192");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "certificate from measured specific-heat data (CSV with columns T,c)");
  fit_cmd->set_help_flag("--help", "print this help message and exit");
  fit_cmd->add_option("--csv", fit.csv, "heat-capacity CSV")->required();
  fit_cmd->add_option("--d", fit.in.d, "lattice dimension")->check(CLI::PositiveNumber);
  fit_cmd->add_option("--r", fit.in.r, "interaction radius")->check(CLI::PositiveNumber);
  fit_cmd->add_option("--l", fit.in.l, "cube edge")->required()->check(CLI::PositiveNumber);
  fit_cmd->add_option("--n", fit.in.n, "lattice edge")->required()->check(CLI::PositiveNumber);
  fit_cmd->add_option("--C", fit.in.C, "energy constant C >= 1");
  fit_cmd->add_option("--h", fit.in.h, "coupling strength h")->check(CLI::NonNegativeNumber);
  fit_cmd->add_option("--s0", fit.in.s0, "ground entropy density s(0)")->check(CLI::NonNegativeNumber);
  fit_cmd->add_option("--regime", fit.regime, "exponential | polynomial");
  fit_cmd->add_option("--t-min", fit.t_min, "lower end of the fit window");
  fit_cmd->add_option("--t-max", fit.t_max, "upper end of the fit window");
  fit_cmd->add_option("--delta", fit.in.delta, "energy scale of the polynomial regime")->check(CLI::PositiveNumber);
  fit_cmd->add_flag("--monotone", fit.in.monotone_shortcut, "check the fit only on [T_c/2, T_c] when c is monotone");
  fit_cmd->add_option("--units", fit.units, "units of the T and c columns, recorded verbatim");
  fit_cmd->add_option("--out", fit.out, "directory for certificate.json and certificate.txt");

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "re-render tables and plots from a run record");
  report_cmd->add_option("--record", report.record, "run_record.json")->required()->check(CLI::ExistingFile);
  report_cmd->add_option("--out", report.out, "output directory (default: the record's directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*run_cmd) return do_run(run);
    if (*fit_cmd) return do_fit(fit);
    return do_report(report);
  } catch (const UnsatisfiableError& e) {
    std::cerr << "unsatisfiable: " << e.what() << '\n';
    return kUnsatisfiable;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  }
}
