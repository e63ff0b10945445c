#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "arealaw/certificate.hpp"

namespace arealaw {

struct HeatSample {
  double T = 0.0;
  double c = 0.0;
};

/// log of the fitted model at T.
double log_model(const HeatCapFit& fit, double T);
double model(const HeatCapFit& fit, double T);
/// int_0^T model(t) dt, the fitted upper bound on u(T).
double model_energy(const HeatCapFit& fit, double T);
/// int_0^T model(t)/t dt, the fitted upper bound on s(T) - s(0).
double model_entropy(const HeatCapFit& fit, double T);
/// lim_{T -> inf} model_energy (may be +inf).
double model_energy_sup(const HeatCapFit& fit);

/// Exponential-model constant rewritten as c <= k' T^(-nu) e^(-Delta/T): k' = k Delta^gamma, nu = gamma.
struct ArrheniusForm {
  double k = 0.0;
  double nu = 0.0;
  double gap = 0.0;
};
ArrheniusForm arrhenius_form(const HeatCapFit& fit);

struct FitOptions {
  int max_iterations = 500;
  double step_tol = 1e-12;
  /// Per-point weights in log space; empty means uniform.
  std::vector<double> weights;
  /// Energy scale of the polynomial regime.
  double delta = 1.0;
};

/// Least squares of log c = log k + gamma log(Delta/T) - Delta/T in log space, then k is
/// rescaled so the model dominates every sample. Input is (T_i, log c_i), which keeps points
/// with underflowing c usable.
HeatCapFit fit_exponential_log(std::span<const double> T, std::span<const double> log_c,
                               const FitOptions& options = {});
HeatCapFit fit_exponential(std::span<const HeatSample> samples, const FitOptions& options = {});

/// Linear regression of log c on log(T/Delta) with Delta = options.delta, then the same rescaling.
HeatCapFit fit_polynomial_log(std::span<const double> T, std::span<const double> log_c,
                              const FitOptions& options = {});
HeatCapFit fit_polynomial(std::span<const HeatSample> samples, const FitOptions& options = {});

/// Reads `T,c` columns (header required, `#` comment lines and blank lines ignored).
std::vector<HeatSample> read_heat_csv(std::istream& is);
std::vector<HeatSample> read_heat_csv_file(const std::string& path);

struct DataCertInputs {
  int d = 1;
  int r = 1;
  int l = 1;
  int n = 1;
  double C = 1.0;
  double h = 0.0;
  double s0 = 0.0;
  FitRegime regime = FitRegime::exponential;
  /// Fit window; samples outside still enter the hypothesis check when T <= T_c.
  double t_min = 0.0;
  double t_max = 0.0;  // 0: no upper limit
  double delta = 1.0;  // polynomial energy scale
  bool monotone_shortcut = false;
};

/// Fits the data, solves int_0^T_c model = (C + budget)/l, and bounds s(T_c) by s0 + int model/T.
/// The entanglement side is not measured. Throws UnsatisfiableError if the fitted energy never
/// reaches the target.
BoundCertificate certify_from_data(std::span<const HeatSample> samples, const DataCertInputs& in);

}  // namespace arealaw
