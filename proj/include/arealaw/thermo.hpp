#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "arealaw/common.hpp"
#include "arealaw/spectral.hpp"
#include "arealaw/state.hpp"

namespace arealaw {

// Units: energies in the Hamiltonian's units, k_B = 1, entropies in nats. Every quantity below
// uses the ground-shifted spectrum, so u(T) is measured from the ground energy.

/// Normalized Boltzmann weights exp(-E_k/T)/Z_T.
Vector gibbs_weights(const SpectralData& sd, double T);
/// log Z_T, accumulated with the ground term factored out (E_0 = 0).
double log_partition(const SpectralData& sd, double T);

/// rho_T = V diag(w) V^T.
Matrix gibbs_state(const SpectralData& sd, double T);

struct ThermalSample {
  double T = 0.0;
  double u = 0.0;      // energy density
  double s = 0.0;      // entropy density
  double c = 0.0;      // specific heat per site (spectral variance)
  double log_z = 0.0;  // log Z_T
  double F = 0.0;      // -T log Z_T (whole system)
};

struct ThermalCurve {
  int n_sites = 1;
  std::vector<ThermalSample> samples;
};

ThermalSample thermal_point(const SpectralData& sd, double T, int n_sites);

/// Evaluates every grid point; `T_grid` must be positive and strictly ascending.
ThermalCurve thermal_curve(const SpectralData& sd, std::span<const double> T_grid, int n_sites);

double energy_density(const SpectralData& sd, double T, int n_sites);
double entropy_density(const SpectralData& sd, double T, int n_sites);
/// s(0) = log(D) / n^d.
double ground_entropy_density(const SpectralData& sd, int n_sites);

/// c(T) from the variance of the Boltzmann-weighted spectrum.
double specific_heat_spectral(const SpectralData& sd, double T, int n_sites);
/// log c(T) evaluated by log-sum-exp, finite even where c(T) underflows. -inf if c == 0 exactly.
double log_specific_heat(const SpectralData& sd, double T, int n_sites);

/// Cov_rho(H, H) / (n^d T^2) = (tr(rho H^2) - tr(rho H)^2) / (n^d T^2) for any density matrix.
double specific_heat_cov(const Matrix& rho, const Matrix& h, double T, int n_sites);

/// Operator route for the Gibbs state: Cov = || (H - <H>) rho_T^(1/2) ||_F^2 with the matrix H,
/// using only the eigenvectors of the decomposition. HV is formed once; each temperature then
/// costs O(dim^2). H must be the shifted operator H - E_0.
class CovarianceRoute {
 public:
  CovarianceRoute(const SpectralData& sd, const Matrix& shifted_h);
  double specific_heat(double T, int n_sites) const;

 private:
  const SpectralData* sd_;
  Matrix hv_;            // H V
  Vector diag_;          // (V^T H V)_kk
};

/// F_T(rho) = tr(H rho) - T S(rho). Pass the shifted H to compare against -T log Z_T.
double free_energy(const State& rho, const Matrix& h, double T);

/// S(rho || sigma) = tr rho log rho - tr rho log sigma; +infinity when rho has weight outside
/// the support of sigma (eigenvalues of sigma below 1e-14 count as zero).
double relative_entropy(const Matrix& rho, const Matrix& sigma);

/// S(rho || rho_T) with log rho_T = -H/T - log Z_T taken from the spectrum, exact at any T.
double relative_entropy_to_gibbs(const State& rho, const SpectralData& sd, double T);

enum class GridSpacing { linear, log };
GridSpacing grid_spacing_from_string(const std::string& s);
std::vector<double> make_grid(GridSpacing spacing, double t_min, double t_max, int points);

/// Header `T,u,s,c,logZ,F`, one row per grid point, shortest round-trip doubles.
void write_curve_csv(std::ostream& os, const ThermalCurve& curve);

}  // namespace arealaw
