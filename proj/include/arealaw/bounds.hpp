#pragma once

#include <functional>
#include <span>
#include <vector>

#include "arealaw/certificate.hpp"
#include "arealaw/common.hpp"
#include "arealaw/lattice.hpp"
#include "arealaw/models.hpp"
#include "arealaw/spectral.hpp"
#include "arealaw/state.hpp"

namespace arealaw {

/// max_i ||H_{B_r(i)}|| (largest singular value) over every site of the lattice. Only the coupling
/// part enters: on-site terms never straddle a cut.
double operator_norm_coupling(const HamiltonianSpec& spec);

/// h(rho) over the boundary sites of every cube of `partition`. Covariances use
/// Cov(A, B) = <A^dagger B> - <A^dagger><B> on reduced states of A u B.
CouplingStrength coupling_strength(const State& rho, const HamiltonianSpec& spec, const RegionPartition& partition,
                                   HMode mode = HMode::min);
/// Same for the boundary of a single region.
CouplingStrength coupling_strength(const State& rho, const HamiltonianSpec& spec, const Region& region,
                                   HMode mode = HMode::min);

/// sigma = (x)_m rho_{R_m}, returned in the lattice's basis order.
Matrix product_over_partition(const State& rho, const LatticeSpec& lat, int local_dim,
                              const RegionPartition& partition, std::size_t dimension_cap = kDefaultDimensionCap);

struct EnergyGap {
  double direct = 0.0;          // tr(H rho) - tr(H sigma) with full matrices
  double covariance_sum = 0.0;  // sum over boundary sites of sum_k Cov(h_A^dagger, h_B)
  double discrepancy = 0.0;
  bool covariance_route_valid = true;
};

/// tr(H (rho - sigma)) by both routes. `h` is the assembled Hamiltonian.
EnergyGap boundary_energy_gap(const State& rho, const HamiltonianSpec& spec, const Matrix& h,
                              const RegionPartition& partition);

EnergyBudget energy_budget(int d, int r, int l, double h);

/// Smallest admissible C >= 1 with tr(H rho) <= C n^d / l.
double energy_constant(double energy_density, int l);

struct Lemma2Result {
  double T = 0.0;
  double u = 0.0;
  double s = 0.0;
  double energy_density = 0.0;
  EnergyBudget budget;
  InequalityCheck hypothesis;   // tr(H rho)/n^d + budget/l <= u(T)
  InequalityCheck conclusion;   // E[S(rho_R)] <= l^d s(T)
  std::vector<double> per_cube;
  bool translation_invariant = true;
  std::vector<std::string> warnings;
};

struct Lemma2Options {
  HMode h_mode = HMode::min;
  /// Skip the translation-invariance requirement; a warning is recorded instead.
  bool waive_translation_invariance = false;
  double tol = 1e-8;
};

/// `h_shifted` is H - E_0 on the full space, consistent with `sd`.
Lemma2Result lemma2_certify(const State& rho, const HamiltonianSpec& spec, const SpectralData& sd,
                            const Matrix& h_shifted, int l, double T, const Lemma2Options& options = {});

/// Smallest T with u(T) >= target for nondecreasing u, by bisection in log T to relative
/// tolerance `rel_tol`. Throws UnsatisfiableError if target >= u_sup, ValidationError if target <= 0.
double solve_Tc(const std::function<double(double)>& u, double target, double u_sup, double rel_tol = 1e-10);
double solve_Tc(const SpectralData& sd, int n_sites, double target, double rel_tol = 1e-10);

/// F_{k,gamma,Delta,l} for the budget total C + 4 d r h (or any C + B).
Prop1Constant prop1_constant(FitRegime regime, double k, double gamma, double delta, double budget_total, int l);
Prop1Constant prop1_constant(FitRegime regime, double k, double gamma, double delta, double C, double h, int d,
                             int r, int l);

/// Check of c(T) <= model(T) on `grid` using log c from the spectrum.
HypothesisCheck check_fit_hypothesis(const SpectralData& sd, int n_sites, const HeatCapFit& fit,
                                     std::vector<double> grid, double tol = 1e-10);

/// Grid points <= T_max together with `points` log-spaced values in [T_max / ratio, T_max].
std::vector<double> hypothesis_grid(std::span<const double> user_grid, double T_max, int points = 40,
                                    double ratio = 1000.0);

struct Prop1Options {
  HMode h_mode = HMode::min;
  std::optional<double> C;
  std::vector<double> grid;
  int refinement_points = 40;
  double refinement_ratio = 1000.0;
  /// When c is nondecreasing on the grid, check the fit only on [T_c/2, T_c].
  bool monotone_shortcut = false;
  bool waive_translation_invariance = false;
  double tol = 1e-8;
};

/// Target temperature for a state: T_c with u(T_c) = (C + budget)/l, plus the pieces that define it.
BoundCertificate prop1_setup(const State& rho, const HamiltonianSpec& spec, const SpectralData& sd,
                             const Matrix& h_shifted, int l, const Prop1Options& options = {});

/// Full chain measured E[S] <= l^d s(T_c) <= s(0) l^d + F l^(d-1).
BoundCertificate prop1_certify(const State& rho, const HamiltonianSpec& spec, const SpectralData& sd,
                               const Matrix& h_shifted, int l, const HeatCapFit& fit,
                               const Prop1Options& options = {});

/// eta = (2k/Delta) (log n / delta)^(nu - 1) n^(d - Delta/delta).
double pepo_eta(double k, double nu, double gap, double delta, int n, int d);

/// Fills eta; with a spectrum also the exact trace distance at T = delta / log n, the sampled
/// hypothesis for T <= 1 / log n, and the entropy step s(T) - s(0) <= k (log n)^nu / (delta^nu n^(Delta/delta)).
PepoBoundParams pepo_bound(double k, double nu, double gap, double delta, const LatticeSpec& lat);
PepoBoundParams pepo_certify(const SpectralData& sd, const LatticeSpec& lat, const HeatCapFit& fit, double delta,
                             std::span<const double> user_grid = {}, double tol = 1e-10);

/// ||rho_T - rho_0||_1 in the eigenbasis of H.
double trace_distance_to_groundspace(const SpectralData& sd, double T);

/// Invariance of the state under unit translations along every axis (periodic lattices only).
bool is_translation_invariant(const State& rho, const LatticeSpec& lat, int local_dim, double tol = 1e-10);

/// Uniform average of S(rho_{R_m}) over the partition, with the individual values.
double average_cube_entropy(const State& rho, const LatticeSpec& lat, int local_dim, const RegionPartition& partition,
                            std::vector<double>* per_cube = nullptr);

}  // namespace arealaw
