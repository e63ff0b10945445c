#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace arealaw {

enum class Verdict { holds, hypothesis_not_met, fails };
std::string to_string(Verdict v);

/// lhs <= rhs with the recorded slack rhs - lhs.
struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  Verdict verdict = Verdict::holds;
};

/// Builds a check that holds when lhs <= rhs + tol; `gated` turns it into hypothesis-not-met.
InequalityCheck make_check(std::string name, double lhs, double rhs, double tol, bool gated = false);

enum class CouplingMode { operator_norm, covariance };
std::string to_string(CouplingMode m);

/// Which value of h a certificate uses.
enum class HMode { min, operator_norm, covariance };
std::string to_string(HMode m);
HMode h_mode_from_string(const std::string& s);

/// One (h_A, h_B) pair of a boundary factorization evaluated in a state.
struct FactorCovariance {
  int site = 0;
  int pair = 0;
  double cov = 0.0;    // Cov(h_A^dagger, h_B)
  double var_a = 0.0;  // Cov(h_A^dagger, h_A^dagger)
  double var_b = 0.0;  // Cov(h_B, h_B)
  /// h_B lies inside a single partition cube, so its product-state expectation factorizes.
  bool single_cube = true;
};

struct CouplingStrength {
  double value = 0.0;
  CouplingMode mode = CouplingMode::operator_norm;
  double operator_norm = 0.0;  // max_i ||H_{B_r(i)}||
  std::optional<double> covariance;  // max over boundary sites of |sum_k Cov|
  /// False when some h_B spans several cubes, which voids the covariance identity.
  bool covariance_valid = true;
  std::map<int, double> per_site;
  std::vector<FactorCovariance> pairs;
};

/// Boundary energy per site of the lattice is budget / l, with budget = 2 |dR| h / l^(d-1)
/// counted exactly; nominal is the looser 4 d r h.
struct EnergyBudget {
  int d = 1;
  int r = 1;
  int l = 1;
  double h = 0.0;
  long boundary_sites = 0;
  double exact = 0.0;
  double nominal = 0.0;
};

enum class FitRegime { exponential, polynomial };
std::string to_string(FitRegime r);
FitRegime fit_regime_from_string(const std::string& s);

/// c(T) <= k (Delta/T)^gamma e^(-Delta/T) (exponential) or k (T/Delta)^gamma (polynomial).
struct HeatCapFit {
  FitRegime regime = FitRegime::exponential;
  double k = 1.0;
  double gamma = 1.0;
  double delta = 1.0;
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t points = 0;
  double residual_rms = 0.0;  // log space, before inflation
  double log_inflation = 0.0; // log k shift applied to dominate the data
  double min_slack = 1.0;     // min over the window of model / data
  int iterations = 0;
  bool converged = true;
  std::string message;
};

/// Sampled check of c(T) <= model(T).
struct HypothesisCheck {
  std::vector<double> grid;
  bool holds = true;
  bool monotone_shortcut = false;
  double worst_log_margin = 0.0;  // min over the grid of log model - log c
  double worst_T = 0.0;
};

struct Prop1Constant {
  FitRegime regime = FitRegime::exponential;
  double F = 0.0;
  /// Exponential case: "T_c <= Delta/gamma" or "T_c > Delta/gamma"; empty when T_c is unknown.
  std::string branch;
};

struct BoundCertificate {
  std::string model;
  std::string state;
  bool data_driven = false;
  std::string note;

  int d = 1;
  int r = 1;
  int l = 1;
  int n = 1;
  double C = 1.0;
  double energy_density = 0.0;  // tr(H rho) / n^d, shifted
  CouplingStrength h;
  EnergyBudget budget;
  double target = 0.0;          // (C + budget.exact) / l
  double target_nominal = 0.0;  // (C + 4 d r h) / l
  double T_c = 0.0;
  double u_at_Tc = 0.0;
  double s_at_Tc = 0.0;
  double s0 = 0.0;
  int degeneracy = 1;
  bool degeneracy_ambiguous = false;
  bool translation_invariant = true;

  std::optional<double> measured_S;  // E[S(rho_R)]
  double lemma2_rhs = 0.0;           // l^d s(T_c)
  Prop1Constant constant;
  double F_nominal = 0.0;            // F evaluated with the 4 d r h budget
  double prop1_rhs = 0.0;            // s(0) l^d + F l^(d-1)

  std::optional<HeatCapFit> fit;
  HypothesisCheck fit_hypothesis;
  std::vector<InequalityCheck> checks;
  std::vector<std::string> warnings;

  /// holds if every check holds, fails if any fails, otherwise hypothesis-not-met.
  Verdict overall() const;
};

struct PepoBoundParams {
  double k = 0.0;  // c(T) <= k T^(-nu) e^(-Delta/T)
  double nu = 0.0;
  double gap = 0.0;  // Delta
  double delta = 1.0;
  int n = 1;
  int d = 1;
  double T = 0.0;  // delta / log n
  double eta = 0.0;
  std::optional<double> trace_gap;
  HypothesisCheck hypothesis;
  std::vector<InequalityCheck> checks;
};

}  // namespace arealaw
