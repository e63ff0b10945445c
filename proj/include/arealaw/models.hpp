#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arealaw/common.hpp"
#include "arealaw/lattice.hpp"
#include "arealaw/operators.hpp"

namespace arealaw {

enum class SiteKind { qubit, boson };

struct SiteSpace {
  SiteKind kind = SiteKind::qubit;
  int local_dim = 2;

  static SiteSpace qubit() { return {SiteKind::qubit, 2}; }
  /// Fock space truncated at occupation n_max.
  static SiteSpace boson(int n_max);
  int n_max() const { return local_dim - 1; }
};

/// H_i (on-site) or a piece of H_{B_r(i)} (coupling owned by site i).
enum class TermRole { onsite, coupling };

/// One single-site factor of a product-form term.
struct SiteFactor {
  int site = 0;
  Matrix op;
};

struct LocalTerm {
  int owner = 0;
  TermRole role = TermRole::coupling;
  SiteOperator op;
  /// Optional product form op = coefficient * (x)_f factors[f].op, with distinct sites. Used to
  /// split the term across a region cut without a numerical decomposition.
  double coefficient = 1.0;
  std::vector<SiteFactor> factors;

  static LocalTerm product(int owner, TermRole role, double coefficient, std::vector<SiteFactor> factors,
                           int local_dim);
  static LocalTerm dense(int owner, TermRole role, std::vector<int> sites, const Matrix& matrix, int local_dim);
  bool has_product_form() const { return !factors.empty(); }
};

/// H = sum_i H_i + sum_i H_{B_r(i)}, kept as the list of local pieces so that the per-site
/// grouping (which fixes h = ||H_{B_r(i)}||) is explicit.
///
/// Coupling grouping of the built-in models: every nearest-neighbour bond is owned by the site
/// it leaves in the positive axis direction (ZZ, XX+YY), while the Bose-Hubbard hopping keeps one
/// term per directed pair, H_{B(i)} = -J b_i^dagger sum_{j nn i} b_j.
struct HamiltonianSpec {
  std::string name;
  LatticeSpec lattice;
  SiteSpace site_space;
  std::vector<LocalTerm> terms;
  int r = 1;
  bool translation_invariant = false;
  std::map<std::string, double> params;

  int local_dim() const { return site_space.local_dim; }
  std::size_t dimension() const;
  /// H_{B_r(i)}: all coupling terms owned by `site`, summed on their common support.
  SiteOperator coupling_term(int site) const;
  /// H_i: all on-site terms owned by `site`.
  SiteOperator onsite_term(int site) const;
  /// Checks supports against the lattice and the radius r.
  void validate() const;
};

HamiltonianSpec build_tfim(const LatticeSpec& lat, double J, double g);
/// H = J sum_<ij> (X_i X_j + Y_i Y_j) + Jz sum_<ij> Z_i Z_j.
HamiltonianSpec build_xxz(const LatticeSpec& lat, double J, double Jz);
HamiltonianSpec build_bose_hubbard(const LatticeSpec& lat, double J, double U, double mu, int n_max);
HamiltonianSpec build_custom(const LatticeSpec& lat, SiteSpace space, std::vector<LocalTerm> terms, int r,
                             bool translation_invariant, std::string name = "custom");

/// Dense matrix of the full Hamiltonian; verifies Hermiticity to 1e-12 relative to the largest entry.
Matrix assemble_full(const HamiltonianSpec& spec, std::size_t dimension_cap = kDefaultDimensionCap);

struct FactorPair {
  SiteOperator a;  // supported on A = B_r(i) n R
  SiteOperator b;  // supported on B = B_r(i) \ R (possibly empty: scalar identity)
};

/// H_{B_r(i)} = sum_k h_A^(k) (x) h_B^(k).
struct BoundaryFactorization {
  int site = 0;
  std::vector<int> a_sites;
  std::vector<int> b_sites;
  std::vector<FactorPair> factors;
  /// True when every h_B^(k) is a tensor product of single-site operators, so its expectation
  /// factorizes over any partition of B.
  bool b_factors_are_site_products = true;

  /// sum_k h_A (x) h_B as a SiteOperator on A u B.
  SiteOperator reconstruct(int local_dim) const;
};

/// Convention: one pair (coefficient * A-factors, B-factors) per product-form piece crossing the
/// cut, dense pieces crossing the cut are split by operator Schmidt decomposition, and one final
/// pair (remaining A-terms, 1_B).
BoundaryFactorization factorize_boundary_term(const HamiltonianSpec& spec, int site, const Region& region);

/// S_t H S_t^dagger == H for unit shifts along every axis, within `tol` (max entry).
bool check_translation_invariance(const HamiltonianSpec& spec, double tol = 1e-12,
                                  std::size_t dimension_cap = kDefaultDimensionCap);

}  // namespace arealaw
