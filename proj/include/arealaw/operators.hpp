#pragma once

#include <span>
#include <vector>

#include "arealaw/common.hpp"

namespace arealaw {

/// Dense operator on an ascending list of sites. The matrix acts on the tensor product of the
/// sites' local spaces in the listed order (first site = most significant index digit).
/// An empty site list denotes a scalar (1x1 matrix).
struct SiteOperator {
  std::vector<int> sites;
  Matrix matrix;
};

/// Splits the basis of `m` sites into a selected subset (positions in `selected`) and the rest.
/// `index(inner, outer) = inner_offset[inner] + outer_offset[outer]`.
struct IndexSplit {
  std::vector<Index> inner_offset;
  std::vector<Index> outer_offset;

  IndexSplit(int site_count, std::span<const int> selected_positions, int local_dim);
};

/// Positions of `subset` inside the ascending list `sites`; throws if some element is missing.
std::vector<int> positions_in(std::span<const int> sites, std::span<const int> subset);

std::size_t hilbert_dimension(std::size_t site_count, int local_dim);

Matrix kron(const Matrix& a, const Matrix& b);

/// Re-expresses `op` on the larger ascending site list `target` by padding with identities.
Matrix embed(const SiteOperator& op, std::span<const int> target, int local_dim);

/// target += scale * embed(op, target_sites).
void add_embedded(Matrix& target, const SiteOperator& op, std::span<const int> target_sites, int local_dim,
                  double scale = 1.0);

/// Brings an operator whose factors are listed in arbitrary site order into ascending order.
SiteOperator canonical(std::vector<int> sites, const Matrix& matrix, int local_dim);

/// Sum of operators on the union of their supports.
SiteOperator sum(std::span<const SiteOperator> terms, int local_dim);

/// Reduced density matrix on `keep` (ascending, subset of `sites`) of a density matrix on `sites`.
Matrix partial_trace(const Matrix& rho, std::span<const int> sites, std::span<const int> keep, int local_dim);

/// Reduced density matrix of a pure state, computed from the Gram matrix of the reshaped amplitudes.
Matrix partial_trace_pure(const Vector& psi, std::span<const int> sites, std::span<const int> keep,
                          int local_dim);

/// Basis permutation induced by the site map `image` (site s -> image[s]).
std::vector<Index> basis_permutation(std::span<const int> image, int local_dim);

namespace local_ops {

Matrix identity(int dim);
Matrix pauli_x();
Matrix pauli_z();
/// i * Y, which is real: [[0, 1], [-1, 0]]. Y (x) Y = -(iY) (x) (iY).
Matrix pauli_iy();
/// Truncated bosonic annihilation operator on {|0>,...,|n_max>}.
Matrix annihilation(int n_max);
Matrix number(int n_max);

}  // namespace local_ops

}  // namespace arealaw
