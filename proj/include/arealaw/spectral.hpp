#pragma once

#include <optional>
#include <vector>

#include "arealaw/common.hpp"
#include "arealaw/state.hpp"

namespace arealaw {

/// Full eigensystem with the spectrum shifted so that the ground energy is zero.
struct SpectralData {
  Vector eigenvalues;   // ascending, eigenvalues[0] == 0
  Matrix eigenvectors;  // columns, orthonormal
  int degeneracy = 1;
  double ground_energy = 0.0;  // pre-shift
  double degeneracy_tol = 0.0;

  Index dimension() const { return eigenvalues.size(); }
  double width() const { return eigenvalues.size() ? eigenvalues(eigenvalues.size() - 1) : 0.0; }
  /// Spectral gap above the groundspace (0 if the whole spectrum is degenerate).
  double gap() const;
  /// Number of eigenvalues whose distance to the groundspace is at most degeneracy_tol * 10;
  /// differs from `degeneracy` when levels sit close to the tolerance.
  bool degeneracy_ambiguous() const;
};

struct DiagonalizeOptions {
  /// Default 1e-9 * max(1, spectral width).
  std::optional<double> degeneracy_tol;
  std::size_t dimension_cap = kDefaultDimensionCap;
  double hermitian_tol = 1e-12;
};

SpectralData diagonalize(const Matrix& h, const DiagonalizeOptions& options = {});

/// Rank-D orthogonal projector onto the groundspace.
Matrix groundspace_projector(const SpectralData& sd);

/// Ground vector if D = 1, otherwise the maximally mixed groundspace state P / D.
State ground_state(const SpectralData& sd);

/// Histogram of the shifted spectrum over [0, width] in `bins` equal bins (last bin closed).
std::vector<std::size_t> density_of_states(const SpectralData& sd, int bins);

}  // namespace arealaw
