#include "arealaw/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace arealaw {

double SpectralData::gap() const {
  return degeneracy < dimension() ? eigenvalues(degeneracy) : 0.0;
}

bool SpectralData::degeneracy_ambiguous() const {
  Index loose = 0;
  while (loose < dimension() && eigenvalues(loose) <= 10.0 * degeneracy_tol) ++loose;
  return loose != degeneracy;
}

SpectralData diagonalize(const Matrix& h, const DiagonalizeOptions& options) {
  if (h.rows() != h.cols() || h.rows() == 0) throw ValidationError("Hamiltonian must be square and nonempty");
  if (static_cast<std::size_t>(h.rows()) > options.dimension_cap) {
    throw DimensionCapError(static_cast<std::size_t>(h.rows()), options.dimension_cap);
  }
  const double asym = max_abs_entry(h - h.transpose());
  if (asym > options.hermitian_tol * std::max(1.0, max_abs_entry(h))) {
    throw NumericError("input matrix is not Hermitian (max asymmetry " + std::to_string(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) throw NumericError("dense eigensolver did not converge");

  SpectralData sd;
  sd.ground_energy = es.eigenvalues()(0);
  sd.eigenvalues = es.eigenvalues().array() - sd.ground_energy;
  sd.eigenvalues(0) = 0.0;
  sd.eigenvectors = es.eigenvectors();
  sd.degeneracy_tol = options.degeneracy_tol.value_or(1e-9 * std::max(1.0, sd.width()));
  sd.degeneracy = 0;
  while (sd.degeneracy < sd.dimension() && sd.eigenvalues(sd.degeneracy) <= sd.degeneracy_tol) ++sd.degeneracy;
  return sd;
}

Matrix groundspace_projector(const SpectralData& sd) {
  const auto v = sd.eigenvectors.leftCols(sd.degeneracy);
  return v * v.transpose();
}

State ground_state(const SpectralData& sd) {
  if (sd.degeneracy == 1) return State::pure(sd.eigenvectors.col(0).normalized());
  return State::trusted_mixed(groundspace_projector(sd) / sd.degeneracy);
}

std::vector<std::size_t> density_of_states(const SpectralData& sd, int bins) {
  if (bins < 1) throw ValidationError("density_of_states needs at least one bin");
  std::vector<std::size_t> counts(bins, 0);
  const double width = sd.width();
  for (Index k = 0; k < sd.dimension(); ++k) {
    int b = width > 0.0 ? static_cast<int>(std::floor(sd.eigenvalues(k) / width * bins)) : 0;
    counts[std::clamp(b, 0, bins - 1)] += 1;
  }
  return counts;
}

}  // namespace arealaw
