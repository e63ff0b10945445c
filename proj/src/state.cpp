#include "arealaw/state.hpp"

#include <cmath>

namespace arealaw {

State State::pure(Vector psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw ValidationError("pure state vector has zero norm");
  if (std::abs(norm - 1.0) > 1e-10) throw ValidationError("pure state vector is not normalized");
  return State(std::move(psi));
}

State State::mixed(Matrix rho) {
  validate_density(rho);
  return State(std::move(rho));
}

State State::trusted_mixed(Matrix rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw ValidationError("density matrix must be square and nonempty");
  return State(std::move(rho));
}

Index State::dimension() const { return is_pure() ? vector().size() : matrix().rows(); }

Matrix State::density() const {
  if (is_pure()) return vector() * vector().transpose();
  return matrix();
}

double State::expectation(const Matrix& op) const {
  if (is_pure()) return vector().dot(op * vector());
  return (op.transpose().cwiseProduct(matrix())).sum();
}

void validate_density(const Matrix& rho, double tol) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw ValidationError("density matrix must be square and nonempty");
  if (std::abs(rho.trace() - 1.0) > tol) throw ValidationError("density matrix trace deviates from 1");
  if (max_abs_entry(rho - rho.transpose()) > tol) throw ValidationError("density matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) throw ValidationError("density matrix has a negative eigenvalue");
}

}  // namespace arealaw
