#pragma once

#include <variant>

#include "arealaw/common.hpp"

namespace arealaw {

/// A state of the whole lattice: either a normalized vector or a density matrix.
class State {
 public:
  static State pure(Vector psi);
  static State mixed(Matrix rho);
  /// Skips the positivity check; for matrices built from a known spectral decomposition.
  static State trusted_mixed(Matrix rho);

  bool is_pure() const { return std::holds_alternative<Vector>(data_); }
  Index dimension() const;
  const Vector& vector() const { return std::get<Vector>(data_); }
  const Matrix& matrix() const { return std::get<Matrix>(data_); }

  /// |psi><psi| or the stored matrix.
  Matrix density() const;
  /// tr(O rho) for an operator on the full space.
  double expectation(const Matrix& op) const;

 private:
  explicit State(std::variant<Vector, Matrix> d) : data_(std::move(d)) {}
  std::variant<Vector, Matrix> data_;
};

/// Unit trace, symmetric, eigenvalues above -tol.
void validate_density(const Matrix& rho, double tol = 1e-10);

}  // namespace arealaw
