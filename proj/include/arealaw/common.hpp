#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace arealaw {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Default ceiling on the dense Hilbert-space dimension; `--allow-large` lifts it to kLargeDimensionCap.
inline constexpr std::size_t kDefaultDimensionCap = 4096;
inline constexpr std::size_t kLargeDimensionCap = 8192;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed configuration, violated precondition, inconsistent geometry.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionCapError : public ValidationError {
 public:
  DimensionCapError(std::size_t dimension, std::size_t cap)
      : ValidationError("Hilbert-space dimension " + std::to_string(dimension) +
                        " exceeds the cap of " + std::to_string(cap)),
        dimension_(dimension),
        cap_(cap) {}

  std::size_t dimension() const { return dimension_; }
  std::size_t cap() const { return cap_; }

 private:
  std::size_t dimension_;
  std::size_t cap_;
};

/// A computation produced something that cannot be trusted (non-Hermitian input, negative
/// eigenvalues of a density matrix beyond clipping, failed convergence).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A requested temperature or certificate cannot exist for the given inputs.
class UnsatisfiableError : public Error {
 public:
  using Error::Error;
};

inline double max_abs_entry(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace arealaw
