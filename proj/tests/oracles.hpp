#pragma once
// Reference constructions written directly in the computational basis. Nothing here goes
// through the library's embedding or partial-trace code.

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Value of site s (0 = most significant digit) in basis state b.
inline int digit(long b, int s, int sites, int q) {
  for (int k = sites - 1; k > s; --k) b /= q;
  return static_cast<int>(b % q);
}

inline long with_digit(long b, int s, int sites, int q, int v) {
  long place = 1;
  for (int k = sites - 1; k > s; --k) place *= q;
  return b + (v - digit(b, s, sites, q)) * place;
}

inline long power(long b, int e) {
  long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Nearest-neighbour bonds (i, i + e_axis) of a d-cube of edge n, one per site and axis.
inline std::vector<std::pair<int, int>> forward_bonds(int d, int n, bool periodic) {
  std::vector<std::pair<int, int>> bonds;
  const int sites = static_cast<int>(power(n, d));
  for (int s = 0; s < sites; ++s) {
    for (int axis = 0; axis < d; ++axis) {
      const long stride = power(n, d - 1 - axis);
      const int x = static_cast<int>((s / stride) % n);
      if (x + 1 < n) {
        bonds.push_back({s, static_cast<int>(s + stride)});
      } else if (periodic) {
        bonds.push_back({s, static_cast<int>(s - x * stride)});
      }
    }
  }
  return bonds;
}

// -J sum_bonds Z_i Z_j - g sum_i X_i with Z|0> = |0>.
inline Matrix tfim(int d, int n, bool periodic, double J, double g) {
  const int sites = static_cast<int>(power(n, d));
  const long dim = power(2, sites);
  Matrix h = Matrix::Zero(dim, dim);
  const auto bonds = forward_bonds(d, n, periodic);
  for (long b = 0; b < dim; ++b) {
    for (auto [i, j] : bonds) {
      const int zi = digit(b, i, sites, 2) ? -1 : 1;
      const int zj = digit(b, j, sites, 2) ? -1 : 1;
      h(b, b) -= J * zi * zj;
    }
    for (int s = 0; s < sites; ++s) h(with_digit(b, s, sites, 2, 1 - digit(b, s, sites, 2)), b) -= g;
  }
  return h;
}

// J sum (XX + YY) + Jz sum ZZ on a chain.
inline Matrix xxz(int n, bool periodic, double J, double Jz) {
  const long dim = power(2, n);
  Matrix h = Matrix::Zero(dim, dim);
  for (long b = 0; b < dim; ++b) {
    for (auto [i, j] : forward_bonds(1, n, periodic)) {
      const int bi = digit(b, i, n, 2), bj = digit(b, j, n, 2);
      h(b, b) += Jz * (bi == bj ? 1.0 : -1.0);
      if (bi != bj) {
        const long flipped = with_digit(with_digit(b, i, n, 2, bj), j, n, 2, bi);
        h(flipped, b) += 2.0 * J;
      }
    }
  }
  return h;
}

// -J sum_{directed nn pairs} b_i^dagger b_j + U sum n(n-1) - mu sum n on a periodic chain (n >= 3).
inline Matrix bose_hubbard(int n, double J, double U, double mu, int n_max) {
  const int q = n_max + 1;
  const long dim = power(q, n);
  Matrix h = Matrix::Zero(dim, dim);
  for (long b = 0; b < dim; ++b) {
    for (int s = 0; s < n; ++s) {
      const int occ = digit(b, s, n, q);
      h(b, b) += U * occ * (occ - 1) - mu * occ;
    }
    for (int i = 0; i < n; ++i) {
      for (int j : {(i + 1) % n, (i + n - 1) % n}) {
        const int ni = digit(b, i, n, q), nj = digit(b, j, n, q);
        if (nj == 0 || ni == n_max) continue;
        const long to = with_digit(with_digit(b, j, n, q, nj - 1), i, n, q, ni + 1);
        h(to, b) -= J * std::sqrt(static_cast<double>(nj) * (ni + 1));
      }
    }
  }
  return h;
}

// Entanglement entropy of `region` for a pure state, from the singular values of the amplitude
// matrix psi[(region digits), (rest digits)].
inline double schmidt_entropy(const Vector& psi, const std::vector<int>& region, int sites, int q) {
  std::vector<int> rest;
  for (int s = 0; s < sites; ++s) {
    bool in = false;
    for (int r : region) in = in || r == s;
    if (!in) rest.push_back(s);
  }
  const long da = power(q, static_cast<int>(region.size()));
  const long db = power(q, static_cast<int>(rest.size()));
  Matrix m = Matrix::Zero(da, db);
  for (long b = 0; b < psi.size(); ++b) {
    long ia = 0, ib = 0;
    for (int s : region) ia = ia * q + digit(b, s, sites, q);
    for (int s : rest) ib = ib * q + digit(b, s, sites, q);
    m(ia, ib) = psi(b);
  }
  const Vector sv = Eigen::JacobiSVD<Matrix>(m).singularValues();
  double S = 0.0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    const double p = sv(k) * sv(k);
    if (p > 0.0) S -= p * std::log(p);
  }
  return S;
}

inline Vector random_state(long dim, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Vector v(dim);
  for (long i = 0; i < dim; ++i) v(i) = nd(rng);
  return v.normalized();
}

// Random full-rank density matrix A A^T / tr, or low rank when `rank` < dim.
inline Matrix random_density(long dim, std::mt19937_64& rng, long rank = -1) {
  if (rank < 0) rank = dim;
  std::normal_distribution<double> nd;
  Matrix a(dim, rank);
  for (long i = 0; i < dim; ++i)
    for (long k = 0; k < rank; ++k) a(i, k) = nd(rng);
  Matrix rho = a * a.transpose();
  return rho / rho.trace();
}

}  // namespace oracle
