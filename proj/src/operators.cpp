#include "arealaw/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace arealaw {

std::size_t hilbert_dimension(std::size_t site_count, int local_dim) {
  std::size_t dim = 1;
  for (std::size_t i = 0; i < site_count; ++i) {
    if (dim > (std::size_t{1} << 40) / static_cast<std::size_t>(local_dim)) return std::size_t(-1);
    dim *= static_cast<std::size_t>(local_dim);
  }
  return dim;
}

IndexSplit::IndexSplit(int site_count, std::span<const int> selected, int local_dim) {
  std::vector<bool> is_selected(site_count, false);
  for (int p : selected) is_selected[p] = true;
  std::vector<Index> inner_weights, outer_weights;
  Index w = 1;
  std::vector<Index> weight(site_count);
  for (int p = site_count - 1; p >= 0; --p) {
    weight[p] = w;
    w *= local_dim;
  }
  for (int p = 0; p < site_count; ++p) (is_selected[p] ? inner_weights : outer_weights).push_back(weight[p]);

  auto offsets = [local_dim](const std::vector<Index>& weights) {
    std::vector<Index> out{0};
    // weights are listed most significant first; expand digit by digit.
    for (Index wt : weights) {
      std::vector<Index> next;
      next.reserve(out.size() * local_dim);
      for (Index base : out) {
        for (int c = 0; c < local_dim; ++c) next.push_back(base + c * wt);
      }
      out = std::move(next);
    }
    return out;
  };
  inner_offset = offsets(inner_weights);
  outer_offset = offsets(outer_weights);
}

std::vector<int> positions_in(std::span<const int> sites, std::span<const int> subset) {
  std::vector<int> pos;
  pos.reserve(subset.size());
  for (int s : subset) {
    auto it = std::lower_bound(sites.begin(), sites.end(), s);
    if (it == sites.end() || *it != s) throw ValidationError("site " + std::to_string(s) + " not in support");
    pos.push_back(static_cast<int>(it - sites.begin()));
  }
  return pos;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

void add_embedded(Matrix& target, const SiteOperator& op, std::span<const int> target_sites, int local_dim,
                  double scale) {
  const auto pos = positions_in(target_sites, op.sites);
  const IndexSplit split(static_cast<int>(target_sites.size()), pos, local_dim);
  const Index inner = static_cast<Index>(split.inner_offset.size());
  if (op.matrix.rows() != inner || op.matrix.cols() != inner) {
    throw ValidationError("operator matrix dimension does not match its support");
  }
  for (Index base : split.outer_offset) {
    for (Index b = 0; b < inner; ++b) {
      const Index col = base + split.inner_offset[b];
      for (Index a = 0; a < inner; ++a) {
        const double v = op.matrix(a, b);
        if (v != 0.0) target(base + split.inner_offset[a], col) += scale * v;
      }
    }
  }
}

Matrix embed(const SiteOperator& op, std::span<const int> target, int local_dim) {
  const auto dim = static_cast<Index>(hilbert_dimension(target.size(), local_dim));
  Matrix out = Matrix::Zero(dim, dim);
  add_embedded(out, op, target, local_dim);
  return out;
}

SiteOperator canonical(std::vector<int> sites, const Matrix& matrix, int local_dim) {
  const int m = static_cast<int>(sites.size());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return sites[a] < sites[b]; });
  for (int j = 1; j < m; ++j) {
    if (sites[order[j]] == sites[order[j - 1]]) throw ValidationError("operator support lists a site twice");
  }
  const auto dim = static_cast<Index>(hilbert_dimension(m, local_dim));
  if (matrix.rows() != dim || matrix.cols() != dim) {
    throw ValidationError("operator matrix dimension does not match its support");
  }
  // Original index -> index with factors sorted by site.
  std::vector<Index> to_sorted(dim);
  std::vector<int> digits(m);
  for (Index x = 0; x < dim; ++x) {
    Index rest = x;
    for (int p = m - 1; p >= 0; --p) {
      digits[p] = static_cast<int>(rest % local_dim);
      rest /= local_dim;
    }
    Index y = 0;
    for (int j = 0; j < m; ++j) y = y * local_dim + digits[order[j]];
    to_sorted[x] = y;
  }
  SiteOperator out{std::vector<int>(m), Matrix(dim, dim)};
  for (int j = 0; j < m; ++j) out.sites[j] = sites[order[j]];
  for (Index x = 0; x < dim; ++x) {
    for (Index y = 0; y < dim; ++y) out.matrix(to_sorted[x], to_sorted[y]) = matrix(x, y);
  }
  return out;
}

SiteOperator sum(std::span<const SiteOperator> terms, int local_dim) {
  std::vector<int> support;
  for (const auto& t : terms) support.insert(support.end(), t.sites.begin(), t.sites.end());
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  SiteOperator out{support, Matrix::Zero(static_cast<Index>(hilbert_dimension(support.size(), local_dim)),
                                         static_cast<Index>(hilbert_dimension(support.size(), local_dim)))};
  for (const auto& t : terms) add_embedded(out.matrix, t, support, local_dim);
  return out;
}

Matrix partial_trace(const Matrix& rho, std::span<const int> sites, std::span<const int> keep, int local_dim) {
  const auto pos = positions_in(sites, keep);
  const IndexSplit split(static_cast<int>(sites.size()), pos, local_dim);
  const Index inner = static_cast<Index>(split.inner_offset.size());
  if (rho.rows() != static_cast<Index>(inner * split.outer_offset.size())) {
    throw ValidationError("density matrix dimension does not match its sites");
  }
  Matrix out = Matrix::Zero(inner, inner);
  for (Index base : split.outer_offset) {
    for (Index b = 0; b < inner; ++b) {
      const Index col = base + split.inner_offset[b];
      for (Index a = 0; a < inner; ++a) out(a, b) += rho(base + split.inner_offset[a], col);
    }
  }
  return out;
}

Matrix partial_trace_pure(const Vector& psi, std::span<const int> sites, std::span<const int> keep, int local_dim) {
  const auto pos = positions_in(sites, keep);
  const IndexSplit split(static_cast<int>(sites.size()), pos, local_dim);
  const Index inner = static_cast<Index>(split.inner_offset.size());
  const Index outer = static_cast<Index>(split.outer_offset.size());
  if (psi.size() != inner * outer) throw ValidationError("state vector dimension does not match its sites");
  Matrix amplitudes(inner, outer);
  for (Index o = 0; o < outer; ++o) {
    for (Index a = 0; a < inner; ++a) amplitudes(a, o) = psi(split.outer_offset[o] + split.inner_offset[a]);
  }
  return amplitudes * amplitudes.transpose();
}

std::vector<Index> basis_permutation(std::span<const int> image, int local_dim) {
  const int m = static_cast<int>(image.size());
  const auto dim = static_cast<Index>(hilbert_dimension(m, local_dim));
  std::vector<Index> weight(m);
  Index w = 1;
  for (int p = m - 1; p >= 0; --p) {
    weight[p] = w;
    w *= local_dim;
  }
  std::vector<Index> perm(dim);
  for (Index x = 0; x < dim; ++x) {
    Index rest = x;
    Index y = 0;
    for (int p = m - 1; p >= 0; --p) {
      y += (rest % local_dim) * weight[image[p]];
      rest /= local_dim;
    }
    perm[x] = y;
  }
  return perm;
}

namespace local_ops {

Matrix identity(int dim) { return Matrix::Identity(dim, dim); }

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix pauli_iy() {
  Matrix m(2, 2);
  m << 0, 1, -1, 0;
  return m;
}

Matrix annihilation(int n_max) {
  Matrix b = Matrix::Zero(n_max + 1, n_max + 1);
  for (int k = 1; k <= n_max; ++k) b(k - 1, k) = std::sqrt(static_cast<double>(k));
  return b;
}

Matrix number(int n_max) {
  Matrix m = Matrix::Zero(n_max + 1, n_max + 1);
  for (int k = 0; k <= n_max; ++k) m(k, k) = k;
  return m;
}

}  // namespace local_ops

}  // namespace arealaw
