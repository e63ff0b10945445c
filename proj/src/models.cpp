#include "arealaw/models.hpp"

#include <algorithm>
#include <numeric>

namespace arealaw {

SiteSpace SiteSpace::boson(int n_max) {
  if (n_max < 1) throw ValidationError("boson occupation cutoff n_max must be >= 1, got " + std::to_string(n_max));
  return {SiteKind::boson, n_max + 1};
}

LocalTerm LocalTerm::product(int owner, TermRole role, double coefficient, std::vector<SiteFactor> factors,
                             int local_dim) {
  std::sort(factors.begin(), factors.end(), [](const SiteFactor& a, const SiteFactor& b) { return a.site < b.site; });
  LocalTerm t;
  t.owner = owner;
  t.role = role;
  t.coefficient = coefficient;
  Matrix m = Matrix::Identity(1, 1) * coefficient;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    if (f > 0 && factors[f].site == factors[f - 1].site) {
      throw ValidationError("product term lists site " + std::to_string(factors[f].site) + " twice");
    }
    if (factors[f].op.rows() != local_dim || factors[f].op.cols() != local_dim) {
      throw ValidationError("single-site factor has wrong dimension");
    }
    t.op.sites.push_back(factors[f].site);
    m = kron(m, factors[f].op);
  }
  t.op.matrix = std::move(m);
  t.factors = std::move(factors);
  return t;
}

LocalTerm LocalTerm::dense(int owner, TermRole role, std::vector<int> sites, const Matrix& matrix, int local_dim) {
  LocalTerm t;
  t.owner = owner;
  t.role = role;
  t.op = canonical(std::move(sites), matrix, local_dim);
  return t;
}

std::size_t HamiltonianSpec::dimension() const {
  return hilbert_dimension(static_cast<std::size_t>(lattice.site_count()), local_dim());
}

namespace {

SiteOperator collect(const HamiltonianSpec& spec, int site, TermRole role) {
  std::vector<SiteOperator> parts;
  for (const auto& t : spec.terms) {
    if (t.owner == site && t.role == role) parts.push_back(t.op);
  }
  if (parts.empty()) return SiteOperator{{site}, Matrix::Zero(spec.local_dim(), spec.local_dim())};
  return sum(parts, spec.local_dim());
}

}  // namespace

SiteOperator HamiltonianSpec::coupling_term(int site) const { return collect(*this, site, TermRole::coupling); }

SiteOperator HamiltonianSpec::onsite_term(int site) const { return collect(*this, site, TermRole::onsite); }

void HamiltonianSpec::validate() const {
  if (r < 1) throw ValidationError("interaction radius r must be positive");
  if (local_dim() < 2) throw ValidationError("local dimension must be >= 2");
  for (const auto& t : terms) {
    if (!lattice.contains(t.owner)) throw ValidationError("term owner " + std::to_string(t.owner) + " outside lattice");
    if (t.op.sites.empty()) throw ValidationError("term has empty support");
    const auto dim = static_cast<Index>(hilbert_dimension(t.op.sites.size(), local_dim()));
    if (t.op.matrix.rows() != dim || t.op.matrix.cols() != dim) {
      throw ValidationError("term matrix dimension does not match its support");
    }
    for (int s : t.op.sites) {
      if (!lattice.contains(s)) throw ValidationError("term support site " + std::to_string(s) + " outside lattice");
      if (lattice.distance(t.owner, s) > r) {
        throw ValidationError("term owned by site " + std::to_string(t.owner) + " reaches site " + std::to_string(s) +
                              " beyond radius r=" + std::to_string(r));
      }
    }
    if (t.role == TermRole::onsite && (t.op.sites.size() != 1 || t.op.sites[0] != t.owner)) {
      throw ValidationError("on-site term must act only on its owner site");
    }
  }
}

HamiltonianSpec build_tfim(const LatticeSpec& lat, double J, double g) {
  HamiltonianSpec spec;
  spec.name = "tfim";
  spec.lattice = lat;
  spec.site_space = SiteSpace::qubit();
  spec.translation_invariant = lat.boundary == Boundary::periodic;
  spec.params = {{"J", J}, {"g", g}};
  const Matrix x = local_ops::pauli_x();
  const Matrix z = local_ops::pauli_z();
  for (int i = 0; i < lat.site_count(); ++i) {
    spec.terms.push_back(LocalTerm::product(i, TermRole::onsite, -g, {{i, x}}, 2));
    for (int axis = 0; axis < lat.d; ++axis) {
      const int j = lat.shifted(i, axis, +1);
      if (j < 0 || j == i) continue;
      spec.terms.push_back(LocalTerm::product(i, TermRole::coupling, -J, {{i, z}, {j, z}}, 2));
    }
  }
  return spec;
}

HamiltonianSpec build_xxz(const LatticeSpec& lat, double J, double Jz) {
  HamiltonianSpec spec;
  spec.name = "xxz";
  spec.lattice = lat;
  spec.site_space = SiteSpace::qubit();
  spec.translation_invariant = lat.boundary == Boundary::periodic;
  spec.params = {{"J", J}, {"Jz", Jz}};
  const Matrix x = local_ops::pauli_x();
  const Matrix iy = local_ops::pauli_iy();
  const Matrix z = local_ops::pauli_z();
  for (int i = 0; i < lat.site_count(); ++i) {
    for (int axis = 0; axis < lat.d; ++axis) {
      const int j = lat.shifted(i, axis, +1);
      if (j < 0 || j == i) continue;
      spec.terms.push_back(LocalTerm::product(i, TermRole::coupling, J, {{i, x}, {j, x}}, 2));
      spec.terms.push_back(LocalTerm::product(i, TermRole::coupling, -J, {{i, iy}, {j, iy}}, 2));
      spec.terms.push_back(LocalTerm::product(i, TermRole::coupling, Jz, {{i, z}, {j, z}}, 2));
    }
  }
  return spec;
}

HamiltonianSpec build_bose_hubbard(const LatticeSpec& lat, double J, double U, double mu, int n_max) {
  HamiltonianSpec spec;
  spec.name = "bose_hubbard";
  spec.lattice = lat;
  spec.site_space = SiteSpace::boson(n_max);
  spec.translation_invariant = lat.boundary == Boundary::periodic;
  spec.params = {{"J", J}, {"U", U}, {"mu", mu}, {"n_max", n_max}};
  const int q = spec.local_dim();
  const Matrix b = local_ops::annihilation(n_max);
  const Matrix bdag = b.transpose();
  const Matrix num = local_ops::number(n_max);
  const Matrix onsite = U * num * (num - Matrix::Identity(q, q)) - mu * num;
  for (int i = 0; i < lat.site_count(); ++i) {
    spec.terms.push_back(LocalTerm::dense(i, TermRole::onsite, {i}, onsite, q));
    for (int axis = 0; axis < lat.d; ++axis) {
      for (int step : {-1, +1}) {
        const int j = lat.shifted(i, axis, step);
        if (j < 0 || j == i) continue;
        spec.terms.push_back(LocalTerm::product(i, TermRole::coupling, -J, {{i, bdag}, {j, b}}, q));
      }
    }
  }
  return spec;
}

HamiltonianSpec build_custom(const LatticeSpec& lat, SiteSpace space, std::vector<LocalTerm> terms, int r,
                             bool translation_invariant, std::string name) {
  HamiltonianSpec spec;
  spec.name = std::move(name);
  spec.lattice = lat;
  spec.site_space = space;
  spec.terms = std::move(terms);
  spec.r = r;
  spec.translation_invariant = translation_invariant && lat.boundary == Boundary::periodic;
  spec.validate();
  return spec;
}

Matrix assemble_full(const HamiltonianSpec& spec, std::size_t dimension_cap) {
  const std::size_t dim = spec.dimension();
  if (dim > dimension_cap) throw DimensionCapError(dim, dimension_cap);
  std::vector<int> all(spec.lattice.site_count());
  std::iota(all.begin(), all.end(), 0);
  Matrix h = Matrix::Zero(static_cast<Index>(dim), static_cast<Index>(dim));
  for (const auto& t : spec.terms) add_embedded(h, t.op, all, spec.local_dim());
  const double asym = max_abs_entry(h - h.transpose());
  if (asym > 1e-12 * max_abs_entry(h)) {
    throw NumericError("assembled Hamiltonian is not Hermitian (max asymmetry " + std::to_string(asym) + ")");
  }
  return h;
}

namespace {

// Matrix of `op` with its tensor factors listed in the order `order` (a permutation of op.sites).
Matrix reorder(const SiteOperator& op, const std::vector<int>& order, int q) {
  const int m = static_cast<int>(order.size());
  const auto dim = op.matrix.rows();
  std::vector<int> where(m);
  for (int j = 0; j < m; ++j) {
    auto it = std::find(op.sites.begin(), op.sites.end(), order[j]);
    where[j] = static_cast<int>(it - op.sites.begin());
  }
  std::vector<Index> map(dim);
  std::vector<int> digits(m);
  for (Index x = 0; x < dim; ++x) {
    Index rest = x;
    for (int p = m - 1; p >= 0; --p) {
      digits[p] = static_cast<int>(rest % q);
      rest /= q;
    }
    Index y = 0;
    for (int j = 0; j < m; ++j) y = y * q + digits[where[j]];
    map[x] = y;  // sorted index x -> reordered index y
  }
  Matrix out(dim, dim);
  for (Index x = 0; x < dim; ++x) {
    for (Index y = 0; y < dim; ++y) out(map[x], map[y]) = op.matrix(x, y);
  }
  return out;
}

// Operator Schmidt decomposition of a dense term across (A-part, B-part) of its support.
std::vector<FactorPair> schmidt_split(const SiteOperator& op, const std::vector<int>& a_part,
                                      const std::vector<int>& b_part, int q) {
  std::vector<int> order = a_part;
  order.insert(order.end(), b_part.begin(), b_part.end());
  const Matrix m = reorder(op, order, q);
  const auto da = static_cast<Index>(hilbert_dimension(a_part.size(), q));
  const auto db = static_cast<Index>(hilbert_dimension(b_part.size(), q));
  // Realignment: R[(a1,a2),(b1,b2)] = M[(a1,b1),(a2,b2)].
  Matrix realigned(da * da, db * db);
  for (Index a1 = 0; a1 < da; ++a1)
    for (Index b1 = 0; b1 < db; ++b1)
      for (Index a2 = 0; a2 < da; ++a2)
        for (Index b2 = 0; b2 < db; ++b2) realigned(a1 * da + a2, b1 * db + b2) = m(a1 * db + b1, a2 * db + b2);
  Eigen::JacobiSVD<Matrix> svd(realigned, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  std::vector<FactorPair> out;
  for (Index k = 0; k < sv.size(); ++k) {
    if (sv(k) <= 1e-14 * std::max(1.0, sv(0))) break;
    const double w = std::sqrt(sv(k));
    Matrix ha(da, da), hb(db, db);
    for (Index a1 = 0; a1 < da; ++a1)
      for (Index a2 = 0; a2 < da; ++a2) ha(a1, a2) = w * svd.matrixU()(a1 * da + a2, k);
    for (Index b1 = 0; b1 < db; ++b1)
      for (Index b2 = 0; b2 < db; ++b2) hb(b1, b2) = w * svd.matrixV()(b1 * db + b2, k);
    out.push_back({SiteOperator{a_part, ha}, SiteOperator{b_part, hb}});
  }
  return out;
}

Matrix kron_factors(const std::vector<SiteFactor>& factors, double coefficient) {
  Matrix m = Matrix::Identity(1, 1) * coefficient;
  for (const auto& f : factors) m = kron(m, f.op);
  return m;
}

}  // namespace

SiteOperator BoundaryFactorization::reconstruct(int local_dim) const {
  std::vector<int> support = a_sites;
  support.insert(support.end(), b_sites.begin(), b_sites.end());
  std::sort(support.begin(), support.end());
  const auto dim = static_cast<Index>(hilbert_dimension(support.size(), local_dim));
  SiteOperator out{support, Matrix::Zero(dim, dim)};
  for (const auto& p : factors) out.matrix += embed(p.a, support, local_dim) * embed(p.b, support, local_dim);
  return out;
}

BoundaryFactorization factorize_boundary_term(const HamiltonianSpec& spec, int site, const Region& region) {
  const LatticeSpec& lat = spec.lattice;
  const int q = spec.local_dim();
  const std::vector<int> cube = region.sites(lat);
  auto in_cube = [&](int s) { return std::binary_search(cube.begin(), cube.end(), s); };
  if (!in_cube(site)) throw ValidationError("site " + std::to_string(site) + " is not inside the region");

  BoundaryFactorization f;
  f.site = site;
  for (int s : manhattan_ball(lat, site, spec.r)) (in_cube(s) ? f.a_sites : f.b_sites).push_back(s);

  std::vector<SiteOperator> remaining;
  for (const auto& t : spec.terms) {
    if (t.owner != site || t.role != TermRole::coupling) continue;
    std::vector<int> a_part, b_part;
    for (int s : t.op.sites) (in_cube(s) ? a_part : b_part).push_back(s);
    if (b_part.empty()) {
      remaining.push_back(t.op);
    } else if (t.has_product_form()) {
      std::vector<SiteFactor> fa, fb;
      for (const auto& fac : t.factors) (in_cube(fac.site) ? fa : fb).push_back(fac);
      f.factors.push_back({SiteOperator{a_part, kron_factors(fa, t.coefficient)},
                           SiteOperator{b_part, kron_factors(fb, 1.0)}});
    } else {
      if (b_part.size() > 1) f.b_factors_are_site_products = false;
      for (auto& p : schmidt_split(t.op, a_part, b_part, q)) f.factors.push_back(std::move(p));
    }
  }
  SiteOperator rest = remaining.empty() ? SiteOperator{{site}, Matrix::Zero(q, q)} : sum(remaining, q);
  f.factors.push_back({std::move(rest), SiteOperator{{}, Matrix::Identity(1, 1)}});
  return f;
}

bool check_translation_invariance(const HamiltonianSpec& spec, double tol, std::size_t dimension_cap) {
  const LatticeSpec& lat = spec.lattice;
  if (lat.boundary != Boundary::periodic) return false;
  const Matrix h = assemble_full(spec, dimension_cap);
  const double scale = std::max(1.0, max_abs_entry(h));
  for (int axis = 0; axis < lat.d; ++axis) {
    const auto perm = basis_permutation(lat.translation(axis, 1), spec.local_dim());
    for (Index x = 0; x < h.rows(); ++x) {
      for (Index y = 0; y < h.cols(); ++y) {
        if (std::abs(h(perm[x], perm[y]) - h(x, y)) > tol * scale) return false;
      }
    }
  }
  return true;
}

}  // namespace arealaw
