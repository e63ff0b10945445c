#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "arealaw/models.hpp"
#include "arealaw/operators.hpp"
#include "oracles.hpp"

using namespace arealaw;

namespace {

Vector sorted_eigenvalues(const Matrix& h) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(h, Eigen::EigenvaluesOnly).eigenvalues();
}

// Ground energy of the periodic TFIM chain in the even-parity sector: -sum_k sqrt(J^2 + g^2 - 2 J g cos k),
// k = (2m + 1) pi / n.
double tfim_free_fermion_e0(int n, double J, double g) {
  double e = 0.0;
  for (int m = 0; m < n; ++m) {
    const double k = (2 * m + 1) * std::numbers::pi / n;
    e -= std::sqrt(J * J + g * g - 2 * J * g * std::cos(k));
  }
  return e;
}

}  // namespace

TEST_SUITE("models") {
  TEST_CASE("two-site periodic Ising counts its bond twice") {
    const Matrix h = assemble_full(build_tfim(LatticeSpec::make(1, 2), 1.0, 0.0));
    const Vector e = sorted_eigenvalues(h);
    CHECK(e(0) == doctest::Approx(-2.0));
    CHECK(e(1) == doctest::Approx(-2.0));
    CHECK(e(2) == doctest::Approx(2.0));
    CHECK(e(3) == doctest::Approx(2.0));
  }

  TEST_CASE("free spins") {
    const Vector e = sorted_eigenvalues(assemble_full(build_tfim(LatticeSpec::make(1, 3), 0.0, 1.0)));
    const double expected[] = {-3, -1, -1, -1, 1, 1, 1, 3};
    for (int k = 0; k < 8; ++k) CHECK(e(k) == doctest::Approx(expected[k]).epsilon(1e-12));
  }

  TEST_CASE("single ZZ bond") {
    const Matrix h = assemble_full(build_tfim(LatticeSpec::make(1, 2, Boundary::open), 0.7, 0.0));
    CHECK(max_abs_entry(h - Vector(Eigen::Vector4d(-0.7, 0.7, 0.7, -0.7)).asDiagonal().toDenseMatrix()) < 1e-15);
  }

  TEST_CASE("TFIM matrices equal the bit-basis construction") {
    for (bool periodic : {true, false}) {
      for (int n : {3, 4, 6}) {
        const auto lat = LatticeSpec::make(1, n, periodic ? Boundary::periodic : Boundary::open);
        CHECK(max_abs_entry(assemble_full(build_tfim(lat, 1.3, 0.6)) - oracle::tfim(1, n, periodic, 1.3, 0.6)) <
              1e-13);
      }
    }
    const auto sq = LatticeSpec::make(2, 3);
    CHECK(max_abs_entry(assemble_full(build_tfim(sq, 1.0, 2.0)) - oracle::tfim(2, 3, true, 1.0, 2.0)) < 1e-13);
  }

  TEST_CASE("TFIM n=4 ground energies") {
    const double open = sorted_eigenvalues(assemble_full(build_tfim(LatticeSpec::make(1, 4, Boundary::open), 1, 1)))(0);
    const double periodic = sorted_eigenvalues(assemble_full(build_tfim(LatticeSpec::make(1, 4), 1, 1)))(0);
    CHECK(open == doctest::Approx(sorted_eigenvalues(oracle::tfim(1, 4, false, 1, 1))(0)).epsilon(1e-12));
    CHECK(open == doctest::Approx(-4.758770).epsilon(1e-7));
    CHECK(periodic == doctest::Approx(tfim_free_fermion_e0(4, 1, 1)).epsilon(1e-12));
    CHECK(periodic == doctest::Approx(-5.226252).epsilon(1e-7));
  }

  TEST_CASE("XXZ and Bose-Hubbard equal the basis constructions") {
    CHECK(max_abs_entry(assemble_full(build_xxz(LatticeSpec::make(1, 6), 0.8, 1.7)) - oracle::xxz(6, true, 0.8, 1.7)) <
          1e-13);
    CHECK(max_abs_entry(assemble_full(build_xxz(LatticeSpec::make(1, 5, Boundary::open), 1, -0.5)) -
                        oracle::xxz(5, false, 1, -0.5)) < 1e-13);
    for (int n_max : {1, 2, 3}) {
      CHECK(max_abs_entry(assemble_full(build_bose_hubbard(LatticeSpec::make(1, 4), 0.9, 1.2, 0.4, n_max)) -
                          oracle::bose_hubbard(4, 0.9, 1.2, 0.4, n_max)) < 1e-13);
    }
  }

  TEST_CASE("Bose-Hubbard on-site term") {
    const auto spec = build_bose_hubbard(LatticeSpec::make(1, 1), 1.0, 1.0, 0.0, 3);
    const SiteOperator hi = spec.onsite_term(0);
    CHECK(max_abs_entry(hi.matrix - Vector(Eigen::Vector4d(0, 0, 2, 6)).asDiagonal().toDenseMatrix()) < 1e-15);
    const auto free_bosons = build_bose_hubbard(LatticeSpec::make(1, 3), 0.0, 0.7, 0.3, 2);
    const Matrix h = assemble_full(free_bosons);
    CHECK(max_abs_entry(h - Matrix(h.diagonal().asDiagonal())) == 0.0);
  }

  TEST_CASE("hardcore bosons are the XX model") {
    // -J sum (b_i^dagger b_j + h.c.) = -(J/2) sum (XX + YY) for n_max = 1.
    for (int n : {2, 3}) {
      const auto lat = LatticeSpec::make(1, n, Boundary::open);
      const Matrix bh = assemble_full(build_bose_hubbard(lat, 1.0, 5.0, 0.0, 1));
      const Matrix xx = assemble_full(build_xxz(lat, -0.5, 0.0));
      CHECK(max_abs_entry(bh - xx) < 1e-14);
    }
    const auto ring = LatticeSpec::make(1, 3);
    const Vector a = sorted_eigenvalues(assemble_full(build_bose_hubbard(ring, 1.0, 5.0, 0.0, 1)));
    const Vector b = sorted_eigenvalues(assemble_full(build_xxz(ring, -0.5, 0.0)));
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("commuting on-site terms add their spectra") {
    const auto lat = LatticeSpec::make(1, 2, Boundary::open);
    Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
    a(1, 1) = 1.0;
    b(1, 1) = 2.5;
    std::vector<LocalTerm> terms{LocalTerm::dense(0, TermRole::onsite, {0}, a, 2),
                                 LocalTerm::dense(1, TermRole::onsite, {1}, b, 2)};
    const Vector e = sorted_eigenvalues(assemble_full(build_custom(lat, SiteSpace::qubit(), terms, 1, false)));
    CHECK(e(0) == doctest::Approx(0.0));
    CHECK(e(1) == doctest::Approx(1.0));
    CHECK(e(2) == doctest::Approx(2.5));
    CHECK(e(3) == doctest::Approx(3.5));
  }

  TEST_CASE("assembly is independent of term order and Hermitian") {
    auto spec = build_bose_hubbard(LatticeSpec::make(2, 2), 0.6, 1.1, -0.2, 2);
    const Matrix h = assemble_full(spec);
    CHECK(max_abs_entry(h - h.transpose()) == 0.0);
    std::mt19937_64 rng(7);
    std::shuffle(spec.terms.begin(), spec.terms.end(), rng);
    CHECK(max_abs_entry(assemble_full(spec) - h) < 1e-13);
  }

  TEST_CASE("dimension cap") {
    const auto spec = build_tfim(LatticeSpec::make(1, 5), 1, 1);
    CHECK_THROWS_AS(assemble_full(spec, 16), DimensionCapError);
    try {
      assemble_full(spec, 16);
    } catch (const DimensionCapError& e) {
      CHECK(e.dimension() == 32);
    }
  }

  TEST_CASE("Bose-Hubbard factorization across one cut") {
    const double J = 0.8;
    const auto spec = build_bose_hubbard(LatticeSpec::make(1, 4), J, 1.0, 0.0, 3);
    const Region R{{0}, 2, 1};  // sites {0, 1}; site 1 hops to 2 outside
    const auto f = factorize_boundary_term(spec, 1, R);
    REQUIRE(f.factors.size() == 2);
    const Matrix b = local_ops::annihilation(3);
    const FactorPair& cross = f.factors[0];
    CHECK(cross.a.sites == std::vector<int>{1});
    CHECK(cross.b.sites == std::vector<int>{2});
    CHECK(max_abs_entry(cross.a.matrix - (-J) * b.transpose()) < 1e-15);
    CHECK(max_abs_entry(cross.b.matrix - b) < 1e-15);
    CHECK(f.factors[1].b.sites.empty());
    CHECK(f.factors[1].b.matrix(0, 0) == 1.0);
  }

  TEST_CASE("interior sites factorize trivially") {
    const auto spec = build_tfim(LatticeSpec::make(1, 8), 1.0, 1.0);
    const auto f = factorize_boundary_term(spec, 3, Region{{2}, 4, 1});
    REQUIRE(f.factors.size() == 1);
    CHECK(f.factors[0].b.sites.empty());
    CHECK_THROWS_AS(factorize_boundary_term(spec, 7, Region{{2}, 4, 1}), ValidationError);
  }

  TEST_CASE("factorizations reconstruct their terms") {
    const auto check_all = [](const HamiltonianSpec& spec, int l) {
      const int q = spec.local_dim();
      for (const auto& cube : partition_lattice(spec.lattice, l, spec.r).cubes) {
        for (int i : cube.sites(spec.lattice)) {
          const auto f = factorize_boundary_term(spec, i, cube);
          const SiteOperator rec = f.reconstruct(q);
          const SiteOperator term = spec.coupling_term(i);
          std::vector<int> all = rec.sites;
          all.insert(all.end(), term.sites.begin(), term.sites.end());
          std::sort(all.begin(), all.end());
          all.erase(std::unique(all.begin(), all.end()), all.end());
          CHECK(max_abs_entry(embed(rec, all, q) - embed(term, all, q)) <= 1e-12);
        }
      }
    };
    check_all(build_tfim(LatticeSpec::make(1, 6), 1.0, 2.0), 3);
    check_all(build_tfim(LatticeSpec::make(2, 4), 1.0, 2.0), 2);
    check_all(build_xxz(LatticeSpec::make(1, 6), 1.0, 0.5), 2);
    check_all(build_bose_hubbard(LatticeSpec::make(1, 4), 1.0, 1.0, 0.0, 2), 2);
  }

  TEST_CASE("translation invariance of assembled Hamiltonians") {
    CHECK(check_translation_invariance(build_tfim(LatticeSpec::make(1, 6), 1, 0.5)));
    CHECK(check_translation_invariance(build_tfim(LatticeSpec::make(2, 3), 1, 0.5)));
    CHECK(check_translation_invariance(build_bose_hubbard(LatticeSpec::make(1, 4), 1, 1, 0.2, 2)));
    auto impurity = build_tfim(LatticeSpec::make(1, 6), 1, 0.5);
    impurity.terms.push_back(LocalTerm::dense(0, TermRole::onsite, {0}, 0.3 * local_ops::pauli_z(), 2));
    CHECK_FALSE(check_translation_invariance(impurity));
    CHECK_FALSE(check_translation_invariance(build_tfim(LatticeSpec::make(1, 6, Boundary::open), 1, 0.5)));
  }

  TEST_CASE("supports must stay within the interaction radius") {
    Matrix zz = kron(local_ops::pauli_z(), local_ops::pauli_z());
    std::vector<LocalTerm> terms{LocalTerm::dense(0, TermRole::coupling, {0, 3}, zz, 2)};
    CHECK_THROWS_AS(build_custom(LatticeSpec::make(1, 8), SiteSpace::qubit(), terms, 1, false), ValidationError);
    CHECK_NOTHROW(build_custom(LatticeSpec::make(1, 8), SiteSpace::qubit(), terms, 3, false));
    CHECK_THROWS_AS(SiteSpace::boson(0), ValidationError);
  }
}
