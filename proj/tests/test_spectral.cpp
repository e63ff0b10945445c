#include <doctest.h>

#include <algorithm>

#include "arealaw/models.hpp"
#include "arealaw/spectral.hpp"
#include "oracles.hpp"

using namespace arealaw;

TEST_SUITE("spectral") {
  TEST_CASE("diagonal input is shifted and sorted") {
    Matrix h = Matrix::Zero(3, 3);
    h.diagonal() << 3, 1, 2;
    const SpectralData sd = diagonalize(h);
    CHECK(sd.eigenvalues(0) == 0.0);
    CHECK(sd.eigenvalues(1) == doctest::Approx(1.0));
    CHECK(sd.eigenvalues(2) == doctest::Approx(2.0));
    CHECK(sd.ground_energy == doctest::Approx(1.0));
    CHECK(sd.degeneracy == 1);
  }

  TEST_CASE("decomposition invariants on TFIM") {
    const Matrix h = oracle::tfim(1, 6, true, 1.0, 0.8);
    const SpectralData sd = diagonalize(h);
    const Index dim = h.rows();
    CHECK(max_abs_entry(sd.eigenvectors.transpose() * sd.eigenvectors - Matrix::Identity(dim, dim)) < 1e-10);
    const Matrix shifted = h - sd.ground_energy * Matrix::Identity(dim, dim);
    CHECK(max_abs_entry(sd.eigenvectors * sd.eigenvalues.asDiagonal() * sd.eigenvectors.transpose() - shifted) <=
          1e-8 * max_abs_entry(h));
    CHECK(std::is_sorted(sd.eigenvalues.data(), sd.eigenvalues.data() + dim));
  }

  TEST_CASE("degeneracy of the paramagnet and of the classical Ising chain") {
    const SpectralData para = diagonalize(oracle::tfim(1, 4, true, 1.0, 1.0));
    CHECK(para.degeneracy == 1);
    const Vector ref = Eigen::SelfAdjointEigenSolver<Matrix>(oracle::tfim(1, 4, true, 1.0, 1.0)).eigenvalues();
    CHECK(para.gap() == doctest::Approx(ref(1) - ref(0)).epsilon(1e-10));
    const SpectralData ising = diagonalize(oracle::tfim(1, 4, true, 1.0, 0.0));
    CHECK(ising.degeneracy == 2);
    CHECK(ising.gap() == doctest::Approx(4.0));
  }

  TEST_CASE("shift invariance") {
    const Matrix h = oracle::tfim(1, 4, false, 1.0, 0.5);
    const SpectralData a = diagonalize(h);
    const SpectralData b = diagonalize(h + 17.25 * Matrix::Identity(h.rows(), h.cols()));
    CHECK((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(b.ground_energy - a.ground_energy == doctest::Approx(17.25));
  }

  TEST_CASE("groundspace projector") {
    const Matrix h = oracle::tfim(1, 4, true, 1.0, 0.0);
    const SpectralData sd = diagonalize(h);
    const Matrix p = groundspace_projector(sd);
    CHECK(max_abs_entry(p * p - p) < 1e-10);
    CHECK(p.trace() == doctest::Approx(2.0));
    CHECK(max_abs_entry(p * h - h * p) < 1e-10);
    const State rho0 = ground_state(sd);
    CHECK_FALSE(rho0.is_pure());
    CHECK(max_abs_entry(rho0.matrix() - p / 2.0) < 1e-12);

    const SpectralData nd = diagonalize(oracle::tfim(1, 4, true, 1.0, 1.0));
    const Matrix p1 = groundspace_projector(nd);
    const Vector v = nd.eigenvectors.col(0);
    CHECK(max_abs_entry(p1 - v * v.transpose()) < 1e-12);
    CHECK(ground_state(nd).is_pure());
  }

  TEST_CASE("density of states") {
    const SpectralData free = diagonalize(oracle::tfim(1, 3, true, 0.0, 1.0));
    CHECK(density_of_states(free, 4) == std::vector<std::size_t>{1, 3, 3, 1});
    CHECK(density_of_states(free, 1) == std::vector<std::size_t>{8});
    CHECK_THROWS_AS(density_of_states(free, 0), ValidationError);

    const SpectralData sd = diagonalize(oracle::tfim(1, 4, true, 1.0, 1.0));
    const int bins = 7;
    std::vector<std::size_t> recount(bins, 0);
    const double width = sd.width();
    for (Index k = 0; k < sd.dimension(); ++k) {
      int b = static_cast<int>(sd.eigenvalues(k) / width * bins);
      recount[std::min(b, bins - 1)]++;
    }
    CHECK(density_of_states(sd, bins) == recount);
  }

  TEST_CASE("input validation") {
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(diagonalize(bad), NumericError);
    DiagonalizeOptions small;
    small.dimension_cap = 4;
    CHECK_THROWS_AS(diagonalize(Matrix::Identity(8, 8), small), DimensionCapError);
  }

  TEST_CASE("degeneracy tolerance is configurable") {
    Matrix h = Matrix::Zero(3, 3);
    h.diagonal() << 0.0, 1e-6, 1.0;
    CHECK(diagonalize(h).degeneracy == 1);
    DiagonalizeOptions loose;
    loose.degeneracy_tol = 1e-5;
    CHECK(diagonalize(h, loose).degeneracy == 2);
  }
}
