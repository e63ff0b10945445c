#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "arealaw/spectral.hpp"
#include "arealaw/thermo.hpp"
#include "oracles.hpp"

using namespace arealaw;

namespace {

SpectralData two_level(double gap) {
  Matrix h = Matrix::Zero(2, 2);
  h(1, 1) = gap;
  return diagonalize(h);
}

// <H>/N at temperature T straight from an eigensolve of the oracle matrix.
double oracle_energy_density(const Matrix& h, double T, int n) {
  const Vector e = Eigen::SelfAdjointEigenSolver<Matrix>(h).eigenvalues();
  double z = 0.0, eu = 0.0;
  for (Index k = 0; k < e.size(); ++k) {
    const double w = std::exp(-(e(k) - e(0)) / T);
    z += w;
    eu += w * (e(k) - e(0));
  }
  return eu / z / n;
}

}  // namespace

TEST_SUITE("thermo") {
  TEST_CASE("infinite temperature gives the maximally mixed state") {
    const SpectralData sd = diagonalize(oracle::tfim(1, 3, true, 1.0, 0.7));
    const Matrix rho = gibbs_state(sd, 1e9);
    CHECK(max_abs_entry(rho - Matrix::Identity(8, 8) / 8.0) < 1e-6);
    CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("two-level closed forms") {
    const double gap = 1.3;
    const SpectralData sd = two_level(gap);
    for (double T : {0.05, 0.3, 1.0, 4.0}) {
      const double x = std::exp(-gap / T);
      const Vector w = gibbs_weights(sd, T);
      CHECK(w(0) == doctest::Approx(1.0 / (1.0 + x)).epsilon(1e-14));
      CHECK(w(1) == doctest::Approx(x / (1.0 + x)).epsilon(1e-12));
      CHECK(energy_density(sd, T, 1) == doctest::Approx(gap * x / (1.0 + x)).epsilon(1e-12));
      const double y = gap / T;
      const double schottky = y * y * std::exp(y) / std::pow(1.0 + std::exp(y), 2);
      CHECK(specific_heat_spectral(sd, T, 1) == doctest::Approx(schottky).epsilon(1e-12));
      CHECK(std::exp(log_specific_heat(sd, T, 1)) == doctest::Approx(schottky).epsilon(1e-12));
    }
  }

  TEST_CASE("log specific heat stays finite where c underflows") {
    const SpectralData sd = two_level(1.0);
    const double T = 1e-3;
    CHECK(specific_heat_spectral(sd, T, 1) == 0.0);
    // log c = 2 log(1/T) - 1/T for the Schottky form at small T
    CHECK(log_specific_heat(sd, T, 1) == doctest::Approx(2.0 * std::log(1.0 / T) - 1.0 / T).epsilon(1e-12));
  }

  TEST_CASE("TFIM energy density against an eigenweight sum") {
    const Matrix h = oracle::tfim(1, 4, true, 1.0, 1.0);
    const SpectralData sd = diagonalize(h);
    CHECK(energy_density(sd, 1.0, 4) == doctest::Approx(oracle_energy_density(h, 1.0, 4)).epsilon(1e-12));
    const Matrix shifted = h - sd.ground_energy * Matrix::Identity(16, 16);
    CHECK((gibbs_state(sd, 1.0) * shifted).trace() / 4 ==
          doctest::Approx(oracle_energy_density(h, 1.0, 4)).epsilon(1e-12));
  }

  TEST_CASE("ground entropy of a degenerate model") {
    const SpectralData sd = diagonalize(oracle::tfim(1, 4, true, 1.0, 0.0));
    CHECK(entropy_density(sd, 1e-6, 4) == doctest::Approx(std::log(2.0) / 4).epsilon(1e-12));
    CHECK(ground_entropy_density(sd, 4) == doctest::Approx(std::log(2.0) / 4));
  }

  TEST_CASE("free spins factorize") {
    const double g = 0.9;
    const int n = 4;
    const SpectralData sd = diagonalize(oracle::tfim(1, n, true, 0.0, g));
    for (double T : {0.1, 0.7, 2.0, 9.0}) {
      const double x = std::exp(-2 * g / T);
      const double u1 = 2 * g * x / (1 + x);
      const double s1 = std::log(1 + x) + u1 / T;
      const ThermalSample p = thermal_point(sd, T, n);
      CHECK(p.u == doctest::Approx(u1).epsilon(1e-12));
      CHECK(p.s == doctest::Approx(s1).epsilon(1e-12));
      CHECK(p.log_z == doctest::Approx(n * std::log(1 + x)).epsilon(1e-12));
      CHECK(p.F == doctest::Approx(-T * n * std::log(1 + x)).epsilon(1e-12));
    }
  }

  TEST_CASE("covariance routes agree with the spectral variance and du/dT") {
    const Matrix h = oracle::xxz(6, true, 1.0, 0.6);
    const SpectralData sd = diagonalize(h);
    const Matrix shifted = h - sd.ground_energy * Matrix::Identity(h.rows(), h.cols());
    const CovarianceRoute route(sd, shifted);
    const double T = 0.5, step = 1e-4;
    const double spectral = specific_heat_spectral(sd, T, 6);
    const double cov = specific_heat_cov(gibbs_state(sd, T), shifted, T, 6);
    const double fd = (energy_density(sd, T + step, 6) - energy_density(sd, T - step, 6)) / (2 * step);
    CHECK(cov == doctest::Approx(spectral).epsilon(1e-12));
    CHECK(route.specific_heat(T, 6) == doctest::Approx(spectral).epsilon(1e-12));
    CHECK(std::abs(fd - cov) <= 1e-6 * std::abs(cov));
  }

  TEST_CASE("high-temperature heat capacity vanishes") {
    const SpectralData sd = diagonalize(oracle::tfim(1, 4, true, 1.0, 1.0));
    const double var_max = std::pow(sd.width(), 2) / 4;
    for (double T : {10.0, 100.0, 1000.0}) CHECK(specific_heat_spectral(sd, T, 4) <= var_max / (4 * T * T) + 1e-15);
    CHECK(specific_heat_spectral(sd, 1e6, 4) < 1e-10);
  }

  TEST_CASE("curve monotonicity and thermodynamic relations") {
    const SpectralData sd = diagonalize(oracle::bose_hubbard(3, 1.0, 2.0, 0.5, 2));
    const auto grid = make_grid(GridSpacing::log, 0.02, 50.0, 80);
    const ThermalCurve curve = thermal_curve(sd, grid, 3);
    REQUIRE(curve.samples.size() == 80);
    for (std::size_t i = 1; i < curve.samples.size(); ++i) {
      CHECK(curve.samples[i].u >= curve.samples[i - 1].u - 1e-14);
      CHECK(curve.samples[i].s >= curve.samples[i - 1].s - 1e-14);
    }
    for (const auto& p : curve.samples) CHECK(p.c >= 0.0);
    for (double T : {0.3, 1.0, 3.0}) {
      const double h = 1e-4 * T;
      const double du = (energy_density(sd, T + h, 3) - energy_density(sd, T - h, 3)) / (2 * h);
      const double ds = (entropy_density(sd, T + h, 3) - entropy_density(sd, T - h, 3)) / (2 * h);
      CHECK(ds == doctest::Approx(du / T).epsilon(1e-6));
    }
    CHECK(entropy_density(sd, 1e7, 3) * 3 == doctest::Approx(std::log(27.0)).epsilon(1e-6));
  }

  TEST_CASE("free energy") {
    const Matrix h = oracle::tfim(1, 3, true, 1.0, 0.8);
    const SpectralData sd = diagonalize(h);
    const Matrix shifted = h - sd.ground_energy * Matrix::Identity(8, 8);
    const double T = 0.7;
    const State gibbs = State::mixed(gibbs_state(sd, T));
    CHECK(free_energy(gibbs, shifted, T) == doctest::Approx(-T * log_partition(sd, T)).epsilon(1e-12));
    CHECK(std::abs(free_energy(State::pure(sd.eigenvectors.col(0)), shifted, T)) < 1e-12);

    std::mt19937_64 rng(11);
    const double f_gibbs = free_energy(gibbs, shifted, T);
    for (int trial = 0; trial < 100; ++trial) {
      const State rho = State::mixed(oracle::random_density(8, rng, 1 + trial % 8));
      const double f = free_energy(rho, shifted, T);
      CHECK(f >= f_gibbs - 1e-12);
      CHECK(f - f_gibbs == doctest::Approx(T * relative_entropy_to_gibbs(rho, sd, T)).epsilon(1e-8));
    }
  }

  TEST_CASE("relative entropy") {
    std::mt19937_64 rng(3);
    const Matrix rho = oracle::random_density(4, rng);
    CHECK(std::abs(relative_entropy(rho, rho)) < 1e-12);
    Matrix a = Matrix::Zero(2, 2), b = Matrix::Identity(2, 2) / 2;
    a(0, 0) = 1.0;
    CHECK(relative_entropy(a, b) == doctest::Approx(std::log(2.0)));
    CHECK(relative_entropy(b, a) == std::numeric_limits<double>::infinity());
    const Matrix sigma = oracle::random_density(4, rng);
    CHECK(relative_entropy(rho, sigma) > 0.0);

    const SpectralData sd = diagonalize(oracle::tfim(1, 3, true, 1.0, 0.5));
    const Matrix r3 = oracle::random_density(8, rng);
    CHECK(relative_entropy(r3, gibbs_state(sd, 2.0)) ==
          doctest::Approx(relative_entropy_to_gibbs(State::mixed(r3), sd, 2.0)).epsilon(1e-9));
  }

  TEST_CASE("grids and curve export") {
    const auto g = make_grid(GridSpacing::log, 0.1, 10.0, 5);
    CHECK(g.front() == 0.1);
    CHECK(g.back() == 10.0);
    CHECK(g[2] == doctest::Approx(1.0));
    const auto lin = make_grid(GridSpacing::linear, 1.0, 2.0, 3);
    CHECK(lin[1] == doctest::Approx(1.5));
    CHECK_THROWS_AS(make_grid(GridSpacing::log, 0.0, 1.0, 3), ValidationError);

    const SpectralData sd = two_level(1.0);
    CHECK_THROWS_AS(energy_density(sd, 0.0, 1), ValidationError);
    const std::vector<double> unsorted{1.0, 0.5};
    CHECK_THROWS_AS(thermal_curve(sd, unsorted, 1), ValidationError);
    std::ostringstream os;
    write_curve_csv(os, thermal_curve(sd, g, 1));
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "T,u,s,c,logZ,F");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 5);
  }
}
