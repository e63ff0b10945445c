#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "arealaw/bounds.hpp"
#include "arealaw/heatfit.hpp"
#include "arealaw/models.hpp"
#include "arealaw/thermo.hpp"

using namespace arealaw;

namespace {

std::vector<HeatSample> sample(const std::function<double(double)>& c, double lo, double hi, int count) {
  std::vector<HeatSample> out;
  for (double T : make_grid(GridSpacing::log, lo, hi, count)) out.push_back({T, c(T)});
  return out;
}

double schottky(double gap, double T) {
  const double y = gap / T;
  return y * y * std::exp(-y) / std::pow(1.0 + std::exp(-y), 2);
}

bool dominates(const HeatCapFit& fit, const std::vector<HeatSample>& s) {
  for (const auto& x : s) {
    if (model(fit, x.T) < x.c * (1 - 1e-10)) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("heatfit") {
  TEST_CASE("noise-free exponential data is recovered") {
    const double k = 2.0, gamma = 1.5, gap = 0.8;
    const auto s = sample([&](double T) { return k * std::pow(gap / T, gamma) * std::exp(-gap / T); }, 0.05, 2.0, 30);
    const HeatCapFit fit = fit_exponential(s);
    CHECK(fit.converged);
    CHECK(fit.k == doctest::Approx(k).epsilon(1e-6));
    CHECK(fit.gamma == doctest::Approx(gamma).epsilon(1e-6));
    CHECK(fit.delta == doctest::Approx(gap).epsilon(1e-6));
    CHECK(fit.residual_rms < 1e-8);
    CHECK(fit.points == 30);
  }

  TEST_CASE("low-temperature Schottky data gives the gap") {
    const auto s = sample([](double T) { return schottky(1.0, T); }, 0.02, 0.2, 40);
    const HeatCapFit fit = fit_exponential(s);
    CHECK(std::abs(fit.delta - 1.0) < 0.05);
    CHECK(dominates(fit, s));
    CHECK(fit.min_slack >= 1.0 - 1e-10);
  }

  TEST_CASE("power laws") {
    const auto s = sample([](double T) { return 3 * T * T; }, 0.01, 0.5, 25);
    const HeatCapFit fit = fit_polynomial(s);
    CHECK(fit.regime == FitRegime::polynomial);
    CHECK(fit.k == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(fit.gamma == doctest::Approx(2.0).epsilon(1e-10));

    std::mt19937_64 rng(2024);
    std::normal_distribution<double> noise(0.0, 0.01);
    std::vector<HeatSample> debye;
    for (double T : make_grid(GridSpacing::log, 0.01, 0.2, 50)) debye.push_back({T, 234.0 * std::pow(T, 3) * (1 + noise(rng))});
    const HeatCapFit fd = fit_polynomial(debye);
    CHECK(fd.gamma >= 2.9);
    CHECK(fd.gamma <= 3.1);
    CHECK(dominates(fd, debye));
    CHECK(fd.log_inflation > 0.0);
  }

  TEST_CASE("model integrals") {
    HeatCapFit poly;
    poly.regime = FitRegime::polynomial;
    poly.k = 3.0;
    poly.gamma = 2.0;
    poly.delta = 1.0;
    CHECK(model_energy(poly, 2.0) == doctest::Approx(8.0));
    CHECK(model_entropy(poly, 2.0) == doctest::Approx(6.0));
    HeatCapFit ex;
    ex.k = 1.0;
    ex.gamma = 2.0;
    ex.delta = 1.0;
    // int_0^T (1/t)^2 e^(-1/t) dt = e^(-1/T)
    CHECK(model_energy(ex, 0.5) == doctest::Approx(std::exp(-2.0)).epsilon(1e-10));
    CHECK(model_energy_sup(ex) == doctest::Approx(1.0).epsilon(1e-10));
    const ArrheniusForm a = arrhenius_form(ex);
    CHECK(a.k == 1.0);
    CHECK(a.nu == 2.0);
    CHECK_THROWS_AS(arrhenius_form(poly), ValidationError);
  }

  TEST_CASE("bad inputs are rejected") {
    const auto zeros = sample([](double) { return 0.0; }, 0.1, 1.0, 10);
    CHECK_THROWS_AS(fit_exponential(zeros), ValidationError);
    const auto few = sample([](double T) { return T; }, 0.1, 1.0, 2);
    CHECK_THROWS_AS(fit_exponential(few), ValidationError);
    CHECK_THROWS_AS(fit_polynomial(few), ValidationError);
  }

  TEST_CASE("refitting model output is idempotent") {
    const auto s = sample([](double T) { return schottky(1.3, T); }, 0.03, 0.4, 30);
    const HeatCapFit first = fit_exponential(s);
    const auto again = sample([&](double T) { return model(first, T); }, 0.03, 0.4, 30);
    const HeatCapFit second = fit_exponential(again);
    CHECK(second.k == doctest::Approx(first.k).epsilon(1e-8));
    CHECK(second.gamma == doctest::Approx(first.gamma).epsilon(1e-8));
    CHECK(second.delta == doctest::Approx(first.delta).epsilon(1e-8));
  }

  TEST_CASE("CSV reading") {
    std::istringstream good("# comment\nT,c\n0.1,0.5\n\n0.2,0.7\n");
    const auto rows = read_heat_csv(good);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].T == 0.2);
    CHECK(rows[1].c == 0.7);
    std::istringstream swapped("c,T\n0.5,0.1\n");
    CHECK(read_heat_csv(swapped)[0].T == 0.1);

    std::istringstream empty("");
    CHECK_THROWS_WITH_AS(read_heat_csv(empty), "heat-capacity CSV is empty (no header)", ValidationError);
    std::istringstream header("T,cv\n0.1,1\n");
    CHECK_THROWS_WITH_AS(read_heat_csv(header), doctest::Contains("line 1: unexpected column 'cv'"), ValidationError);
    std::istringstream ragged("T,c\n0.1\n");
    CHECK_THROWS_AS(read_heat_csv(ragged), ValidationError);
    std::istringstream negative("T,c\n-0.1,1\n");
    CHECK_THROWS_AS(read_heat_csv(negative), ValidationError);
    CHECK_THROWS_AS(read_heat_csv_file("/nonexistent/heat.csv"), ValidationError);
  }

  TEST_CASE("data certificate agrees with the model pipeline on the constant") {
    const auto spec = build_tfim(LatticeSpec::make(1, 8), 1.0, 2.0);
    const Matrix h = assemble_full(spec);
    const SpectralData sd = diagonalize(h);
    const Matrix shifted = h - sd.ground_energy * Matrix::Identity(h.rows(), h.cols());
    const State g = ground_state(sd);
    const int l = 2;
    const BoundCertificate ref = prop1_setup(g, spec, sd, shifted, l);

    const auto samples = sample([&](double T) { return specific_heat_spectral(sd, T, 8); }, 0.2, 10.0, 60);
    DataCertInputs in;
    in.l = l;
    in.n = 8;
    in.C = ref.C;
    in.h = ref.h.value;
    in.s0 = ref.s0;
    in.t_max = ref.T_c;
    const BoundCertificate data = certify_from_data(samples, in);
    CHECK(data.data_driven);
    CHECK_FALSE(data.measured_S.has_value());
    CHECK(data.u_at_Tc == doctest::Approx(data.target).epsilon(1e-8));
    CHECK(data.target == doctest::Approx(ref.target).epsilon(1e-14));

    std::vector<HeatSample> window;
    for (const auto& s : samples) {
      if (s.T <= ref.T_c) window.push_back(s);
    }
    const HeatCapFit fit = fit_exponential(window);
    Prop1Options opts;
    opts.C = ref.C;
    const BoundCertificate model_cert = prop1_certify(g, spec, sd, shifted, l, fit, opts);
    CHECK(data.constant.F == doctest::Approx(model_cert.constant.F).epsilon(1e-12));
    CHECK(data.prop1_rhs == doctest::Approx(model_cert.prop1_rhs).epsilon(1e-12));
    CHECK(data.lemma2_rhs <= data.prop1_rhs + 1e-8);
  }

  TEST_CASE("data certificate hypothesis") {
    auto s = sample([](double T) { return schottky(1.0, T); }, 0.05, 5.0, 60);
    DataCertInputs in;
    in.l = 2;
    in.n = 8;
    in.C = 1.0;
    in.h = 0.1;
    in.t_max = 0.3;
    const BoundCertificate ok = certify_from_data(s, in);
    CHECK(ok.fit_hypothesis.holds == (ok.fit_hypothesis.worst_log_margin >= -1e-10));

    // a spike below the fit window breaks domination
    auto spiky = s;
    spiky[1].c = 1.0;
    in.t_min = 0.08;
    const BoundCertificate bad = certify_from_data(spiky, in);
    CHECK_FALSE(bad.fit_hypothesis.holds);
    CHECK(bad.checks[0].verdict == Verdict::hypothesis_not_met);
    CHECK(bad.overall() == Verdict::hypothesis_not_met);

    in.t_min = 0.0;
    in.t_max = 0.0;
    const auto rising = sample([](double T) { return 3 * T * T; }, 0.01, 5.0, 40);
    in.regime = FitRegime::polynomial;
    in.monotone_shortcut = true;
    const BoundCertificate mono = certify_from_data(rising, in);
    CHECK(mono.fit_hypothesis.monotone_shortcut);
    CHECK(mono.fit_hypothesis.holds);
    for (double T : mono.fit_hypothesis.grid) CHECK(T >= mono.T_c / 2);

    in.C = 1e9;
    CHECK_THROWS_AS(certify_from_data(s, DataCertInputs{1, 1, 2, 8, 1e9, 0.1, 0.0}), UnsatisfiableError);
    in.n = 7;
    CHECK_THROWS_AS(certify_from_data(s, in), ValidationError);
  }
}
