#include "arealaw/thermo.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "arealaw/entangle.hpp"

namespace arealaw {

namespace {

void check_temperature(double T) {
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("temperature must be positive and finite");
}

// Unnormalized weights exp(-E_k/T); the ground term is exactly 1. std::exp rather than the
// vectorized Array::exp, which clamps arguments below about -709 instead of underflowing to 0.
Vector boltzmann_factors(const SpectralData& sd, double T) {
  check_temperature(T);
  return sd.eigenvalues.unaryExpr([T](double e) { return std::exp(-e / T); });
}

struct Moments {
  double log_z;
  double mean;
  double variance;
};

Moments moments(const SpectralData& sd, double T) {
  const Vector x = boltzmann_factors(sd, T);
  const double z = x.sum();
  const Vector w = x / z;
  const double mean = w.dot(sd.eigenvalues);
  const double var = (w.array() * (sd.eigenvalues.array() - mean).square()).sum();
  return {std::log(z), mean, var};
}

}  // namespace

Vector gibbs_weights(const SpectralData& sd, double T) {
  const Vector x = boltzmann_factors(sd, T);
  return x / x.sum();
}

double log_partition(const SpectralData& sd, double T) { return std::log(boltzmann_factors(sd, T).sum()); }

Matrix gibbs_state(const SpectralData& sd, double T) {
  const Vector w = gibbs_weights(sd, T);
  return sd.eigenvectors * w.asDiagonal() * sd.eigenvectors.transpose();
}

ThermalSample thermal_point(const SpectralData& sd, double T, int n_sites) {
  const Moments m = moments(sd, T);
  ThermalSample p;
  p.T = T;
  p.u = m.mean / n_sites;
  p.s = (m.log_z + m.mean / T) / n_sites;
  p.c = m.variance / (n_sites * T * T);
  p.log_z = m.log_z;
  p.F = -T * m.log_z;
  return p;
}

ThermalCurve thermal_curve(const SpectralData& sd, std::span<const double> T_grid, int n_sites) {
  for (std::size_t i = 0; i < T_grid.size(); ++i) {
    check_temperature(T_grid[i]);
    if (i > 0 && !(T_grid[i] > T_grid[i - 1])) throw ValidationError("temperature grid must be strictly ascending");
  }
  ThermalCurve curve;
  curve.n_sites = n_sites;
  curve.samples.resize(T_grid.size());
  const auto count = static_cast<long>(T_grid.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) curve.samples[i] = thermal_point(sd, T_grid[i], n_sites);
  return curve;
}

double energy_density(const SpectralData& sd, double T, int n_sites) { return moments(sd, T).mean / n_sites; }

double entropy_density(const SpectralData& sd, double T, int n_sites) {
  const Moments m = moments(sd, T);
  return (m.log_z + m.mean / T) / n_sites;
}

double ground_entropy_density(const SpectralData& sd, int n_sites) {
  return std::log(static_cast<double>(sd.degeneracy)) / n_sites;
}

double specific_heat_spectral(const SpectralData& sd, double T, int n_sites) {
  return moments(sd, T).variance / (n_sites * T * T);
}

double log_specific_heat(const SpectralData& sd, double T, int n_sites) {
  check_temperature(T);
  const Vector& e = sd.eigenvalues;
  const double log_z = log_partition(sd, T);
  const Vector w = gibbs_weights(sd, T);
  const double mean = w.dot(e);
  double peak = -std::numeric_limits<double>::infinity();
  Vector terms(e.size());
  for (Index k = 0; k < e.size(); ++k) {
    const double dev = std::abs(e(k) - mean);
    terms(k) = dev > 0.0 ? -e(k) / T - log_z + 2.0 * std::log(dev) : -std::numeric_limits<double>::infinity();
    peak = std::max(peak, terms(k));
  }
  if (!std::isfinite(peak)) return peak;
  const double acc = (terms.array() - peak).unaryExpr([](double x) { return std::exp(x); }).sum();
  return peak + std::log(acc) - std::log(static_cast<double>(n_sites)) - 2.0 * std::log(T);
}

double specific_heat_cov(const Matrix& rho, const Matrix& h, double T, int n_sites) {
  check_temperature(T);
  const Matrix rh = rho * h;
  const double mean = rh.trace();
  const double second = (rh.transpose().cwiseProduct(h)).sum();  // tr(rho H H)
  return (second - mean * mean) / (n_sites * T * T);
}

CovarianceRoute::CovarianceRoute(const SpectralData& sd, const Matrix& shifted_h)
    : sd_(&sd), hv_(shifted_h * sd.eigenvectors) {
  diag_ = (sd.eigenvectors.transpose().cwiseProduct(hv_.transpose())).rowwise().sum();
}

double CovarianceRoute::specific_heat(double T, int n_sites) const {
  const Vector w = gibbs_weights(*sd_, T);
  const double mean = w.dot(diag_);
  double cov = 0.0;
  for (Index k = 0; k < w.size(); ++k) {
    if (w(k) == 0.0) continue;
    cov += w(k) * (hv_.col(k) - mean * sd_->eigenvectors.col(k)).squaredNorm();
  }
  return cov / (n_sites * T * T);
}

double free_energy(const State& rho, const Matrix& h, double T) {
  check_temperature(T);
  const double energy = rho.expectation(h);
  const double entropy = rho.is_pure() ? 0.0 : von_neumann_entropy(rho.matrix());
  return energy - T * entropy;
}

double relative_entropy(const Matrix& rho, const Matrix& sigma) {
  Eigen::SelfAdjointEigenSolver<Matrix> er(rho, Eigen::EigenvaluesOnly);
  double rho_log_rho = 0.0;
  for (Index k = 0; k < er.eigenvalues().size(); ++k) {
    const double l = er.eigenvalues()(k);
    if (l > 0.0) rho_log_rho += l * std::log(l);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
  const Matrix& u = es.eigenvectors();
  const Vector pop = (u.transpose() * rho * u).diagonal();
  double rho_log_sigma = 0.0;
  for (Index j = 0; j < pop.size(); ++j) {
    const double mu = es.eigenvalues()(j);
    if (mu <= 1e-14) {
      if (pop(j) > 1e-12) return std::numeric_limits<double>::infinity();
      continue;
    }
    rho_log_sigma += pop(j) * std::log(mu);
  }
  return rho_log_rho - rho_log_sigma;
}

double relative_entropy_to_gibbs(const State& rho, const SpectralData& sd, double T) {
  check_temperature(T);
  const double log_z = log_partition(sd, T);
  Vector pop;
  if (rho.is_pure()) {
    pop = (sd.eigenvectors.transpose() * rho.vector()).array().square().matrix();
  } else {
    pop = (sd.eigenvectors.transpose() * rho.matrix() * sd.eigenvectors).diagonal();
  }
  const double rho_log_gibbs = -pop.dot(sd.eigenvalues) / T - log_z * pop.sum();
  const double entropy = rho.is_pure() ? 0.0 : von_neumann_entropy(rho.matrix());
  return -entropy - rho_log_gibbs;
}

GridSpacing grid_spacing_from_string(const std::string& s) {
  if (s == "linear") return GridSpacing::linear;
  if (s == "log") return GridSpacing::log;
  throw ValidationError("unknown grid spacing '" + s + "' (expected linear | log)");
}

std::vector<double> make_grid(GridSpacing spacing, double t_min, double t_max, int points) {
  if (!(t_min > 0.0) || !(t_max >= t_min)) throw ValidationError("temperature grid needs 0 < min <= max");
  if (points < 1) throw ValidationError("temperature grid needs at least one point");
  if (points == 1) return {t_min};
  if (t_max == t_min) throw ValidationError("temperature grid with several points needs min < max");
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / (points - 1);
    grid[i] = spacing == GridSpacing::linear ? t_min + f * (t_max - t_min)
                                             : std::exp(std::log(t_min) + f * (std::log(t_max) - std::log(t_min)));
  }
  grid.front() = t_min;
  grid.back() = t_max;
  return grid;
}

void write_curve_csv(std::ostream& os, const ThermalCurve& curve) {
  os << "T,u,s,c,logZ,F\n";
  for (const auto& p : curve.samples) {
    os << format_double(p.T) << ',' << format_double(p.u) << ',' << format_double(p.s) << ',' << format_double(p.c)
       << ',' << format_double(p.log_z) << ',' << format_double(p.F) << '\n';
  }
}

}  // namespace arealaw
