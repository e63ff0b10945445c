#include "arealaw/heatfit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "arealaw/bounds.hpp"
#include "arealaw/common.hpp"
#include "arealaw/entangle.hpp"
#include "arealaw/lattice.hpp"

namespace arealaw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Gamma(a, x) for any real a and x > 0, written as x^a e^-x int_0^inf (1 + y/x)^a e^-y dy.
double upper_gamma(double a, double x) {
  if (a > 0.0) return boost::math::tgamma(a, x);
  boost::math::quadrature::exp_sinh<double> integrator;
  const double tail = integrator.integrate([&](double y) { return std::pow(1.0 + y / x, a) * std::exp(-y); });
  return std::exp(a * std::log(x) - x) * tail;
}

void check_series(std::span<const double> T, std::span<const double> log_c, std::size_t min_points) {
  if (T.size() != log_c.size()) throw ValidationError("T and c columns differ in length");
  if (T.size() < min_points) {
    throw ValidationError("fit needs at least " + std::to_string(min_points) + " samples, got " +
                          std::to_string(T.size()));
  }
  for (std::size_t i = 0; i < T.size(); ++i) {
    if (!(T[i] > 0.0) || !std::isfinite(T[i])) throw ValidationError("fit temperatures must be positive");
    if (!std::isfinite(log_c[i])) throw ValidationError("fit needs positive specific-heat values");
  }
}

std::vector<double> weights_or_uniform(const FitOptions& o, std::size_t n) {
  if (o.weights.empty()) return std::vector<double>(n, 1.0);
  if (o.weights.size() != n) throw ValidationError("fit weights do not match the sample count");
  for (double w : o.weights) {
    if (!(w >= 0.0)) throw ValidationError("fit weights must be nonnegative");
  }
  return o.weights;
}

// Shifts log k until the model is at or above every sample.
void inflate(HeatCapFit& fit, std::span<const double> T, std::span<const double> log_c) {
  double shift = -kInf;
  for (std::size_t i = 0; i < T.size(); ++i) shift = std::max(shift, log_c[i] - log_model(fit, T[i]));
  fit.k *= std::exp(shift);
  fit.log_inflation = shift;
  for (int pass = 0; pass < 8; ++pass) {
    double worst = kInf;
    for (std::size_t i = 0; i < T.size(); ++i) worst = std::min(worst, log_model(fit, T[i]) - log_c[i]);
    fit.min_slack = std::exp(worst);
    if (worst >= 0.0) return;
    const double bump = -worst + 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(std::log(fit.k)));
    fit.k *= std::exp(bump);
    fit.log_inflation += bump;
  }
}

void finish_window(HeatCapFit& fit, std::span<const double> T) {
  const auto [lo, hi] = std::minmax_element(T.begin(), T.end());
  fit.t_min = *lo;
  fit.t_max = *hi;
  fit.points = T.size();
}

std::vector<double> logs_of(std::span<const HeatSample> s, std::vector<double>& T) {
  std::vector<double> lc;
  for (const auto& x : s) {
    if (!(x.c > 0.0)) throw ValidationError("fit needs positive specific-heat values");
    T.push_back(x.T);
    lc.push_back(std::log(x.c));
  }
  return lc;
}

}  // namespace

double log_model(const HeatCapFit& fit, double T) {
  if (fit.regime == FitRegime::exponential) {
    return std::log(fit.k) + fit.gamma * std::log(fit.delta / T) - fit.delta / T;
  }
  return std::log(fit.k) + fit.gamma * std::log(T / fit.delta);
}

double model(const HeatCapFit& fit, double T) { return std::exp(log_model(fit, T)); }

double model_energy(const HeatCapFit& fit, double T) {
  if (!(T > 0.0)) throw ValidationError("temperature must be positive");
  if (fit.regime == FitRegime::polynomial) {
    return fit.k * fit.delta / (fit.gamma + 1.0) * std::pow(T / fit.delta, fit.gamma + 1.0);
  }
  // x = Delta/t turns the integral into k Delta Gamma(gamma - 1, Delta/T).
  return fit.k * fit.delta * upper_gamma(fit.gamma - 1.0, fit.delta / T);
}

double model_entropy(const HeatCapFit& fit, double T) {
  if (!(T > 0.0)) throw ValidationError("temperature must be positive");
  if (fit.regime == FitRegime::polynomial) return fit.k / fit.gamma * std::pow(T / fit.delta, fit.gamma);
  return fit.k * upper_gamma(fit.gamma, fit.delta / T);
}

double model_energy_sup(const HeatCapFit& fit) {
  if (fit.regime == FitRegime::polynomial || fit.gamma <= 1.0) return kInf;
  return fit.k * fit.delta * std::tgamma(fit.gamma - 1.0);
}

ArrheniusForm arrhenius_form(const HeatCapFit& fit) {
  if (fit.regime != FitRegime::exponential) throw ValidationError("Arrhenius form needs an exponential fit");
  return {fit.k * std::pow(fit.delta, fit.gamma), fit.gamma, fit.delta};
}

HeatCapFit fit_exponential_log(std::span<const double> T, std::span<const double> log_c, const FitOptions& options) {
  check_series(T, log_c, 4);
  const std::size_t m = T.size();
  const std::vector<double> w = weights_or_uniform(options, m);
  const std::vector<double> sw = [&] {
    std::vector<double> v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = std::sqrt(w[i]);
    return v;
  }();

  // Arrhenius start from the two coldest points.
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return T[a] < T[b]; });
  const std::size_t i1 = order[0], i2 = order[1];
  double delta = -(log_c[i2] - log_c[i1]) / (1.0 / T[i2] - 1.0 / T[i1]);
  if (!(delta > 0.0) || !std::isfinite(delta)) delta = T[i1];
  double gamma = 0.0;
  double logk = 0.0, wsum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    logk += w[i] * (log_c[i] + delta / T[i]);
    wsum += w[i];
  }
  if (!(wsum > 0.0)) throw ValidationError("fit weights sum to zero");
  logk /= wsum;

  auto residuals = [&](const Eigen::Vector3d& p, Vector& r) {
    r.resize(static_cast<Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
      r(i) = sw[i] * (p(0) + p(1) * std::log(p(2) / T[i]) - p(2) / T[i] - log_c[i]);
    }
  };
  auto jacobian = [&](const Eigen::Vector3d& p, Eigen::Matrix<double, Eigen::Dynamic, 3>& J) {
    J.resize(static_cast<Index>(m), 3);
    for (std::size_t i = 0; i < m; ++i) {
      J(i, 0) = sw[i];
      J(i, 1) = sw[i] * std::log(p(2) / T[i]);
      J(i, 2) = sw[i] * (p(1) / p(2) - 1.0 / T[i]);
    }
  };

  Eigen::Vector3d p(logk, gamma, delta);
  Vector r;
  residuals(p, r);
  double cost = r.squaredNorm();
  Eigen::Matrix<double, Eigen::Dynamic, 3> J;
  jacobian(p, J);
  Eigen::Matrix3d A = J.transpose() * J;
  double lambda = 1e-3 * A.diagonal().maxCoeff();

  HeatCapFit fit;
  fit.regime = FitRegime::exponential;
  fit.converged = false;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    const Eigen::Vector3d g = J.transpose() * r;
    if (cost == 0.0) {
      fit.converged = true;
      break;
    }
    bool accepted = false;
    while (lambda < 1e300) {
      Eigen::Matrix3d M = A;
      for (int k = 0; k < 3; ++k) M(k, k) += lambda * std::max(A(k, k), 1e-300);
      const Eigen::Vector3d step = M.ldlt().solve(-g);
      const Eigen::Vector3d trial = p + step;
      if (trial(2) > 0.0 && step.allFinite()) {
        Vector rt;
        residuals(trial, rt);
        const double ct = rt.squaredNorm();
        if (std::isfinite(ct) && ct <= cost) {
          const bool small = step.norm() <= options.step_tol * (p.norm() + options.step_tol);
          p = trial;
          r = std::move(rt);
          cost = ct;
          lambda = std::max(lambda / 3.0, 1e-300);
          accepted = true;
          if (small) fit.converged = true;
          break;
        }
      }
      lambda *= 4.0;
    }
    if (!accepted) {
      // No descent direction left at machine precision: a stationary point.
      fit.converged = true;
      break;
    }
    if (fit.converged) break;
    jacobian(p, J);
    A = J.transpose() * J;
  }
  fit.iterations = it + 1;
  fit.k = std::exp(p(0));
  fit.gamma = p(1);
  fit.delta = p(2);
  fit.residual_rms = std::sqrt(cost / wsum);
  if (!fit.converged) {
    fit.message = "iteration limit reached; best parameters so far reported";
  }
  finish_window(fit, T);
  inflate(fit, T, log_c);
  return fit;
}

HeatCapFit fit_exponential(std::span<const HeatSample> samples, const FitOptions& options) {
  std::vector<double> T;
  if (samples.size() < 4) {
    throw ValidationError("fit needs at least 4 samples, got " + std::to_string(samples.size()));
  }
  const std::vector<double> lc = logs_of(samples, T);
  return fit_exponential_log(T, lc, options);
}

HeatCapFit fit_polynomial_log(std::span<const double> T, std::span<const double> log_c, const FitOptions& options) {
  check_series(T, log_c, 3);
  if (!(options.delta > 0.0)) throw ValidationError("polynomial energy scale must be positive");
  const std::size_t m = T.size();
  const std::vector<double> w = weights_or_uniform(options, m);
  Eigen::Matrix<double, Eigen::Dynamic, 2> X(static_cast<Index>(m), 2);
  Vector y(static_cast<Index>(m));
  double wsum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double s = std::sqrt(w[i]);
    X(i, 0) = s;
    X(i, 1) = s * std::log(T[i] / options.delta);
    y(i) = s * log_c[i];
    wsum += w[i];
  }
  const Eigen::Vector2d beta = X.colPivHouseholderQr().solve(y);
  HeatCapFit fit;
  fit.regime = FitRegime::polynomial;
  fit.k = std::exp(beta(0));
  fit.gamma = beta(1);
  fit.delta = options.delta;
  fit.iterations = 1;
  fit.residual_rms = std::sqrt((X * beta - y).squaredNorm() / wsum);
  finish_window(fit, T);
  inflate(fit, T, log_c);
  return fit;
}

HeatCapFit fit_polynomial(std::span<const HeatSample> samples, const FitOptions& options) {
  std::vector<double> T;
  if (samples.size() < 3) {
    throw ValidationError("fit needs at least 3 samples, got " + std::to_string(samples.size()));
  }
  const std::vector<double> lc = logs_of(samples, T);
  return fit_polynomial_log(T, lc, options);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_number(const std::string& s, int line_no, const std::string& column) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ValidationError("line " + std::to_string(line_no) + ": column '" + column + "' value '" + s +
                          "' is not a number");
  }
  return v;
}

}  // namespace

std::vector<HeatSample> read_heat_csv(std::istream& is) {
  std::string line;
  int line_no = 0;
  int t_col = -1, c_col = -1;
  std::size_t width = 0;
  std::vector<HeatSample> out;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto cells = split_csv(t);
    if (t_col < 0) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == "T") {
          t_col = static_cast<int>(i);
        } else if (cells[i] == "c") {
          c_col = static_cast<int>(i);
        } else {
          throw ValidationError("line " + std::to_string(line_no) + ": unexpected column '" + cells[i] +
                                "' (expected header T,c)");
        }
      }
      if (t_col < 0) throw ValidationError("line " + std::to_string(line_no) + ": header lacks column 'T'");
      if (c_col < 0) throw ValidationError("line " + std::to_string(line_no) + ": header lacks column 'c'");
      width = cells.size();
      continue;
    }
    if (cells.size() != width) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                            " columns, got " + std::to_string(cells.size()));
    }
    HeatSample s{parse_number(cells[t_col], line_no, "T"), parse_number(cells[c_col], line_no, "c")};
    if (!(s.T > 0.0)) throw ValidationError("line " + std::to_string(line_no) + ": column 'T' must be positive");
    if (!(s.c >= 0.0)) throw ValidationError("line " + std::to_string(line_no) + ": column 'c' must be nonnegative");
    out.push_back(s);
  }
  if (t_col < 0) throw ValidationError("heat-capacity CSV is empty (no header)");
  if (out.empty()) throw ValidationError("heat-capacity CSV has no data rows");
  return out;
}

std::vector<HeatSample> read_heat_csv_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open heat-capacity CSV '" + path + "'");
  return read_heat_csv(f);
}

BoundCertificate certify_from_data(std::span<const HeatSample> samples, const DataCertInputs& in) {
  if (in.d < 1 || in.r < 1 || in.l < 1 || in.n < 1) throw ValidationError("d, r, l, n must be positive");
  if (in.n % in.l != 0) throw ValidationError("l must divide n");
  if (in.C < 1.0) throw ValidationError("C must be at least 1");
  if (in.h < 0.0) throw ValidationError("h must be nonnegative");
  if (in.s0 < 0.0) throw ValidationError("s0 must be nonnegative");

  std::vector<HeatSample> window;
  for (const auto& s : samples) {
    if (s.T >= in.t_min && (in.t_max <= 0.0 || s.T <= in.t_max)) window.push_back(s);
  }
  FitOptions fo;
  fo.delta = in.delta;
  const HeatCapFit fit =
      in.regime == FitRegime::exponential ? fit_exponential(window, fo) : fit_polynomial(window, fo);

  BoundCertificate cert;
  cert.model = "data";
  cert.state = "unmeasured";
  cert.data_driven = true;
  cert.note = "data-driven: entanglement side not measured";
  cert.d = in.d;
  cert.r = in.r;
  cert.l = in.l;
  cert.n = in.n;
  cert.C = in.C;
  cert.energy_density = in.C / in.l;
  cert.h.value = in.h;
  cert.h.operator_norm = in.h;
  cert.budget = energy_budget(in.d, in.r, in.l, in.h);
  cert.target = (in.C + cert.budget.exact) / in.l;
  cert.target_nominal = (in.C + cert.budget.nominal) / in.l;
  cert.fit = fit;

  cert.T_c = solve_Tc([&](double T) { return model_energy(fit, T); }, cert.target, model_energy_sup(fit));
  cert.u_at_Tc = model_energy(fit, cert.T_c);
  cert.s0 = in.s0;
  cert.s_at_Tc = in.s0 + model_entropy(fit, cert.T_c);
  const double volume = static_cast<double>(ipow(in.l, in.d));
  const double face = static_cast<double>(ipow(in.l, in.d - 1));
  cert.lemma2_rhs = volume * cert.s_at_Tc;
  cert.constant = prop1_constant(fit.regime, fit.k, fit.gamma, fit.delta, in.C + cert.budget.exact, in.l);
  cert.F_nominal = prop1_constant(fit.regime, fit.k, fit.gamma, fit.delta, in.C + cert.budget.nominal, in.l).F;
  if (fit.regime == FitRegime::exponential) {
    cert.constant.branch = cert.T_c <= fit.delta / fit.gamma ? "T_c <= Delta/gamma" : "T_c > Delta/gamma";
  }
  cert.prop1_rhs = in.s0 * volume + cert.constant.F * face;

  // Hypothesis: every sample at or below T_c lies under the model.
  std::vector<HeatSample> below;
  for (const auto& s : samples) {
    if (s.T <= cert.T_c) below.push_back(s);
  }
  std::sort(below.begin(), below.end(), [](const HeatSample& a, const HeatSample& b) { return a.T < b.T; });
  HypothesisCheck& hc = cert.fit_hypothesis;
  if (in.monotone_shortcut) {
    bool nondecreasing = true;
    for (std::size_t i = 1; i < below.size(); ++i) nondecreasing = nondecreasing && below[i].c >= below[i - 1].c;
    if (nondecreasing) {
      std::erase_if(below, [&](const HeatSample& s) { return s.T < cert.T_c / 2; });
      hc.monotone_shortcut = true;
    }
  }
  hc.worst_log_margin = kInf;
  for (const auto& s : below) {
    hc.grid.push_back(s.T);
    const double margin = s.c > 0.0 ? log_model(fit, s.T) - std::log(s.c) : kInf;
    if (margin < hc.worst_log_margin) {
      hc.worst_log_margin = margin;
      hc.worst_T = s.T;
    }
  }
  hc.holds = hc.worst_log_margin >= -1e-10;
  double t_top = 0.0;
  for (const auto& s : samples) t_top = std::max(t_top, s.T);
  if (t_top < cert.T_c) {
    hc.holds = false;
    cert.warnings.push_back("data ends at T = " + format_double(t_top) + ", below T_c");
  }
  if (!fit.converged) cert.warnings.push_back(fit.message);

  cert.checks.push_back(make_check("lemma2_vs_prop1", cert.lemma2_rhs, cert.prop1_rhs, 1e-8, !hc.holds));
  return cert;
}

}  // namespace arealaw
