#include "arealaw/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "arealaw/entangle.hpp"
#include "arealaw/heatfit.hpp"
#include "arealaw/operators.hpp"
#include "arealaw/thermo.hpp"

namespace arealaw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Reduced states of one global state, cached by support.
class ReducedCache {
 public:
  ReducedCache(const State& rho, const LatticeSpec& lat, int q) : rho_(rho), lat_(lat), q_(q) {}

  const Matrix& get(const std::vector<int>& sites) {
    auto it = cache_.find(sites);
    if (it == cache_.end()) it = cache_.emplace(sites, partial_trace(rho_, sites, lat_, q_).rho).first;
    return it->second;
  }

 private:
  const State& rho_;
  const LatticeSpec& lat_;
  int q_;
  std::map<std::vector<int>, Matrix> cache_;
};

double trace_product(const Matrix& rho, const Matrix& op) { return rho.cwiseProduct(op.transpose()).sum(); }

FactorCovariance evaluate_pair(const FactorPair& p, ReducedCache& cache, int q) {
  FactorCovariance fc;
  std::vector<int> ab = p.a.sites;
  ab.insert(ab.end(), p.b.sites.begin(), p.b.sites.end());
  std::sort(ab.begin(), ab.end());
  const Matrix& rho = cache.get(ab);
  const Matrix a = embed(p.a, ab, q);
  const Matrix b = embed(p.b, ab, q);
  const double ea = trace_product(rho, a);
  const double eb = trace_product(rho, b);
  fc.cov = trace_product(rho, a * b) - ea * eb;
  fc.var_a = trace_product(rho, a * a.transpose()) - ea * ea;
  fc.var_b = trace_product(rho, b.transpose() * b) - eb * eb;
  return fc;
}

struct PairScan {
  std::vector<FactorCovariance> pairs;
  std::map<int, double> per_site;  // sum_k Cov for each boundary site
  bool valid = true;
};

// cube_of maps a site to its cube index; -1 marks the complement of a single region.
PairScan scan_pairs(const State& rho, const HamiltonianSpec& spec, std::span<const Region> regions,
                    const std::vector<int>& cube_of) {
  const LatticeSpec& lat = spec.lattice;
  const int q = spec.local_dim();
  ReducedCache cache(rho, lat, q);
  PairScan out;
  for (const auto& region : regions) {
    for (int i : split_region(lat, region).boundary) {
      const BoundaryFactorization f = factorize_boundary_term(spec, i, region);
      double total = 0.0;
      for (std::size_t k = 0; k < f.factors.size(); ++k) {
        const FactorPair& p = f.factors[k];
        if (p.b.sites.empty()) continue;  // (A-terms, 1_B) has zero covariance
        FactorCovariance fc = evaluate_pair(p, cache, q);
        fc.site = i;
        fc.pair = static_cast<int>(k);
        const int first = cube_of[p.b.sites.front()];
        fc.single_cube = std::all_of(p.b.sites.begin(), p.b.sites.end(), [&](int s) { return cube_of[s] == first; });
        out.valid = out.valid && fc.single_cube;
        total += fc.cov;
        out.pairs.push_back(fc);
      }
      out.per_site[i] = total;
    }
  }
  return out;
}

CouplingStrength finish_strength(const HamiltonianSpec& spec, PairScan scan, HMode mode) {
  CouplingStrength cs;
  cs.operator_norm = operator_norm_coupling(spec);
  cs.covariance_valid = scan.valid;
  double cov = 0.0;
  for (const auto& [site, v] : scan.per_site) cov = std::max(cov, std::abs(v));
  cs.covariance = cov;
  cs.per_site = std::move(scan.per_site);
  cs.pairs = std::move(scan.pairs);
  switch (mode) {
    case HMode::operator_norm:
      cs.value = cs.operator_norm;
      cs.mode = CouplingMode::operator_norm;
      break;
    case HMode::covariance:
      if (!cs.covariance_valid) {
        throw ValidationError("covariance mode needs every h_B factor inside a single partition cube");
      }
      cs.value = cov;
      cs.mode = CouplingMode::covariance;
      break;
    case HMode::min:
      if (cs.covariance_valid && cov <= cs.operator_norm) {
        cs.value = cov;
        cs.mode = CouplingMode::covariance;
      } else {
        cs.value = cs.operator_norm;
        cs.mode = CouplingMode::operator_norm;
      }
      break;
  }
  return cs;
}

InequalityCheck hypothesis_check(std::string name, double lhs, double rhs) {
  InequalityCheck c = make_check(std::move(name), lhs, rhs, 1e-12 * std::max(1.0, std::abs(rhs)));
  if (c.verdict == Verdict::fails) c.verdict = Verdict::hypothesis_not_met;
  return c;
}

}  // namespace

double operator_norm_coupling(const HamiltonianSpec& spec) {
  double best = 0.0;
  for (int i = 0; i < spec.lattice.site_count(); ++i) {
    const SiteOperator t = spec.coupling_term(i);
    if (t.matrix.size() == 0) continue;
    Eigen::JacobiSVD<Matrix> svd(t.matrix);
    best = std::max(best, svd.singularValues()(0));
  }
  return best;
}

CouplingStrength coupling_strength(const State& rho, const HamiltonianSpec& spec, const RegionPartition& partition,
                                   HMode mode) {
  std::vector<int> cube_of(spec.lattice.site_count(), -1);
  for (std::size_t m = 0; m < partition.cubes.size(); ++m) {
    for (int s : partition.cubes[m].sites(spec.lattice)) cube_of[s] = static_cast<int>(m);
  }
  return finish_strength(spec, scan_pairs(rho, spec, partition.cubes, cube_of), mode);
}

CouplingStrength coupling_strength(const State& rho, const HamiltonianSpec& spec, const Region& region, HMode mode) {
  std::vector<int> cube_of(spec.lattice.site_count(), -1);
  for (int s : region.sites(spec.lattice)) cube_of[s] = 0;
  return finish_strength(spec, scan_pairs(rho, spec, std::span<const Region>(&region, 1), cube_of), mode);
}

Matrix product_over_partition(const State& rho, const LatticeSpec& lat, int local_dim,
                              const RegionPartition& partition, std::size_t dimension_cap) {
  const std::size_t dim = hilbert_dimension(lat.site_count(), local_dim);
  if (dim > dimension_cap) throw DimensionCapError(dim, dimension_cap);
  Matrix k = Matrix::Identity(1, 1);
  std::vector<int> order;
  for (const auto& cube : partition.cubes) {
    const auto sites = cube.sites(lat);
    k = kron(k, partial_trace(rho, sites, lat, local_dim).rho);
    order.insert(order.end(), sites.begin(), sites.end());
  }
  const auto perm = basis_permutation(order, local_dim);
  const auto n = static_cast<Index>(dim);
  Matrix sigma(n, n);
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y) sigma(perm[x], perm[y]) = k(x, y);
  }
  return sigma;
}

EnergyGap boundary_energy_gap(const State& rho, const HamiltonianSpec& spec, const Matrix& h,
                              const RegionPartition& partition) {
  const Matrix sigma = product_over_partition(rho, spec.lattice, spec.local_dim(), partition, h.rows());
  EnergyGap g;
  g.direct = rho.expectation(h) - trace_product(sigma, h);
  std::vector<int> cube_of(spec.lattice.site_count(), -1);
  for (std::size_t m = 0; m < partition.cubes.size(); ++m) {
    for (int s : partition.cubes[m].sites(spec.lattice)) cube_of[s] = static_cast<int>(m);
  }
  const PairScan scan = scan_pairs(rho, spec, partition.cubes, cube_of);
  for (const auto& [site, v] : scan.per_site) g.covariance_sum += v;
  g.covariance_route_valid = scan.valid;
  g.discrepancy = std::abs(g.direct - g.covariance_sum);
  return g;
}

EnergyBudget energy_budget(int d, int r, int l, double h) {
  EnergyBudget b;
  b.d = d;
  b.r = r;
  b.l = l;
  b.h = h;
  b.boundary_sites = boundary_count(d, l, r);
  b.exact = 2.0 * static_cast<double>(b.boundary_sites) * h / static_cast<double>(ipow(l, d - 1));
  b.nominal = 4.0 * d * r * h;
  return b;
}

double energy_constant(double energy_density, int l) { return std::max(1.0, l * energy_density); }

bool is_translation_invariant(const State& rho, const LatticeSpec& lat, int local_dim, double tol) {
  if (lat.boundary != Boundary::periodic) return false;
  for (int axis = 0; axis < lat.d; ++axis) {
    const auto perm = basis_permutation(lat.translation(axis, 1), local_dim);
    if (rho.is_pure()) {
      const Vector& psi = rho.vector();
      double overlap = 0.0;
      for (Index x = 0; x < psi.size(); ++x) overlap += psi(perm[x]) * psi(x);
      if (std::abs(std::abs(overlap) - 1.0) > tol) return false;
    } else {
      const Matrix& m = rho.matrix();
      for (Index x = 0; x < m.rows(); ++x) {
        for (Index y = 0; y < m.cols(); ++y) {
          if (std::abs(m(perm[x], perm[y]) - m(x, y)) > tol) return false;
        }
      }
    }
  }
  return true;
}

double average_cube_entropy(const State& rho, const LatticeSpec& lat, int local_dim, const RegionPartition& partition,
                            std::vector<double>* per_cube) {
  std::vector<double> values;
  for (const auto& cube : partition.cubes) {
    const auto sites = cube.sites(lat);
    if (rho.is_pure() && static_cast<int>(sites.size()) == lat.site_count()) {
      values.push_back(0.0);
    } else {
      values.push_back(von_neumann_entropy(partial_trace(rho, sites, lat, local_dim).rho));
    }
  }
  const double avg = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  if (per_cube) *per_cube = std::move(values);
  return avg;
}

Lemma2Result lemma2_certify(const State& rho, const HamiltonianSpec& spec, const SpectralData& sd,
                            const Matrix& h_shifted, int l, double T, const Lemma2Options& options) {
  const LatticeSpec& lat = spec.lattice;
  const int n_sites = lat.site_count();
  const RegionPartition part = partition_lattice(lat, l, spec.r);
  Lemma2Result res;
  res.T = T;
  res.translation_invariant = is_translation_invariant(rho, lat, spec.local_dim());
  if (!res.translation_invariant && options.waive_translation_invariance) {
    res.warnings.push_back("state is not translation invariant; requirement waived");
  }
  const bool gated = !res.translation_invariant && !options.waive_translation_invariance;

  const CouplingStrength h = coupling_strength(rho, spec, part, options.h_mode);
  res.budget = energy_budget(lat.d, spec.r, l, h.value);
  res.energy_density = rho.expectation(h_shifted) / n_sites;
  res.u = energy_density(sd, T, n_sites);
  res.s = entropy_density(sd, T, n_sites);
  res.hypothesis = hypothesis_check("lemma2_hypothesis", res.energy_density + res.budget.exact / l, res.u);
  if (gated) res.hypothesis.verdict = Verdict::hypothesis_not_met;

  const double avg = average_cube_entropy(rho, lat, spec.local_dim(), part, &res.per_cube);
  res.conclusion = make_check("lemma2_conclusion", avg, static_cast<double>(ipow(l, lat.d)) * res.s, options.tol,
                              res.hypothesis.verdict != Verdict::holds);
  return res;
}

double solve_Tc(const std::function<double(double)>& u, double target, double u_sup, double rel_tol) {
  if (!(target > 0.0)) throw ValidationError("T_c target must be positive");
  if (target >= u_sup) {
    throw UnsatisfiableError("energy target " + format_double(target) + " is not below sup u = " +
                             format_double(u_sup));
  }
  double hi = 1.0;
  double lo;
  if (u(hi) >= target) {
    lo = 0.5;
    while (u(lo) >= target) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-300) return hi;
    }
  } else {
    do {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) throw UnsatisfiableError("energy target not reached at any finite temperature");
    } while (u(hi) < target);
  }
  while (hi / lo - 1.0 > rel_tol) {
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    (u(mid) >= target ? hi : lo) = mid;
  }
  return hi;
}

double solve_Tc(const SpectralData& sd, int n_sites, double target, double rel_tol) {
  const double u_sup = sd.eigenvalues.mean() / n_sites;
  return solve_Tc([&](double T) { return energy_density(sd, T, n_sites); }, target, u_sup, rel_tol);
}

Prop1Constant prop1_constant(FitRegime regime, double k, double gamma, double delta, double budget_total, int l) {
  if (!(k > 0.0) || !(gamma > 0.0) || !(delta > 0.0)) {
    throw ValidationError("prop1_constant needs k, gamma, Delta > 0");
  }
  if (!(budget_total > 0.0) || l < 1) throw ValidationError("prop1_constant needs C + budget > 0 and l >= 1");
  Prop1Constant pc;
  pc.regime = regime;
  if (regime == FitRegime::polynomial) {
    const double g1 = gamma + 1.0;
    // (k l)^(1/(g+1)) ((g+1) B / Delta)^(g/(g+1)) / g, powers grouped to keep exact cases exact
    pc.F = std::pow(k * l, 1.0 / g1) * std::pow(g1 * budget_total / delta, gamma / g1) / gamma;
  } else {
    const double log_term = std::log(k) + (gamma - 1.0) * std::log(gamma);
    pc.F = 2.0 * (log_term + 1.0 + gamma / 2.0 + std::log(static_cast<double>(l))) * budget_total / delta;
  }
  return pc;
}

Prop1Constant prop1_constant(FitRegime regime, double k, double gamma, double delta, double C, double h, int d,
                             int r, int l) {
  if (C < 1.0) throw ValidationError("C must be at least 1");
  if (h < 0.0) throw ValidationError("h must be nonnegative");
  return prop1_constant(regime, k, gamma, delta, C + 4.0 * d * r * h, l);
}

std::vector<double> hypothesis_grid(std::span<const double> user_grid, double T_max, int points, double ratio) {
  std::vector<double> g;
  for (double t : user_grid) {
    if (t > 0.0 && t <= T_max) g.push_back(t);
  }
  if (points >= 2) {
    const auto extra = make_grid(GridSpacing::log, T_max / ratio, T_max, points);
    g.insert(g.end(), extra.begin(), extra.end());
  } else {
    g.push_back(T_max);
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

HypothesisCheck check_fit_hypothesis(const SpectralData& sd, int n_sites, const HeatCapFit& fit,
                                     std::vector<double> grid, double tol) {
  HypothesisCheck hc;
  hc.grid = std::move(grid);
  hc.worst_log_margin = kInf;
  for (double T : hc.grid) {
    const double margin = log_model(fit, T) - log_specific_heat(sd, T, n_sites);
    if (margin < hc.worst_log_margin) {
      hc.worst_log_margin = margin;
      hc.worst_T = T;
    }
  }
  hc.holds = hc.worst_log_margin >= -tol;
  return hc;
}

BoundCertificate prop1_setup(const State& rho, const HamiltonianSpec& spec, const SpectralData& sd,
                             const Matrix& h_shifted, int l, const Prop1Options& options) {
  const LatticeSpec& lat = spec.lattice;
  const int n_sites = lat.site_count();
  const RegionPartition part = partition_lattice(lat, l, spec.r);
  BoundCertificate cert;
  cert.model = spec.name;
  cert.d = lat.d;
  cert.r = spec.r;
  cert.l = l;
  cert.n = lat.n;
  cert.degeneracy = sd.degeneracy;
  cert.degeneracy_ambiguous = sd.degeneracy_ambiguous();
  if (cert.degeneracy_ambiguous) cert.warnings.push_back("groundspace degeneracy is ambiguous near the tolerance");
  cert.translation_invariant = is_translation_invariant(rho, lat, spec.local_dim());
  const bool gated = !cert.translation_invariant && !options.waive_translation_invariance;
  if (!cert.translation_invariant) {
    cert.warnings.push_back(options.waive_translation_invariance
                                ? "state is not translation invariant; requirement waived"
                                : "state is not translation invariant; no claim made");
  }

  cert.h = coupling_strength(rho, spec, part, options.h_mode);
  cert.budget = energy_budget(lat.d, spec.r, l, cert.h.value);
  cert.energy_density = rho.expectation(h_shifted) / n_sites;
  if (options.C) {
    if (*options.C < 1.0) throw ValidationError("C must be at least 1");
    cert.C = *options.C;
  } else {
    cert.C = energy_constant(cert.energy_density, l);
  }
  cert.target = (cert.C + cert.budget.exact) / l;
  cert.target_nominal = (cert.C + cert.budget.nominal) / l;
  cert.T_c = solve_Tc(sd, n_sites, cert.target);
  cert.u_at_Tc = energy_density(sd, cert.T_c, n_sites);
  cert.s_at_Tc = entropy_density(sd, cert.T_c, n_sites);
  cert.s0 = ground_entropy_density(sd, n_sites);
  const double volume = static_cast<double>(ipow(l, lat.d));
  cert.lemma2_rhs = volume * cert.s_at_Tc;
  cert.measured_S = average_cube_entropy(rho, lat, spec.local_dim(), part);

  auto energy = hypothesis_check("energy_constraint", cert.energy_density, cert.C / l);
  auto lemma = hypothesis_check("lemma2_hypothesis", cert.energy_density + cert.budget.exact / l, cert.u_at_Tc);
  if (gated) lemma.verdict = Verdict::hypothesis_not_met;
  const bool lemma_ok = energy.verdict == Verdict::holds && lemma.verdict == Verdict::holds;
  cert.checks.push_back(energy);
  cert.checks.push_back(lemma);
  cert.checks.push_back(make_check("measured_vs_lemma2", *cert.measured_S, cert.lemma2_rhs, options.tol, !lemma_ok));
  return cert;
}

BoundCertificate prop1_certify(const State& rho, const HamiltonianSpec& spec, const SpectralData& sd,
                               const Matrix& h_shifted, int l, const HeatCapFit& fit, const Prop1Options& options) {
  BoundCertificate cert = prop1_setup(rho, spec, sd, h_shifted, l, options);
  const int n_sites = spec.lattice.site_count();
  cert.fit = fit;

  std::vector<double> grid = hypothesis_grid(options.grid, cert.T_c, options.refinement_points,
                                             options.refinement_ratio);
  if (options.monotone_shortcut) {
    bool nondecreasing = true;
    double prev = -kInf;
    for (double T : grid) {
      const double lc = log_specific_heat(sd, T, n_sites);
      nondecreasing = nondecreasing && lc >= prev;
      prev = lc;
    }
    if (nondecreasing) {
      std::vector<double> upper;
      for (double T : grid) {
        if (T >= cert.T_c / 2) upper.push_back(T);
      }
      upper.insert(upper.begin(), cert.T_c / 2);
      grid = std::move(upper);
    }
    cert.fit_hypothesis = check_fit_hypothesis(sd, n_sites, fit, grid);
    cert.fit_hypothesis.monotone_shortcut = nondecreasing;
  } else {
    cert.fit_hypothesis = check_fit_hypothesis(sd, n_sites, fit, grid);
  }

  const double volume = static_cast<double>(ipow(l, cert.d));
  const double face = static_cast<double>(ipow(l, cert.d - 1));
  cert.constant = prop1_constant(fit.regime, fit.k, fit.gamma, fit.delta, cert.C + cert.budget.exact, l);
  cert.F_nominal = prop1_constant(fit.regime, fit.k, fit.gamma, fit.delta, cert.C + cert.budget.nominal, l).F;
  if (fit.regime == FitRegime::exponential) {
    cert.constant.branch = cert.T_c <= fit.delta / fit.gamma ? "T_c <= Delta/gamma" : "T_c > Delta/gamma";
  }
  cert.prop1_rhs = cert.s0 * volume + cert.constant.F * face;

  const bool lemma_ok = cert.checks[0].verdict == Verdict::holds && cert.checks[1].verdict == Verdict::holds;
  const bool fit_ok = cert.fit_hypothesis.holds;
  cert.checks.push_back(make_check("lemma2_vs_prop1", cert.lemma2_rhs, cert.prop1_rhs, options.tol, !fit_ok));
  cert.checks.push_back(
      make_check("measured_vs_prop1", *cert.measured_S, cert.prop1_rhs, options.tol, !(fit_ok && lemma_ok)));
  return cert;
}

double pepo_eta(double k, double nu, double gap, double delta, int n, int d) {
  if (!(k > 0.0) || !(gap > 0.0) || !(delta > 0.0)) throw ValidationError("eta needs k, Delta, delta > 0");
  if (n < 2 || d < 1) throw ValidationError("eta needs n >= 2 and d >= 1");
  const double logn = std::log(static_cast<double>(n));
  return 2.0 * k / gap * std::pow(logn / delta, nu - 1.0) * std::pow(static_cast<double>(n), d - gap / delta);
}

PepoBoundParams pepo_bound(double k, double nu, double gap, double delta, const LatticeSpec& lat) {
  if (!(delta > 0.0) || delta > 1.0) throw ValidationError("delta must lie in (0, 1]");
  if (lat.n < 2) throw ValidationError("the trace-norm bound needs n >= 2 (log n > 0)");
  if (!(k > 0.0) || !(gap > 0.0) || nu < 0.0) throw ValidationError("the trace-norm bound needs k, Delta > 0, nu >= 0");
  PepoBoundParams p;
  p.k = k;
  p.nu = nu;
  p.gap = gap;
  p.delta = delta;
  p.n = lat.n;
  p.d = lat.d;
  p.T = delta / std::log(static_cast<double>(lat.n));
  p.eta = pepo_eta(k, nu, gap, delta, lat.n, lat.d);
  return p;
}

double trace_distance_to_groundspace(const SpectralData& sd, double T) {
  const Vector w = gibbs_weights(sd, T);
  const double p0 = 1.0 / sd.degeneracy;
  double dist = 0.0;
  for (Index k = 0; k < w.size(); ++k) dist += std::abs(w(k) - (k < sd.degeneracy ? p0 : 0.0));
  return dist;
}

PepoBoundParams pepo_certify(const SpectralData& sd, const LatticeSpec& lat, const HeatCapFit& fit, double delta,
                             std::span<const double> user_grid, double tol) {
  if (fit.regime != FitRegime::exponential) throw ValidationError("the trace-norm bound needs an exponential fit");
  const ArrheniusForm a = arrhenius_form(fit);
  PepoBoundParams p = pepo_bound(a.k, a.nu, a.gap, delta, lat);
  const int n_sites = lat.site_count();
  const double t_max = 1.0 / std::log(static_cast<double>(lat.n));
  p.hypothesis = check_fit_hypothesis(sd, n_sites, fit, hypothesis_grid(user_grid, t_max), tol);
  p.trace_gap = trace_distance_to_groundspace(sd, p.T);
  const bool gated = !p.hypothesis.holds;
  p.checks.push_back(make_check("trace_gap_vs_eta", *p.trace_gap, p.eta, 0.0, gated));
  const double logn = std::log(static_cast<double>(lat.n));
  const double step_rhs = p.k * std::pow(logn, p.nu) /
                          (std::pow(delta, p.nu) * std::pow(static_cast<double>(lat.n), p.gap / delta));
  const double step_lhs = entropy_density(sd, p.T, n_sites) - ground_entropy_density(sd, n_sites);
  p.checks.push_back(make_check("entropy_step", step_lhs, step_rhs, 1e-12, gated));
  return p;
}

}  // namespace arealaw
