#include "arealaw/entangle.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>

#include "arealaw/operators.hpp"

namespace arealaw {

ReducedState partial_trace(const State& state, std::span<const int> region, const LatticeSpec& lat, int local_dim) {
  if (region.empty()) throw ValidationError("partial trace needs a nonempty region");
  std::vector<int> keep(region.begin(), region.end());
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) throw ValidationError("region lists a site twice");
  for (int s : keep) {
    if (!lat.contains(s)) throw ValidationError("region site " + std::to_string(s) + " outside lattice");
  }
  const auto expected = hilbert_dimension(static_cast<std::size_t>(lat.site_count()), local_dim);
  if (static_cast<std::size_t>(state.dimension()) != expected) {
    throw ValidationError("state dimension does not match the lattice");
  }
  std::vector<int> all(lat.site_count());
  std::iota(all.begin(), all.end(), 0);
  if (keep.size() == all.size()) return ReducedState{keep, state.density(), true};
  Matrix rho = state.is_pure() ? partial_trace_pure(state.vector(), all, keep, local_dim)
                               : partial_trace(state.matrix(), all, keep, local_dim);
  return ReducedState{std::move(keep), std::move(rho), false};
}

double von_neumann_entropy(const Matrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw ValidationError("density matrix must be square");
  if (std::abs(rho.trace() - 1.0) > 1e-8) throw NumericError("density matrix trace deviates from 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Index k = 0; k < es.eigenvalues().size(); ++k) {
    double lambda = es.eigenvalues()(k);
    if (lambda < -1e-10) throw NumericError("density matrix has eigenvalue " + std::to_string(lambda));
    lambda = std::clamp(lambda, 0.0, 1.0);
    if (lambda > 0.0) s -= lambda * std::log(lambda);
  }
  return s;
}

std::vector<ScanRow> entropy_scan(const State& state, const LatticeSpec& lat, int local_dim,
                                  std::span<const int> edges) {
  std::vector<ScanRow> rows;
  for (int l : edges) {
    const RegionPartition part = partition_lattice(lat, l);
    ScanRow row;
    row.l = l;
    row.dim_bound = static_cast<double>(ipow(l, lat.d)) * std::log(static_cast<double>(local_dim));
    for (const auto& cube : part.cubes) {
      const auto sites = cube.sites(lat);
      row.per_cube.push_back(von_neumann_entropy(partial_trace(state, sites, lat, local_dim).rho));
    }
    row.s_single = row.per_cube.front();
    row.s_avg = std::accumulate(row.per_cube.begin(), row.per_cube.end(), 0.0) / row.per_cube.size();
    const auto [lo, hi] = std::minmax_element(row.per_cube.begin(), row.per_cube.end());
    row.spread = *hi - *lo;
    row.translation_covariant = row.spread <= 1e-8;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_scan_csv(std::ostream& os, std::span<const ScanRow> rows) {
  os << "l,S_single,S_avg,dim_bound\n";
  for (const auto& r : rows) {
    os << r.l << ',' << format_double(r.s_single) << ',' << format_double(r.s_avg) << ','
       << format_double(r.dim_bound) << '\n';
  }
}

}  // namespace arealaw
