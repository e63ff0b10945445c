#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "arealaw/common.hpp"
#include "arealaw/lattice.hpp"
#include "arealaw/state.hpp"

namespace arealaw {

struct ReducedState {
  std::vector<int> sites;  // ascending
  Matrix rho;
  /// Set when the requested region was the whole lattice and the input was returned unchanged.
  bool whole_lattice = false;
};

/// rho_R = tr_{Lambda \ R}(rho). `region` need not be sorted; the result is on the sorted sites.
ReducedState partial_trace(const State& state, std::span<const int> region, const LatticeSpec& lat, int local_dim);

/// -sum lambda log lambda in nats. Eigenvalues in (-1e-10, 0) are clipped to 0; a trace off by
/// more than 1e-8 or a more negative eigenvalue throws NumericError.
double von_neumann_entropy(const Matrix& rho);

struct ScanRow {
  int l = 0;
  double s_single = 0.0;  // entropy of the first partition cube
  double s_avg = 0.0;     // uniform average over all partition cubes
  double dim_bound = 0.0; // l^d log(local_dim)
  double spread = 0.0;    // max - min over the cubes
  bool translation_covariant = true;  // spread <= 1e-8
  std::vector<double> per_cube;
};

std::vector<ScanRow> entropy_scan(const State& state, const LatticeSpec& lat, int local_dim,
                                  std::span<const int> edges);

/// Header `l,S_single,S_avg,dim_bound`, full double precision.
void write_scan_csv(std::ostream& os, std::span<const ScanRow> rows);

/// Shortest round-trip representation of a double, used by every CSV writer.
std::string format_double(double v);

}  // namespace arealaw
