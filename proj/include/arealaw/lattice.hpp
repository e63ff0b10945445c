#pragma once

#include <string>
#include <vector>

namespace arealaw {

enum class Boundary { periodic, open };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

using Coord = std::vector<int>;

/// Cubic lattice {0,...,n-1}^d.
///
/// Sites are linearized row-major: coordinate 0 is the most significant digit,
/// site = sum_k x_k * n^(d-1-k). The same order fixes the tensor-product order of
/// the many-body basis (site 0 is the leftmost Kronecker factor).
struct LatticeSpec {
  int d = 1;
  int n = 1;
  Boundary boundary = Boundary::periodic;

  static LatticeSpec make(int d, int n, Boundary boundary = Boundary::periodic);

  int site_count() const;
  Coord coord(int site) const;
  int site(const Coord& x) const;
  bool contains(int site) const { return site >= 0 && site < site_count(); }

  /// Manhattan distance; each axis uses the shorter way around under periodic boundaries.
  int distance(int a, int b) const;

  /// Site at `site + step * e_axis`, or -1 when that leaves an open lattice.
  int shifted(int site, int axis, int step) const;

  /// Image of every site under the translation by `shift` along `axis` (periodic only).
  std::vector<int> translation(int axis, int shift) const;
};

/// Cube v + {0,...,l-1}^d together with the interaction radius that defines its interior.
struct Region {
  Coord origin;
  int l = 1;
  int r = 1;

  /// Sites of the cube in ascending order. Throws if the cube does not fit an open lattice.
  std::vector<int> sites(const LatticeSpec& lat) const;
  bool contains(const LatticeSpec& lat, int site) const;
};

struct RegionSplit {
  std::vector<int> interior;
  std::vector<int> boundary;
};

struct RegionPartition {
  int l = 1;
  std::vector<Region> cubes;
};

std::vector<int> manhattan_ball(const LatticeSpec& lat, int site, int r);

/// Interior v + {r,...,l-1-r}^d and its complement in the cube.
RegionSplit split_region(const LatticeSpec& lat, const Region& region);

/// Exact boundary size l^d - max(l-2r, 0)^d.
long boundary_count(int d, int l, int r);
/// Dimensionally consistent upper bound 2 d r l^(d-1).
long boundary_count_bound(int d, int l, int r);

/// Tiling of the lattice by translates of {0,...,l-1}^d; requires l | n.
RegionPartition partition_lattice(const LatticeSpec& lat, int l, int r = 1);

long ipow(long base, int exp);

}  // namespace arealaw
