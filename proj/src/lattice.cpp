#include "arealaw/lattice.hpp"

#include <algorithm>
#include <cstdlib>

#include "arealaw/common.hpp"

namespace arealaw {

std::string to_string(Boundary b) { return b == Boundary::periodic ? "periodic" : "open"; }

Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic") return Boundary::periodic;
  if (s == "open") return Boundary::open;
  throw ValidationError("unknown boundary condition '" + s + "' (expected periodic | open)");
}

long ipow(long base, int exp) {
  long out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

LatticeSpec LatticeSpec::make(int d, int n, Boundary boundary) {
  if (d < 1) throw ValidationError("lattice dimension d must be positive, got " + std::to_string(d));
  if (n < 1) throw ValidationError("lattice edge n must be positive, got " + std::to_string(n));
  return LatticeSpec{d, n, boundary};
}

int LatticeSpec::site_count() const { return static_cast<int>(ipow(n, d)); }

Coord LatticeSpec::coord(int site) const {
  if (!contains(site)) throw ValidationError("site " + std::to_string(site) + " outside lattice");
  Coord x(d);
  for (int k = d - 1; k >= 0; --k) {
    x[k] = site % n;
    site /= n;
  }
  return x;
}

int LatticeSpec::site(const Coord& x) const {
  if (static_cast<int>(x.size()) != d) throw ValidationError("coordinate has wrong dimension");
  int s = 0;
  for (int k = 0; k < d; ++k) {
    if (x[k] < 0 || x[k] >= n) throw ValidationError("coordinate outside lattice");
    s = s * n + x[k];
  }
  return s;
}

int LatticeSpec::distance(int a, int b) const {
  const Coord xa = coord(a);
  const Coord xb = coord(b);
  int dist = 0;
  for (int k = 0; k < d; ++k) {
    int delta = std::abs(xa[k] - xb[k]);
    if (boundary == Boundary::periodic) delta = std::min(delta, n - delta);
    dist += delta;
  }
  return dist;
}

int LatticeSpec::shifted(int site, int axis, int step) const {
  Coord x = coord(site);
  int v = x[axis] + step;
  if (boundary == Boundary::periodic) {
    v = ((v % n) + n) % n;
  } else if (v < 0 || v >= n) {
    return -1;
  }
  x[axis] = v;
  return this->site(x);
}

std::vector<int> LatticeSpec::translation(int axis, int shift) const {
  if (boundary != Boundary::periodic) throw ValidationError("translations require periodic boundaries");
  std::vector<int> image(site_count());
  for (int s = 0; s < site_count(); ++s) image[s] = shifted(s, axis, shift);
  return image;
}

namespace {

// Visits every offset in {lo,...,hi-1}^d.
template <typename F>
void for_each_offset(int d, int lo, int hi, F&& f) {
  if (hi <= lo) return;
  Coord off(d, lo);
  while (true) {
    f(off);
    int k = d - 1;
    while (k >= 0 && ++off[k] == hi) {
      off[k] = lo;
      --k;
    }
    if (k < 0) return;
  }
}

int place(const LatticeSpec& lat, const Coord& origin, const Coord& off) {
  Coord x(lat.d);
  for (int k = 0; k < lat.d; ++k) {
    int v = origin[k] + off[k];
    if (lat.boundary == Boundary::periodic) {
      v = ((v % lat.n) + lat.n) % lat.n;
    } else if (v < 0 || v >= lat.n) {
      throw ValidationError("region does not fit inside the open lattice");
    }
    x[k] = v;
  }
  return lat.site(x);
}

void check_region(const LatticeSpec& lat, const Region& region) {
  if (static_cast<int>(region.origin.size()) != lat.d) throw ValidationError("region origin has wrong dimension");
  if (region.l < 1 || region.l > lat.n) {
    throw ValidationError("region edge l=" + std::to_string(region.l) + " must lie in [1, n=" +
                          std::to_string(lat.n) + "]");
  }
  if (region.r < 1) throw ValidationError("interaction radius r must be positive");
}

}  // namespace

std::vector<int> Region::sites(const LatticeSpec& lat) const {
  check_region(lat, *this);
  std::vector<int> out;
  for_each_offset(lat.d, 0, l, [&](const Coord& off) { out.push_back(place(lat, origin, off)); });
  std::sort(out.begin(), out.end());
  return out;
}

bool Region::contains(const LatticeSpec& lat, int site) const {
  const auto s = sites(lat);
  return std::binary_search(s.begin(), s.end(), site);
}

std::vector<int> manhattan_ball(const LatticeSpec& lat, int site, int r) {
  if (!lat.contains(site)) throw ValidationError("site " + std::to_string(site) + " outside lattice");
  if (r < 0) throw ValidationError("ball radius must be nonnegative");
  std::vector<int> out;
  for (int j = 0; j < lat.site_count(); ++j) {
    if (lat.distance(site, j) <= r) out.push_back(j);
  }
  return out;
}

RegionSplit split_region(const LatticeSpec& lat, const Region& region) {
  check_region(lat, region);
  RegionSplit split;
  std::vector<int> all = region.sites(lat);
  for_each_offset(lat.d, region.r, region.l - region.r,
                  [&](const Coord& off) { split.interior.push_back(place(lat, region.origin, off)); });
  std::sort(split.interior.begin(), split.interior.end());
  std::set_difference(all.begin(), all.end(), split.interior.begin(), split.interior.end(),
                      std::back_inserter(split.boundary));
  return split;
}

long boundary_count(int d, int l, int r) { return ipow(l, d) - ipow(std::max(l - 2 * r, 0), d); }

long boundary_count_bound(int d, int l, int r) { return 2L * d * r * ipow(l, d - 1); }

RegionPartition partition_lattice(const LatticeSpec& lat, int l, int r) {
  if (l < 1 || lat.n % l != 0) {
    throw ValidationError("cube edge l=" + std::to_string(l) + " does not divide n=" + std::to_string(lat.n));
  }
  RegionPartition part{l, {}};
  for_each_offset(lat.d, 0, lat.n / l, [&](const Coord& block) {
    Coord origin(lat.d);
    for (int k = 0; k < lat.d; ++k) origin[k] = block[k] * l;
    part.cubes.push_back(Region{origin, l, r});
  });
  return part;
}

}  // namespace arealaw
