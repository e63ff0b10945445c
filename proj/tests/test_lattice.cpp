#include <doctest.h>

#include <algorithm>
#include <set>

#include "arealaw/lattice.hpp"
#include "arealaw/common.hpp"
#include "oracles.hpp"

using namespace arealaw;

namespace {

// Brute-force distance: per axis the shorter way around when periodic.
int brute_distance(const LatticeSpec& lat, int a, int b) {
  int dist = 0;
  for (int axis = 0; axis < lat.d; ++axis) {
    const long stride = oracle::power(lat.n, lat.d - 1 - axis);
    const int xa = static_cast<int>((a / stride) % lat.n), xb = static_cast<int>((b / stride) % lat.n);
    int delta = std::abs(xa - xb);
    if (lat.boundary == Boundary::periodic) delta = std::min(delta, lat.n - delta);
    dist += delta;
  }
  return dist;
}

std::vector<int> brute_ball(const LatticeSpec& lat, int site, int r) {
  std::vector<int> out;
  for (int j = 0; j < lat.site_count(); ++j) {
    if (brute_distance(lat, site, j) <= r) out.push_back(j);
  }
  return out;
}

}  // namespace

TEST_SUITE("lattice") {
  TEST_CASE("chain ball wraps around") {
    const auto lat = LatticeSpec::make(1, 8, Boundary::periodic);
    CHECK(manhattan_ball(lat, 0, 1) == std::vector<int>{0, 1, 7});
    CHECK(manhattan_ball(LatticeSpec::make(1, 8, Boundary::open), 0, 1) == std::vector<int>{0, 1});
  }

  TEST_CASE("open square ball is a plus shape") {
    const auto lat = LatticeSpec::make(2, 5, Boundary::open);
    const int centre = lat.site({2, 2});
    const auto ball = manhattan_ball(lat, centre, 1);
    std::vector<int> expected{centre, lat.site({1, 2}), lat.site({3, 2}), lat.site({2, 1}), lat.site({2, 3})};
    std::sort(expected.begin(), expected.end());
    CHECK(ball == expected);
  }

  TEST_CASE("torus ball of radius 2 matches a brute-force scan") {
    // On the 4x4 torus the sites two steps away along an axis coincide in both directions,
    // so the ball has 11 sites rather than the 13 of the infinite square lattice.
    const auto lat = LatticeSpec::make(2, 4, Boundary::periodic);
    for (int i = 0; i < lat.site_count(); ++i) {
      const auto ball = manhattan_ball(lat, i, 2);
      CHECK(ball == brute_ball(lat, i, 2));
      CHECK(ball.size() == 11);
    }
    const auto big = LatticeSpec::make(2, 7, Boundary::periodic);
    CHECK(manhattan_ball(big, 10, 2).size() == 13);
  }

  TEST_CASE("balls are translation covariant") {
    const auto lat = LatticeSpec::make(2, 5, Boundary::periodic);
    for (int axis = 0; axis < 2; ++axis) {
      const auto t = lat.translation(axis, 1);
      for (int i = 0; i < lat.site_count(); ++i) {
        std::vector<int> moved;
        for (int j : manhattan_ball(lat, i, 2)) moved.push_back(t[j]);
        std::sort(moved.begin(), moved.end());
        CHECK(moved == manhattan_ball(lat, t[i], 2));
      }
    }
  }

  TEST_CASE("ball rejects sites outside the lattice") {
    CHECK_THROWS_AS(manhattan_ball(LatticeSpec::make(1, 4), 4, 1), ValidationError);
  }

  TEST_CASE("split of a chain segment") {
    const auto lat = LatticeSpec::make(1, 8, Boundary::periodic);
    const auto split = split_region(lat, Region{{2}, 4, 1});
    CHECK(split.interior == std::vector<int>{3, 4});
    CHECK(split.boundary == std::vector<int>{2, 5});
  }

  TEST_CASE("split of square cubes") {
    const auto lat = LatticeSpec::make(2, 6, Boundary::periodic);
    const auto s3 = split_region(lat, Region{{0, 0}, 3, 1});
    CHECK(s3.interior == std::vector<int>{lat.site({1, 1})});
    CHECK(s3.boundary.size() == 8);
    const auto s4 = split_region(LatticeSpec::make(2, 4), Region{{0, 0}, 4, 1});
    CHECK(s4.boundary.size() == 12);
    CHECK(s4.boundary.size() <= static_cast<std::size_t>(boundary_count_bound(2, 4, 1)));
  }

  TEST_CASE("boundary count identity and bound") {
    for (int d = 1; d <= 3; ++d) {
      for (int l = 1; l <= 7; ++l) {
        for (int r = 1; r <= 3; ++r) {
          const long inner = std::max(l - 2 * r, 0);
          CHECK(boundary_count(d, l, r) == ipow(l, d) - ipow(inner, d));
          CHECK(boundary_count(d, l, r) <= boundary_count_bound(d, l, r));
        }
      }
    }
    const auto lat = LatticeSpec::make(3, 5, Boundary::periodic);
    const auto split = split_region(lat, Region{{1, 0, 2}, 5, 2});
    CHECK(static_cast<long>(split.boundary.size()) == boundary_count(3, 5, 2));
    CHECK(split.interior.size() + split.boundary.size() == 125);
  }

  TEST_CASE("partitions tile the lattice") {
    CHECK(partition_lattice(LatticeSpec::make(1, 8), 4).cubes.size() == 2);
    const auto lat = LatticeSpec::make(2, 4);
    const auto part = partition_lattice(lat, 2);
    REQUIRE(part.cubes.size() == 4);
    std::set<int> seen;
    std::size_t total = 0;
    for (const auto& cube : part.cubes) {
      const auto sites = cube.sites(lat);
      total += sites.size();
      seen.insert(sites.begin(), sites.end());
    }
    CHECK(total == 16);
    CHECK(seen.size() == 16);
    CHECK_THROWS_AS(partition_lattice(LatticeSpec::make(2, 6), 4), ValidationError);
  }

  TEST_CASE("row-major linearization") {
    const auto lat = LatticeSpec::make(2, 3);
    CHECK(lat.site({1, 2}) == 5);
    CHECK(lat.coord(7) == Coord{2, 1});
    CHECK(lat.distance(0, 8) == 2);
    CHECK(LatticeSpec::make(2, 3, Boundary::open).distance(0, 8) == 4);
  }
}
