#include <cmath>
#include <vector>

#include "doctest.h"
#include "pirplan/geometry.hpp"

using namespace pirplan;

namespace {

FovPattern small_pattern() {
  FovPattern p;
  p.mount_height_m = 3.0;
  p.plane_height_m = 0.75;  // scale 0.75
  p.max_range_m = 5.0;
  p.rings.push_back({0.0, 1, 0.35, 0.0});
  p.rings.push_back({0.583, 4, 0.35, 45.0});  // plane radius ~0.437
  return p;
}

}  // namespace

TEST_CASE("discretize_area produces the documented lattices") {
  const Grid minimal = discretize_area(1.0, 1.0, 1.0);
  CHECK(minimal.nx() == 2);
  CHECK(minimal.ny() == 2);
  CHECK(minimal.size() == 4);
  CHECK(minimal.xs.front() == doctest::Approx(0.0));
  CHECK(minimal.xs.back() == doctest::Approx(1.0));

  WeightSpec desk;
  desk.base = 1.0;
  desk.regions.push_back({Rect{0.0, 0.0, 1.0, 1.0}, 3.0});
  const Grid g = discretize_area(2.0, 1.5, 0.5, desk);
  CHECK(g.nx() == 5);
  CHECK(g.ny() == 4);
  CHECK(g.size() == 20);
  // Independent per-point oracle: closed rectangle containment.
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point p = g.point(i);
    const bool inside = p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0;
    CHECK(g.weights[i] == doctest::Approx(inside ? 3.0 : 1.0));
  }
  // Count formula from the Grid invariant.
  CHECK(g.size() ==
        (static_cast<std::size_t>(std::floor(2.0 / 0.5 + 1e-9)) + 1) *
            (static_cast<std::size_t>(std::floor(1.5 / 0.5 + 1e-9)) + 1));
}

TEST_CASE("discretize_area rejects bad input") {
  CHECK_THROWS_AS(discretize_area(0.0, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(discretize_area(1.0, -1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(discretize_area(1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(discretize_area(1.0, 1.0, 1.5), std::invalid_argument);
  WeightSpec outside;
  outside.regions.push_back({Rect{0.5, 0.5, 2.5, 0.9}, 2.0});
  CHECK_THROWS_AS(discretize_area(2.0, 1.0, 0.5, outside), std::invalid_argument);
  WeightSpec zero;
  zero.base = 0.0;
  CHECK_THROWS_AS(discretize_area(1.0, 1.0, 0.5, zero), std::invalid_argument);
}

TEST_CASE("project_fov edge behaviours") {
  const Grid g = discretize_area(2.4, 2.4, 0.3);

  SUBCASE("zero rings covers nothing") {
    FovPattern empty;
    empty.mount_height_m = 2.5;
    empty.plane_height_m = 0.75;
    empty.max_range_m = 5.0;
    const CoverageMask m = project_fov(empty, {1.2, 1.2, 0.0}, g);
    CHECK(m.covered_count() == 0);
    CHECK(m.in_range_count() == g.size());
  }

  SUBCASE("single huge footprint covers every in-range point") {
    FovPattern full;
    full.mount_height_m = 2.5;
    full.plane_height_m = 0.75;
    full.max_range_m = 20.0;
    full.rings.push_back({0.0, 1, 12.0, 0.0});  // plane side 8.4 > grid diagonal
    const CoverageMask m = project_fov(full, {1.2, 1.2, 0.0}, g);
    CHECK(m.covered_count() == m.in_range_count());
    CHECK(m.in_range_count() == g.size());
    CHECK(hole_fraction(m, g) == doctest::Approx(0.0));
  }

  SUBCASE("mount outside the area is rejected") {
    CHECK_THROWS_AS(project_fov(small_pattern(), {-0.1, 0.5, 0.0}, g), std::invalid_argument);
    CHECK_THROWS_AS(project_fov(small_pattern(), {0.5, 2.6, 0.0}, g), std::invalid_argument);
  }

  SUBCASE("plane height must sit below the mount") {
    FovPattern bad = small_pattern();
    bad.plane_height_m = 3.5;
    CHECK_THROWS_AS(project_fov(bad, {1.2, 1.2, 0.0}, g), std::invalid_argument);
  }
}

TEST_CASE("project_fov is pure and deterministic") {
  const Grid g = discretize_area(2.4, 2.4, 0.3);
  const FovPattern p = small_pattern();
  const CoverageMask a = project_fov(p, {1.2, 1.2, 0.3}, g);
  const CoverageMask b = project_fov(p, {1.2, 1.2, 0.3}, g);
  CHECK(a.covered == b.covered);
  CHECK(a.in_range == b.in_range);
}

TEST_CASE("coverage rotates with the pattern on a square grid") {
  const Grid g = discretize_area(2.4, 2.4, 0.3);
  const FovPattern p = small_pattern();
  const MountPose center{1.2, 1.2, 0.2};
  const CoverageMask base = project_fov(p, center, g);
  const CoverageMask rot = project_fov(p, {1.2, 1.2, 0.2 + std::numbers::pi / 2.0}, g);
  for (int iy = 0; iy < g.ny(); ++iy) {
    for (int ix = 0; ix < g.nx(); ++ix) {
      // 90 degree rotation about the center maps (x,y) -> (cx-(y-cy), cy+(x-cx)).
      const double x = g.xs[ix];
      const double y = g.ys[iy];
      const double rx = 1.2 - (y - 1.2);
      const double ry = 1.2 + (x - 1.2);
      const std::size_t from = g.index_of(ix, iy);
      const std::size_t to = g.nearest_index(rx, ry);
      CHECK(static_cast<bool>(rot.covered[to]) == static_cast<bool>(base.covered[from]));
    }
  }
}

TEST_CASE("projected footprint is invariant to scaling both heights") {
  const Grid g = discretize_area(2.4, 2.4, 0.3);
  FovPattern p = small_pattern();
  const CoverageMask a = project_fov(p, {1.2, 1.2, 0.0}, g);
  p.mount_height_m *= 2.0;
  p.plane_height_m *= 2.0;
  const CoverageMask b = project_fov(p, {1.2, 1.2, 0.0}, g);
  CHECK(a.covered == b.covered);
}

TEST_CASE("hole_fraction and covered fraction partition in-range points") {
  const Grid g = discretize_area(2.4, 2.4, 0.3);
  const CoverageMask m = project_fov(small_pattern(), {1.2, 1.2, 0.0}, g);
  const double holes = hole_fraction(m, g);
  const double covered =
      static_cast<double>(m.covered_count()) / static_cast<double>(m.in_range_count());
  CHECK(holes + covered == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(holes > 0.0);
  CHECK(holes < 1.0);
}

TEST_CASE("hole_fraction region handling") {
  const Grid g = discretize_area(2.4, 2.4, 0.3);
  const CoverageMask m = project_fov(small_pattern(), {1.2, 1.2, 0.0}, g);
  CHECK_NOTHROW(hole_fraction(m, g, Rect{0.0, 0.0, 1.2, 1.2}));
  CHECK_THROWS_AS(hole_fraction(m, g, Rect{10.0, 10.0, 11.0, 11.0}), std::invalid_argument);
  CoverageMask wrong = m;
  wrong.covered.pop_back();
  CHECK_THROWS_AS(hole_fraction(wrong, g), std::invalid_argument);
}

TEST_CASE("is_detectable applies the 0.6 m hand rule") {
  CHECK(is_detectable(0.6, 0.5));
  CHECK_FALSE(is_detectable(0.6, 1.1));
  CHECK(is_detectable(0.05, 0.0));
  CHECK(is_detectable(1.5, 1.2));       // body motion spills out of a 1.2 m hole
  CHECK_FALSE(is_detectable(0.3, 0.9)); // hand motion lost in a 0.9 m hole
  CHECK(is_detectable(0.0, 0.6));       // boundary: holes may reach 0.6 m
  CHECK_THROWS_AS(is_detectable(-0.1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(is_detectable(0.1, -0.5), std::invalid_argument);
}

TEST_CASE("local hole sizes measure the largest centered uncovered square") {
  const Grid g = discretize_area(1.8, 1.8, 0.3);  // 7x7
  std::vector<char> covered(g.size(), 0);

  SUBCASE("fully covered grid has no holes") {
    std::fill(covered.begin(), covered.end(), 1);
    for (double h : local_hole_sizes(covered, g)) CHECK(h == doctest::Approx(0.0));
  }

  SUBCASE("empty grid is one giant hole") {
    const auto holes = local_hole_sizes(covered, g);
    for (double h : holes) CHECK(h >= 2.0);  // capped at grid scale, larger than any motion
  }

  SUBCASE("isolated uncovered point sits in a one-step hole") {
    std::fill(covered.begin(), covered.end(), 1);
    covered[g.index_of(3, 3)] = 0;
    const auto holes = local_hole_sizes(covered, g);
    CHECK(holes[g.index_of(3, 3)] == doctest::Approx(0.3));
    CHECK(holes[g.index_of(2, 3)] == doctest::Approx(0.0));
  }

  SUBCASE("3x3 uncovered block: center hole spans three steps") {
    std::fill(covered.begin(), covered.end(), 1);
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) covered[g.index_of(3 + dx, 3 + dy)] = 0;
    const auto holes = local_hole_sizes(covered, g);
    CHECK(holes[g.index_of(3, 3)] == doctest::Approx(0.9));
    CHECK(holes[g.index_of(2, 3)] == doctest::Approx(0.3));
  }
}

TEST_CASE("union_masks and region_coverage") {
  const Grid g = discretize_area(1.8, 1.8, 0.3);
  FovPattern spot;
  spot.mount_height_m = 3.0;
  spot.plane_height_m = 0.75;
  spot.max_range_m = 5.0;
  spot.rings.push_back({0.0, 1, 0.35, 0.0});
  const CoverageMask a = project_fov(spot, {0.3, 0.3, 0.0}, g);
  const CoverageMask b = project_fov(spot, {1.5, 1.5, 0.0}, g);
  const std::vector<CoverageMask> masks{a, b};
  const UnionMask u = union_masks(masks, g);
  CHECK(std::count(u.covered.begin(), u.covered.end(), char(1)) == 2);
  CHECK(region_coverage(u.covered, g, Rect{0.0, 0.0, 0.6, 0.6}) == doctest::Approx(1.0 / 9.0));
  CHECK_THROWS_AS(region_coverage(u.covered, g, Rect{5.0, 5.0, 6.0, 6.0}),
                  std::invalid_argument);
}
