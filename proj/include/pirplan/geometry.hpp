#ifndef PIRPLAN_GEOMETRY_HPP
#define PIRPLAN_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pirplan/errors.hpp"

namespace pirplan {

inline constexpr double kGeomTol = 1e-9;

/// Largest sensing hole (m) through which a sitting person's hand motion is
/// still reliably picked up by a PIR.
inline constexpr double kHandHoleLimitM = 0.6;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Axis-aligned rectangle, closed boundaries.
struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  bool contains(double x, double y) const {
    return x >= x0 - kGeomTol && x <= x1 + kGeomTol && y >= y0 - kGeomTol &&
           y <= y1 + kGeomTol;
  }
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }

  Rect inflated(double margin) const { return {x0 - margin, y0 - margin, x1 + margin, y1 + margin}; }

  Rect clipped_to(const Rect& bounds) const {
    return {std::max(x0, bounds.x0), std::max(y0, bounds.y0), std::min(x1, bounds.x1),
            std::min(y1, bounds.y1)};
  }
};

/// One concentric ring of identical square beam footprints. Radii and footprint
/// sides are given at floor level; projection onto the work plane scales both.
/// Beam azimuths are phase_deg + k * 360/beam_count, rotated by the mount yaw.
struct BeamRing {
  double radius_m = 0.0;
  int beam_count = 1;
  double footprint_side_m = 0.0;
  double phase_deg = 0.0;
};

/// Fresnel-lens PIR field of view: a discrete set of beam footprints inside the
/// sensing disc. Everything between footprints is a sensing hole.
struct FovPattern {
  double mount_height_m = 0.0;
  double plane_height_m = 0.0;
  std::vector<BeamRing> rings;
  double max_range_m = 0.0;

  /// Similar-triangles factor mapping floor-level radii onto the work plane.
  double plane_scale() const {
    return (mount_height_m - plane_height_m) / mount_height_m;
  }

  void validate() const {
    if (!(mount_height_m > 0.0)) throw std::invalid_argument("fov: mount_height must be > 0");
    if (!(plane_height_m >= 0.0) || plane_height_m >= mount_height_m)
      throw std::invalid_argument("fov: plane_height must be in [0, mount_height)");
    if (!(max_range_m > 0.0)) throw std::invalid_argument("fov: max_range must be > 0");
    double footprint_area = 0.0;
    for (const BeamRing& ring : rings) {
      if (ring.radius_m < 0.0) throw std::invalid_argument("fov: ring radius must be >= 0");
      if (ring.radius_m > max_range_m + kGeomTol)
        throw std::invalid_argument("fov: ring radius exceeds max_range");
      if (ring.beam_count < 1) throw std::invalid_argument("fov: beam_count must be >= 1");
      if (!(ring.footprint_side_m > 0.0))
        throw std::invalid_argument("fov: footprint side must be > 0");
      if (ring.radius_m + ring.footprint_side_m * std::numbers::sqrt2 / 2.0 >
          max_range_m + kGeomTol)
        throw std::invalid_argument("fov: footprint corner exceeds max_range");
      footprint_area += ring.beam_count * ring.footprint_side_m * ring.footprint_side_m;
    }
    // Footprints must leave holes: their total area cannot tile the sensing disc.
    const double disc_area = std::numbers::pi * max_range_m * max_range_m;
    if (!rings.empty() && footprint_area >= disc_area - kGeomTol)
      throw std::invalid_argument("fov: footprints would tile the sensing disc; holes must exist");
  }
};

struct WeightRegion {
  Rect rect;
  double weight = 1.0;
};

/// Per-point weights: a uniform base value with rectangular overrides (desks).
/// Later regions override earlier ones.
struct WeightSpec {
  double base = 1.0;
  std::vector<WeightRegion> regions;
};

/// Regular lattice over [0,width] x [0,depth] with per-point weights (the
/// weighting matrix phi). Points sit at step multiples including both
/// borders when they land on the lattice.
struct Grid {
  double width_m = 0.0;
  double depth_m = 0.0;
  double step_m = 0.0;
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> weights;  // size nx*ny, index = iy * nx + ix

  int nx() const { return static_cast<int>(xs.size()); }
  int ny() const { return static_cast<int>(ys.size()); }
  std::size_t size() const { return xs.size() * ys.size(); }

  Point point(std::size_t idx) const {
    return {xs[idx % xs.size()], ys[idx / xs.size()]};
  }
  std::size_t index_of(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * xs.size() + static_cast<std::size_t>(ix);
  }

  /// Index of the lattice point nearest to (x, y); coordinates are clamped to
  /// the grid, so positions anywhere in the office map to a valid point.
  std::size_t nearest_index(double x, double y) const {
    const auto snap = [](double v, const std::vector<double>& axis) {
      int k = static_cast<int>(std::lower_bound(axis.begin(), axis.end(), v) - axis.begin());
      if (k <= 0) return 0;
      if (k >= static_cast<int>(axis.size())) return static_cast<int>(axis.size()) - 1;
      return (v - axis[k - 1] <= axis[k] - v) ? k - 1 : k;
    };
    return index_of(snap(x, xs), snap(y, ys));
  }

  double total_weight() const {
    double sum = 0.0;
    for (double w : weights) sum += w;
    return sum;
  }
};

/// Discretizes a width x depth area into the lattice of step multiples,
/// both borders included, and assigns weights from the spec.
///
/// Example: (2.0, 1.5, 0.5) -> 5 x 4 points; (1.0, 1.0, 1.0) -> the 4 corners.
inline Grid discretize_area(double width_m, double depth_m, double step_m,
                            const WeightSpec& weight_spec = {}) {
  if (!(width_m > 0.0) || !(depth_m > 0.0) || !(step_m > 0.0))
    throw std::invalid_argument("discretize_area: dimensions and step must be > 0");
  if (step_m > std::min(width_m, depth_m) + kGeomTol)
    throw std::invalid_argument("discretize_area: step exceeds min(width, depth)");
  if (weight_spec.base < 0.0)
    throw std::invalid_argument("discretize_area: base weight must be >= 0");
  const Rect area{0.0, 0.0, width_m, depth_m};
  for (const WeightRegion& region : weight_spec.regions) {
    if (region.weight < 0.0)
      throw std::invalid_argument("discretize_area: region weight must be >= 0");
    if (region.rect.x0 > region.rect.x1 || region.rect.y0 > region.rect.y1 ||
        !area.contains(region.rect.x0, region.rect.y0) ||
        !area.contains(region.rect.x1, region.rect.y1))
      throw std::invalid_argument("discretize_area: weight region outside area");
  }

  const auto axis_points = [](double length, double step) {
    std::vector<double> pts;
    const int n = static_cast<int>(std::floor(length / step + kGeomTol)) + 1;
    pts.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) pts.push_back(std::min(k * step, length));
    return pts;
  };

  Grid grid;
  grid.width_m = width_m;
  grid.depth_m = depth_m;
  grid.step_m = step_m;
  grid.xs = axis_points(width_m, step_m);
  grid.ys = axis_points(depth_m, step_m);
  grid.weights.assign(grid.size(), weight_spec.base);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point p = grid.point(i);
    for (const WeightRegion& region : weight_spec.regions)
      if (region.rect.contains(p.x, p.y)) grid.weights[i] = region.weight;
  }
  if (grid.total_weight() <= 0.0)
    throw std::invalid_argument("discretize_area: at least one weight must be > 0");
  return grid;
}

/// Ceiling mount: plan position plus yaw (radians) applied to beam azimuths.
struct MountPose {
  double x = 0.0;
  double y = 0.0;
  double yaw_rad = 0.0;
};

/// Which grid points a mounted PIR covers (inside a beam footprint) and which
/// are within its projected sensing range at all.
struct CoverageMask {
  std::vector<char> covered;
  std::vector<char> in_range;
  MountPose source_mount;

  std::size_t covered_count() const {
    return static_cast<std::size_t>(std::count(covered.begin(), covered.end(), char(1)));
  }
  std::size_t in_range_count() const {
    return static_cast<std::size_t>(std::count(in_range.begin(), in_range.end(), char(1)));
  }
};

/// Projects the pattern from a mount onto the grid's work plane. A point is
/// covered iff it lies in at least one beam footprint (closed boundaries, ties
/// toward coverage) and within the scaled sensing range.
inline CoverageMask project_fov(const FovPattern& pattern, const MountPose& mount,
                                const Grid& grid) {
  pattern.validate();
  if (mount.x < -kGeomTol || mount.x > grid.width_m + kGeomTol || mount.y < -kGeomTol ||
      mount.y > grid.depth_m + kGeomTol)
    throw std::invalid_argument("project_fov: mount outside area");

  const double s = pattern.plane_scale();
  const double range = s * pattern.max_range_m;

  struct Footprint {
    double cx, cy, half;
  };
  std::vector<Footprint> footprints;
  for (const BeamRing& ring : pattern.rings) {
    const double angle_step = 2.0 * std::numbers::pi / ring.beam_count;
    const double phase = ring.phase_deg * std::numbers::pi / 180.0;
    for (int k = 0; k < ring.beam_count; ++k) {
      const double a = mount.yaw_rad + phase + k * angle_step;
      footprints.push_back({mount.x + s * ring.radius_m * std::cos(a),
                            mount.y + s * ring.radius_m * std::sin(a),
                            s * ring.footprint_side_m / 2.0});
    }
  }

  CoverageMask mask;
  mask.source_mount = mount;
  mask.covered.assign(grid.size(), 0);
  mask.in_range.assign(grid.size(), 0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point p = grid.point(i);
    const double d = std::hypot(p.x - mount.x, p.y - mount.y);
    if (d > range + kGeomTol) continue;
    mask.in_range[i] = 1;
    for (const Footprint& f : footprints) {
      if (std::abs(p.x - f.cx) <= f.half + kGeomTol &&
          std::abs(p.y - f.cy) <= f.half + kGeomTol) {
        mask.covered[i] = 1;
        break;
      }
    }
  }
  return mask;
}

/// Fraction of in-range grid points left uncovered, optionally restricted to a
/// region. hole_fraction + covered fraction = 1 over the same denominator.
inline double hole_fraction(const CoverageMask& mask, const Grid& grid,
                            const std::optional<Rect>& region = std::nullopt) {
  if (mask.covered.size() != grid.size() || mask.in_range.size() != grid.size())
    throw std::invalid_argument("hole_fraction: mask and grid sizes differ");
  std::size_t in_range = 0;
  std::size_t uncovered = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!mask.in_range[i]) continue;
    if (region) {
      const Point p = grid.point(i);
      if (!region->contains(p.x, p.y)) continue;
    }
    ++in_range;
    if (!mask.covered[i]) ++uncovered;
  }
  if (in_range == 0) {
    if (region) throw std::invalid_argument("hole_fraction: empty region intersection");
    throw std::invalid_argument("hole_fraction: no in-range points");
  }
  return static_cast<double>(uncovered) / static_cast<double>(in_range);
}

/// A motion of the given spatial extent is detected when the sensing hole it
/// sits in does not exceed max(extent, 0.6 m): holes up to 0.6 m still catch a
/// sitting person's hand motions, and larger motions spill out of larger holes.
inline bool is_detectable(double motion_extent_m, double local_hole_size_m) {
  if (motion_extent_m < 0.0 || local_hole_size_m < 0.0)
    throw std::invalid_argument("is_detectable: inputs must be >= 0");
  return local_hole_size_m <= std::max(motion_extent_m, kHandHoleLimitM) + kGeomTol;
}

/// Union of several masks over one grid (covered / in-range of any mount).
struct UnionMask {
  std::vector<char> covered;
  std::vector<char> in_range;
};

inline UnionMask union_masks(std::span<const CoverageMask> masks, const Grid& grid) {
  UnionMask u;
  u.covered.assign(grid.size(), 0);
  u.in_range.assign(grid.size(), 0);
  for (const CoverageMask& m : masks) {
    if (m.covered.size() != grid.size())
      throw std::invalid_argument("union_masks: mask/grid size mismatch");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      u.covered[i] |= m.covered[i];
      u.in_range[i] |= m.in_range[i];
    }
  }
  return u;
}

/// Local sensing-hole size per grid point: the side of the largest uncovered
/// axis-aligned square centered there. Covered points get 0. Off-grid space
/// counts as uncovered, so holes keep growing toward the walls.
inline std::vector<double> local_hole_sizes(const std::vector<char>& covered,
                                            const Grid& grid) {
  if (covered.size() != grid.size())
    throw std::invalid_argument("local_hole_sizes: mask/grid size mismatch");
  const int nx = grid.nx();
  const int ny = grid.ny();
  const int max_steps = std::max(nx, ny);
  std::vector<double> holes(grid.size(), 0.0);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const std::size_t idx = grid.index_of(ix, iy);
      if (covered[idx]) continue;
      // Chebyshev distance (in steps) to the nearest covered point.
      int d = max_steps;
      for (int jy = 0; jy < ny; ++jy) {
        const int dy = std::abs(jy - iy);
        if (dy >= d) continue;
        for (int jx = 0; jx < nx; ++jx) {
          if (covered[grid.index_of(jx, jy)])
            d = std::min(d, std::max(std::abs(jx - ix), dy));
        }
      }
      holes[idx] = (2.0 * d - 1.0) * grid.step_m;
    }
  }
  return holes;
}

/// Unweighted fraction of a region's grid points that are covered.
inline double region_coverage(const std::vector<char>& covered, const Grid& grid,
                              const Rect& region) {
  std::size_t total = 0;
  std::size_t hit = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point p = grid.point(i);
    if (!region.contains(p.x, p.y)) continue;
    ++total;
    if (covered[i]) ++hit;
  }
  if (total == 0) throw std::invalid_argument("region_coverage: region holds no grid points");
  return static_cast<double>(hit) / static_cast<double>(total);
}

}  // namespace pirplan

#endif  // PIRPLAN_GEOMETRY_HPP
