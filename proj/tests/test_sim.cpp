#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "pirplan/sim.hpp"

using namespace pirplan;

namespace {

OccupantModel test_model() {
  OccupantModel m;
  m.occupied_mean_s = 1800.0;
  m.vacant_mean_s = 600.0;
  m.motion_rate_hz = 0.2;
  m.desk = {1.8, 0.6, 3.0, 1.5};
  m.arm_reach_m = 0.6;
  m.doorway = {0.15, 0.15};
  return m;
}

Grid office_grid() { return discretize_area(3.0, 2.1, 0.3); }

CoverageMask full_mask(const Grid& g) {
  CoverageMask m;
  m.covered.assign(g.size(), 1);
  m.in_range.assign(g.size(), 1);
  m.source_mount = {1.5, 1.2, 0.0};
  return m;
}

CoverageMask empty_mask(const Grid& g) {
  CoverageMask m;
  m.covered.assign(g.size(), 0);
  m.in_range.assign(g.size(), 1);
  m.source_mount = {1.5, 1.2, 0.0};
  return m;
}

/// Independent event-driven state machine over (occupancy, supply) states.
struct BucketOracle {
  double occ_on = 0, occ_off = 0, vac_on = 0, vac_off = 0;
};

BucketOracle replay_oracle(const ActivityTrace& trace, const std::vector<double>& detections,
                           double timeout) {
  BucketOracle b;
  const double duration = trace.duration_s;
  bool occupied = false;
  bool on = false;
  std::size_t ei = 0, di = 0;
  double next_off = std::numeric_limits<double>::infinity();
  double t = 0.0;
  while (t < duration) {
    double t_next = duration;
    if (ei < trace.events.size()) t_next = std::min(t_next, trace.events[ei].t_s);
    if (di < detections.size()) t_next = std::min(t_next, detections[di]);
    t_next = std::min(t_next, next_off);
    const double span = t_next - t;
    if (span > 0) {
      if (occupied && on) b.occ_on += span;
      if (occupied && !on) b.occ_off += span;
      if (!occupied && on) b.vac_on += span;
      if (!occupied && !on) b.vac_off += span;
    }
    if (t_next >= duration) break;
    // Off-timer fires strictly between events.
    if (next_off <= t_next &&
        (di >= detections.size() || detections[di] > next_off)) {
      on = false;
      next_off = std::numeric_limits<double>::infinity();
    }
    while (di < detections.size() && detections[di] <= t_next) {
      on = true;
      next_off = std::ceil(detections[di] + timeout - 1e-9);
      ++di;
    }
    while (ei < trace.events.size() && trace.events[ei].t_s <= t_next) {
      if (trace.events[ei].kind == EventKind::enter) occupied = true;
      if (trace.events[ei].kind == EventKind::leave) occupied = false;
      ++ei;
    }
    t = t_next;
  }
  return b;
}

}  // namespace

TEST_CASE("generate_trace basics") {
  const OccupantModel m = test_model();
  const Rect office{0.0, 0.0, 3.0, 2.1};

  SUBCASE("tiny duration gives an empty but valid trace") {
    const ActivityTrace t = generate_trace(m, office, 1e-3, 1);
    CHECK(t.events.empty());
    CHECK_NOTHROW(t.validate());
  }

  SUBCASE("same seed reproduces the trace bit for bit") {
    const ActivityTrace a = generate_trace(m, office, 86400.0, 42);
    const ActivityTrace b = generate_trace(m, office, 86400.0, 42);
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
      CHECK(a.events[i].t_s == b.events[i].t_s);
      CHECK(a.events[i].extent_m == b.events[i].extent_m);
    }
    const ActivityTrace c = generate_trace(m, office, 86400.0, 43);
    CHECK(a.events.size() != c.events.size());
  }

  SUBCASE("traces validate and keep motions inside episodes") {
    for (std::uint64_t seed = 0; seed < 12; ++seed)
      CHECK_NOTHROW(generate_trace(m, office, 86400.0, seed).validate());
  }

  SUBCASE("empirical occupancy matches the stationary fraction") {
    const double expect = m.occupied_mean_s / (m.occupied_mean_s + m.vacant_mean_s);
    std::vector<double> fractions;
    for (std::uint64_t seed = 100; seed < 130; ++seed) {
      const ActivityTrace t = generate_trace(m, office, 86400.0, seed);
      double occupied = 0.0;
      double enter_at = 0.0;
      bool occ = false;
      for (const ActivityEvent& e : t.events) {
        if (e.kind == EventKind::enter) {
          occ = true;
          enter_at = e.t_s;
        } else if (e.kind == EventKind::leave) {
          occupied += e.t_s - enter_at;
          occ = false;
        }
      }
      if (occ) occupied += t.duration_s - enter_at;
      fractions.push_back(occupied / t.duration_s);
    }
    double mean = 0.0;
    for (double f : fractions) mean += f;
    mean /= fractions.size();
    double var = 0.0;
    for (double f : fractions) var += (f - mean) * (f - mean);
    var /= fractions.size() - 1;
    const double se = std::sqrt(var / fractions.size());
    CHECK(std::abs(mean - expect) <= 3.0 * se + 1e-6);
  }

  SUBCASE("bad model parameters are rejected") {
    OccupantModel bad = m;
    bad.motion_rate_hz = 0.0;
    CHECK_THROWS_AS(generate_trace(bad, office, 100.0, 1), std::invalid_argument);
  }
}

TEST_CASE("detect") {
  const Grid g = office_grid();
  const OccupantModel m = test_model();
  const Rect office{0.0, 0.0, 3.0, 2.1};
  const ActivityTrace trace = generate_trace(m, office, 6 * 3600.0, 7);

  std::size_t motions = 0, doorway = 0;
  for (const ActivityEvent& e : trace.events)
    e.kind == EventKind::motion ? ++motions : ++doorway;

  const std::vector<CoverageMask> full{full_mask(g)};
  const std::vector<CoverageMask> none{empty_mask(g)};

  const DetectionStream all = detect(trace, full, g);
  CHECK(all.times.size() == trace.events.size());

  const DetectionStream door_only = detect(trace, none, g);
  CHECK(door_only.times.size() == doorway);

  // A corner-block mask detects strictly between the two: points far from the
  // block sit in holes well past any motion extent.
  CoverageMask partial = empty_mask(g);
  for (int iy = 0; iy < 4; ++iy)
    for (int ix = 0; ix < 4; ++ix) partial.covered[g.index_of(ix, iy)] = 1;
  const std::vector<CoverageMask> some{partial};
  const DetectionStream mid = detect(trace, some, g);
  CHECK(mid.times.size() > door_only.times.size());
  CHECK(mid.times.size() < all.times.size());

  CoverageMask wrong = full_mask(g);
  wrong.covered.pop_back();
  std::vector<CoverageMask> bad{wrong};
  CHECK_THROWS_AS(detect(trace, bad, g), std::invalid_argument);
}

TEST_CASE("simulate core behaviours") {
  const Grid g = office_grid();
  const OccupantModel m = test_model();
  const Rect office{0.0, 0.0, 3.0, 2.1};
  const ActivityTrace trace = generate_trace(m, office, 12 * 3600.0, 11);
  const std::vector<CoverageMask> full{full_mask(g)};

  SUBCASE("full coverage gives perfect comfort across the operating timeouts") {
    // Gaps between motions bound achievable comfort for any sensor; at
    // timeouts past the usual gap scale, full coverage misses nothing.
    OccupantModel dense = m;
    dense.motion_rate_hz = 1.0;
    const ActivityTrace busy = generate_trace(dense, office, 12 * 3600.0, 77);
    for (double timeout : {20.0, 60.0, 300.0}) {
      const SimMetrics met = simulate(busy, full, g, {timeout});
      CHECK(met.comfort_level == doctest::Approx(1.0).epsilon(1e-4));
      CHECK(met.correct_leaves == met.leave_events);
    }
  }

  SUBCASE("wastage rises toward one as the timeout grows") {
    double prev = -1.0;
    for (double timeout : {10.0, 60.0, 600.0, 7200.0, 43200.0}) {
      const SimMetrics met = simulate(trace, full, g, {timeout});
      CHECK(met.energy_wastage >= prev);
      prev = met.energy_wastage;
    }
    CHECK(prev > 0.95);
  }

  SUBCASE("comfort is monotone in the timeout on any fixed input") {
    CoverageMask partial = full_mask(g);
    for (std::size_t i = 0; i < partial.covered.size(); ++i)
      if (i % 4 != 0) partial.covered[i] = 0;
    const std::vector<CoverageMask> masks{partial};
    double prev_comfort = -1.0;
    double prev_wastage = -1.0;
    for (double timeout : {2.0, 5.0, 15.0, 40.0, 120.0, 600.0}) {
      const SimMetrics met = simulate(trace, masks, g, {timeout});
      CHECK(met.comfort_level >= prev_comfort - 1e-12);
      CHECK(met.energy_wastage >= prev_wastage - 1e-12);
      prev_comfort = met.comfort_level;
      prev_wastage = met.energy_wastage;
    }
  }

  SUBCASE("accounting identity: buckets partition the full duration") {
    const SimMetrics met = simulate(trace, full, g, {25.0});
    const double total =
        met.occupied_on_s + met.occupied_off_s + met.vacant_on_s + met.vacant_off_s;
    CHECK(total == doctest::Approx(trace.duration_s).epsilon(1e-9));
    CHECK(met.occupied_s * (1.0 - met.comfort_level) ==
          doctest::Approx(met.occupied_off_s).epsilon(1e-9));
    CHECK(met.vacant_s * (1.0 - met.energy_wastage) ==
          doctest::Approx(met.vacant_off_s).epsilon(1e-9));
  }

  SUBCASE("determinism: identical inputs give bit-identical metrics") {
    const SimMetrics a = simulate(trace, full, g, {25.0});
    const SimMetrics b = simulate(trace, full, g, {25.0});
    CHECK(a.comfort_level == b.comfort_level);
    CHECK(a.energy_wastage == b.energy_wastage);
    CHECK(a.correct_leaves == b.correct_leaves);
  }

  SUBCASE("timeout must be positive") {
    CHECK_THROWS_AS(simulate(trace, full, g, {0.0}), std::invalid_argument);
  }
}

TEST_CASE("simulate agrees with the event-driven replay oracle") {
  const Grid g = office_grid();
  const OccupantModel m = test_model();
  const Rect office{0.0, 0.0, 3.0, 2.1};
  for (std::uint64_t seed = 20; seed < 26; ++seed) {
    const ActivityTrace trace = generate_trace(m, office, 8 * 3600.0, seed);
    CoverageMask partial = full_mask(g);
    for (std::size_t i = 0; i < partial.covered.size(); ++i)
      if ((i + seed) % 3 != 0) partial.covered[i] = 0;
    const std::vector<CoverageMask> masks{partial};
    const DetectionStream det = detect(trace, masks, g);
    for (double timeout : {7.0, 33.0, 90.0}) {
      const SimMetrics met = simulate_detections(det.times, trace, {timeout});
      const BucketOracle oracle = replay_oracle(trace, det.times, timeout);
      CHECK(met.occupied_on_s == doctest::Approx(oracle.occ_on).epsilon(1e-9));
      CHECK(met.occupied_off_s == doctest::Approx(oracle.occ_off).epsilon(1e-9));
      CHECK(met.vacant_on_s == doctest::Approx(oracle.vac_on).epsilon(1e-9));
      CHECK(met.vacant_off_s == doctest::Approx(oracle.vac_off).epsilon(1e-9));
    }
  }
}

TEST_CASE("ta_cdf") {
  const Grid g = office_grid();
  const OccupantModel m = test_model();
  const Rect office{0.0, 0.0, 3.0, 2.1};
  std::vector<ActivityTrace> traces;
  for (std::uint64_t seed = 300; seed < 306; ++seed)
    traces.push_back(generate_trace(m, office, 12 * 3600.0, seed));
  const std::vector<CoverageMask> full{full_mask(g)};

  SUBCASE("timeout zero decides nothing correctly") {
    const auto cdf = ta_cdf(traces, full, g, {0.0, 10.0});
    CHECK(cdf[0].second == doctest::Approx(0.0));
  }

  SUBCASE("full coverage saturates just past the largest detection gap") {
    // With full coverage every event is detected, so detection gaps inside an
    // episode are the gaps between consecutive trace events while occupied.
    double max_gap = 0.0;
    for (const ActivityTrace& tr : traces) {
      double last = 0.0;
      for (const ActivityEvent& e : tr.events) {
        if (e.kind == EventKind::enter) {
          last = e.t_s;
        } else {
          max_gap = std::max(max_gap, e.t_s - last);
          last = e.t_s;
        }
      }
    }
    const auto cdf = ta_cdf(traces, full, g, {max_gap + 2.0, max_gap + 30.0});
    CHECK(cdf[0].second == doctest::Approx(1.0));
    CHECK(cdf[1].second == doctest::Approx(1.0));
  }

  SUBCASE("curve is non-decreasing and dominated by better coverage") {
    CoverageMask bigger = full_mask(g);
    CoverageMask smaller = full_mask(g);
    for (std::size_t i = 0; i < bigger.covered.size(); ++i) {
      if (i % 2 != 0) bigger.covered[i] = 0;
      if (i % 4 != 0) smaller.covered[i] = 0;  // subset of bigger's points
    }
    const std::vector<CoverageMask> a{bigger}, b{smaller};
    std::vector<double> grid_t;
    for (double t = 2.0; t <= 120.0; t += 6.0) grid_t.push_back(t);
    const auto cdf_a = ta_cdf(traces, a, g, grid_t);
    const auto cdf_b = ta_cdf(traces, b, g, grid_t);
    const auto frontier_a = wastage_comfort_frontier(traces, a, g, grid_t);
    const auto frontier_b = wastage_comfort_frontier(traces, b, g, grid_t);
    for (std::size_t i = 0; i < grid_t.size(); ++i) {
      if (i > 0) CHECK(cdf_a[i].second >= cdf_a[i - 1].second - 1e-12);
      CHECK(cdf_a[i].second >= cdf_b[i].second - 1e-12);  // coverage dominance
      CHECK(frontier_a[i].comfort_level >= frontier_b[i].comfort_level - 1e-12);
    }
  }
}

TEST_CASE("frontier") {
  const Grid g = office_grid();
  const OccupantModel m = test_model();
  const Rect office{0.0, 0.0, 3.0, 2.1};
  std::vector<ActivityTrace> traces;
  for (std::uint64_t seed = 500; seed < 504; ++seed)
    traces.push_back(generate_trace(m, office, 8 * 3600.0, seed));

  CoverageMask partial = full_mask(g);
  for (std::size_t i = 0; i < partial.covered.size(); ++i)
    if (i % 3 != 0) partial.covered[i] = 0;
  const std::vector<CoverageMask> masks{partial};
  const std::vector<double> grid_t{5.0, 15.0, 30.0, 60.0, 120.0};

  SUBCASE("identical masks give identical frontiers") {
    const auto f1 = wastage_comfort_frontier(traces, masks, g, grid_t);
    const auto f2 = wastage_comfort_frontier(traces, masks, g, grid_t);
    REQUIRE(f1.size() == f2.size());
    for (std::size_t i = 0; i < f1.size(); ++i) {
      CHECK(f1[i].comfort_level == f2[i].comfort_level);
      CHECK(f1[i].energy_wastage == f2[i].energy_wastage);
    }
  }

  SUBCASE("frontier values equal pooled per-trace metrics") {
    const auto frontier = wastage_comfort_frontier(traces, masks, g, grid_t);
    for (std::size_t i = 0; i < grid_t.size(); ++i) {
      std::vector<SimMetrics> per;
      for (const ActivityTrace& tr : traces) per.push_back(simulate(tr, masks, g, {grid_t[i]}));
      const PooledMetrics pooled = pool_metrics(per);
      CHECK(frontier[i].comfort_level == doctest::Approx(pooled.comfort_level).epsilon(1e-12));
      CHECK(frontier[i].energy_wastage == doctest::Approx(pooled.energy_wastage).epsilon(1e-12));
      CHECK(frontier[i].ta_fraction == doctest::Approx(pooled.ta_fraction).epsilon(1e-12));
    }
  }

  SUBCASE("timeout_for_ta interpolates the 90% crossing") {
    const std::vector<std::pair<double, double>> cdf{{10.0, 0.5}, {20.0, 0.8}, {30.0, 0.95}};
    const double t90 = timeout_for_ta(cdf, 0.9);
    CHECK(t90 == doctest::Approx(20.0 + 10.0 * (0.1 / 0.15)));
    CHECK(std::isnan(timeout_for_ta(cdf, 0.99)));
  }
}
