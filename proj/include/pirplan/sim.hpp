#ifndef PIRPLAN_SIM_HPP
#define PIRPLAN_SIM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pirplan/geometry.hpp"
#include "pirplan/random.hpp"

namespace pirplan {

enum class EventKind : char { enter, leave, motion };

struct ActivityEvent {
  double t_s = 0.0;
  EventKind kind = EventKind::motion;
  Point pos;
  double extent_m = 0.0;
};

/// Timestamped occupant activity over one simulated span. Starts vacant;
/// enter/leave alternate, motions only while occupied.
struct ActivityTrace {
  std::vector<ActivityEvent> events;
  double duration_s = 0.0;
  std::uint64_t seed = 0;

  void validate() const {
    double last = -1.0;
    bool occupied = false;
    for (const ActivityEvent& e : events) {
      if (e.t_s <= last) throw std::invalid_argument("trace: timestamps must strictly increase");
      last = e.t_s;
      switch (e.kind) {
        case EventKind::enter:
          if (occupied) throw std::invalid_argument("trace: enter while occupied");
          occupied = true;
          break;
        case EventKind::leave:
          if (!occupied) throw std::invalid_argument("trace: leave while vacant");
          occupied = false;
          break;
        case EventKind::motion:
          if (!occupied) throw std::invalid_argument("trace: motion while vacant");
          break;
      }
    }
  }
};

/// Alternating-renewal occupant: exponential occupied/vacant dwell times,
/// Poisson motion while occupied. Motion extents fall into hand/arm/body
/// classes; hands happen on the desk, arms within reach of it, bodies anywhere.
struct OccupantModel {
  double occupied_mean_s = 2700.0;
  double vacant_mean_s = 1200.0;
  double motion_rate_hz = 0.1;

  double p_hand = 0.7;
  double p_arm = 0.2;  // p_body = 1 - p_hand - p_arm

  double hand_extent_min_m = 0.1, hand_extent_max_m = 0.6;
  double arm_extent_min_m = 0.6, arm_extent_max_m = 1.0;
  double body_extent_min_m = 1.0, body_extent_max_m = 2.0;

  Rect desk{0.0, 0.0, 1.0, 1.0};
  double hand_margin_m = 0.0;  // hands roam the desk inflated by this reach
  double arm_reach_m = 0.6;    // arm gestures roam the desk inflated by this
  Point doorway{0.0, 0.0};
  double doorway_extent_m = 1.2;

  void validate() const {
    if (!(occupied_mean_s > 0.0) || !(vacant_mean_s > 0.0) || !(motion_rate_hz > 0.0))
      throw std::invalid_argument("occupant: rates and dwell means must be > 0");
    if (p_hand < 0.0 || p_arm < 0.0 || p_hand + p_arm > 1.0 + 1e-12)
      throw std::invalid_argument("occupant: class probabilities must be a sub-distribution");
    if (hand_extent_min_m < 0.0 || hand_extent_max_m < hand_extent_min_m ||
        arm_extent_max_m < arm_extent_min_m || body_extent_max_m < body_extent_min_m)
      throw std::invalid_argument("occupant: extent ranges are malformed");
  }
};

/// Continuous no-detection time before the space is declared vacant.
struct TimeoutPolicy {
  double timeout_s = 30.0;

  void validate() const {
    if (!(timeout_s > 0.0)) throw std::invalid_argument("policy: timeout must be > 0");
  }
};

/// Generates one seeded trace. Deterministic: same seed, same trace.
inline ActivityTrace generate_trace(const OccupantModel& model, const Rect& office,
                                    double duration_s, std::uint64_t seed) {
  model.validate();
  if (!(duration_s > 0.0)) throw std::invalid_argument("generate_trace: duration must be > 0");
  const Rect hand_zone = model.desk.inflated(model.hand_margin_m).clipped_to(office);
  const Rect arm_zone = model.desk.inflated(model.arm_reach_m).clipped_to(office);

  ActivityTrace trace;
  trace.duration_s = duration_s;
  trace.seed = seed;
  Rng rng(seed);

  double t = 0.0;
  while (true) {
    t += rng.exponential(model.vacant_mean_s);
    if (t >= duration_s) break;
    trace.events.push_back({t, EventKind::enter, model.doorway, model.doorway_extent_m});

    const double leave_at = t + rng.exponential(model.occupied_mean_s);
    double tm = t;
    while (true) {
      tm += rng.exponential(1.0 / model.motion_rate_hz);
      if (tm >= leave_at || tm >= duration_s) break;
      ActivityEvent ev;
      ev.t_s = tm;
      ev.kind = EventKind::motion;
      const double cls = rng.uniform01();
      if (cls < model.p_hand) {
        ev.extent_m = rng.uniform(model.hand_extent_min_m, model.hand_extent_max_m);
        ev.pos = {rng.uniform(hand_zone.x0, hand_zone.x1),
                  rng.uniform(hand_zone.y0, hand_zone.y1)};
      } else if (cls < model.p_hand + model.p_arm) {
        ev.extent_m = rng.uniform(model.arm_extent_min_m, model.arm_extent_max_m);
        ev.pos = {rng.uniform(arm_zone.x0, arm_zone.x1), rng.uniform(arm_zone.y0, arm_zone.y1)};
      } else {
        ev.extent_m = rng.uniform(model.body_extent_min_m, model.body_extent_max_m);
        ev.pos = {rng.uniform(office.x0, office.x1), rng.uniform(office.y0, office.y1)};
      }
      trace.events.push_back(ev);
    }
    if (leave_at >= duration_s) break;
    t = leave_at;
    trace.events.push_back({t, EventKind::leave, model.doorway, model.doorway_extent_m});
  }
  return trace;
}

/// Which trace events the deployed PIRs notice. Doorway enter/leave events are
/// always caught by the switch-mote PIR at the entry; an interior motion is
/// caught when its nearest grid point is in range of some sensor and the local
/// sensing hole of the union coverage is small enough for the motion's extent.
struct DetectionStream {
  std::vector<double> times;            // detection timestamps, ascending
  std::vector<ActivityEvent> detected;  // matching events
};

class DetectionModel {
 public:
  DetectionModel(std::span<const CoverageMask> masks, const Grid& grid) : grid_(&grid) {
    const UnionMask u = union_masks(masks, grid);
    in_range_ = u.in_range;
    holes_ = local_hole_sizes(u.covered, grid);
    covered_ = u.covered;
  }

  bool detects(const ActivityEvent& e) const {
    if (e.kind != EventKind::motion) return true;  // doorway PIR
    const std::size_t idx = grid_->nearest_index(e.pos.x, e.pos.y);
    if (!in_range_[idx]) return false;
    return is_detectable(e.extent_m, holes_[idx]);
  }

  const std::vector<char>& union_covered() const { return covered_; }
  const std::vector<double>& hole_sizes() const { return holes_; }

 private:
  const Grid* grid_;
  std::vector<char> in_range_;
  std::vector<char> covered_;
  std::vector<double> holes_;
};

inline DetectionStream detect(const ActivityTrace& trace, std::span<const CoverageMask> masks,
                              const Grid& grid) {
  const DetectionModel model(masks, grid);
  DetectionStream out;
  for (const ActivityEvent& e : trace.events) {
    if (model.detects(e)) {
      out.times.push_back(e.t_s);
      out.detected.push_back(e);
    }
  }
  return out;
}

struct SimMetrics {
  double comfort_level = 1.0;   // 1 - occupied time with supply off / occupied time
  double energy_wastage = 0.0;  // vacant time with supply on / vacant time
  double occupied_s = 0.0;
  double vacant_s = 0.0;
  double occupied_on_s = 0.0;
  double occupied_off_s = 0.0;
  double vacant_on_s = 0.0;
  double vacant_off_s = 0.0;
  std::size_t leave_events = 0;
  std::size_t correct_leaves = 0;  // episodes without a false-absence decision
  std::vector<double> absence_delays_s;  // per correctly decided leave
  std::vector<std::pair<double, double>> ta_cdf;  // (timeout, P(correct))
};

namespace detail {

/// Supply-off decisions run on a 1 s clock: the supply drops at the first
/// whole second at or after last_detection + timeout.
inline double off_instant(double last_detection, double timeout) {
  return std::ceil(last_detection + timeout - 1e-9);
}

struct Interval {
  double a, b;
};

/// Supply-on intervals induced by a detection stream under a timeout policy.
inline std::vector<Interval> supply_on_intervals(const std::vector<double>& det,
                                                 double timeout, double duration) {
  std::vector<Interval> on;
  std::size_t i = 0;
  while (i < det.size()) {
    const double start = det[i];
    double last = det[i];
    std::size_t j = i + 1;
    while (j < det.size() && det[j] < off_instant(last, timeout)) {
      last = det[j];
      ++j;
    }
    on.push_back({std::min(start, duration), std::min(off_instant(last, timeout), duration)});
    i = j;
  }
  return on;
}

inline double overlap(const Interval& x, double a, double b) {
  return std::max(0.0, std::min(x.b, b) - std::max(x.a, a));
}

}  // namespace detail

/// Core replay once detections are known; exposed so sweeps can reuse the
/// detection pass across many timeout values.
inline SimMetrics simulate_detections(const std::vector<double>& detections,
                                      const ActivityTrace& trace,
                                      const TimeoutPolicy& policy) {
  policy.validate();
  const double duration = trace.duration_s;
  const double timeout = policy.timeout_s;
  const std::vector<detail::Interval> on =
      detail::supply_on_intervals(detections, timeout, duration);

  SimMetrics m;
  // Occupancy episodes from the trace truth.
  bool occupied = false;
  double episode_start = 0.0;
  std::vector<detail::Interval> occupied_intervals;
  std::vector<std::pair<double, double>> episodes;  // (enter, leave) with leave event
  for (const ActivityEvent& e : trace.events) {
    if (e.kind == EventKind::enter) {
      occupied = true;
      episode_start = e.t_s;
    } else if (e.kind == EventKind::leave) {
      occupied_intervals.push_back({episode_start, e.t_s});
      episodes.push_back({episode_start, e.t_s});
      occupied = false;
    }
  }
  if (occupied) occupied_intervals.push_back({episode_start, duration});

  for (const detail::Interval& occ : occupied_intervals) m.occupied_s += occ.b - occ.a;
  m.vacant_s = duration - m.occupied_s;

  double occupied_on = 0.0;
  double vacant_on = 0.0;
  for (const detail::Interval& seg : on) {
    double occ_overlap = 0.0;
    for (const detail::Interval& occ : occupied_intervals)
      occ_overlap += detail::overlap(seg, occ.a, occ.b);
    occupied_on += occ_overlap;
    vacant_on += (seg.b - seg.a) - occ_overlap;
  }
  m.occupied_on_s = occupied_on;
  m.occupied_off_s = m.occupied_s - occupied_on;
  m.vacant_on_s = vacant_on;
  m.vacant_off_s = m.vacant_s - vacant_on;
  m.comfort_level = m.occupied_s > 0.0 ? occupied_on / m.occupied_s : 1.0;
  m.energy_wastage = m.vacant_s > 0.0 ? vacant_on / m.vacant_s : 0.0;

  // Leave-event decisions: an episode is correct when the supply never
  // dropped inside it (the enter detection switches it on at the boundary).
  m.leave_events = episodes.size();
  for (const auto& [enter_t, leave_t] : episodes) {
    double off_inside = leave_t - enter_t;
    for (const detail::Interval& seg : on) off_inside -= detail::overlap(seg, enter_t, leave_t);
    const bool correct = off_inside <= 1e-9;
    if (correct) {
      ++m.correct_leaves;
      m.absence_delays_s.push_back(detail::off_instant(leave_t, timeout) - leave_t);
    }
  }
  return m;
}

/// Replays one trace against the deployed masks and a timeout policy. Supply
/// turns on at any detection and off after `timeout` with no detections
/// (1 s decision granularity). A leave event is correctly decided when its
/// occupancy episode saw no false absence (supply never dropped while the
/// occupant was present).
inline SimMetrics simulate(const ActivityTrace& trace, std::span<const CoverageMask> masks,
                           const Grid& grid, const TimeoutPolicy& policy) {
  policy.validate();
  trace.validate();
  const DetectionStream det = detect(trace, masks, grid);
  return simulate_detections(det.times, trace, policy);
}

/// Pools several traces' metrics (time-weighted buckets, pooled leave counts).
struct PooledMetrics {
  double comfort_level = 1.0;
  double energy_wastage = 0.0;
  double ta_fraction = 1.0;
  std::size_t leave_events = 0;
};

inline PooledMetrics pool_metrics(std::span<const SimMetrics> per_trace) {
  double occ = 0.0, occ_on = 0.0, vac = 0.0, vac_on = 0.0;
  std::size_t leaves = 0, correct = 0;
  for (const SimMetrics& m : per_trace) {
    occ += m.occupied_s;
    occ_on += m.occupied_on_s;
    vac += m.vacant_s;
    vac_on += m.vacant_on_s;
    leaves += m.leave_events;
    correct += m.correct_leaves;
  }
  PooledMetrics p;
  p.comfort_level = occ > 0.0 ? occ_on / occ : 1.0;
  p.energy_wastage = vac > 0.0 ? vac_on / vac : 0.0;
  p.ta_fraction = leaves > 0 ? static_cast<double>(correct) / leaves : 1.0;
  p.leave_events = leaves;
  return p;
}

/// True-absence CDF over a trace set: for each timeout, the fraction of leave
/// events whose episode was decided without a false absence. Non-decreasing.
inline std::vector<std::pair<double, double>> ta_cdf(
    std::span<const ActivityTrace> traces, std::span<const CoverageMask> masks,
    const Grid& grid, const std::vector<double>& timeout_grid) {
  if (traces.empty()) throw std::invalid_argument("ta_cdf: need at least one trace");
  std::vector<std::vector<double>> det;
  det.reserve(traces.size());
  const DetectionModel model(masks, grid);
  for (const ActivityTrace& tr : traces) {
    std::vector<double> times;
    for (const ActivityEvent& e : tr.events)
      if (model.detects(e)) times.push_back(e.t_s);
    det.push_back(std::move(times));
  }

  std::vector<std::pair<double, double>> cdf;
  for (double timeout : timeout_grid) {
    std::size_t leaves = 0, correct = 0;
    if (timeout <= 0.0) {
      // Decisions cannot be instantaneous: every episode sees a false absence.
      cdf.push_back({timeout, 0.0});
      continue;
    }
    TimeoutPolicy policy{timeout};
    for (std::size_t i = 0; i < traces.size(); ++i) {
      const SimMetrics m = simulate_detections(det[i], traces[i], policy);
      leaves += m.leave_events;
      correct += m.correct_leaves;
    }
    cdf.push_back({timeout, leaves > 0 ? static_cast<double>(correct) / leaves : 1.0});
  }
  return cdf;
}

/// One frontier point per timeout: pooled comfort, wastage and TA fraction.
struct FrontierPoint {
  double timeout_s = 0.0;
  double comfort_level = 0.0;
  double energy_wastage = 0.0;
  double ta_fraction = 0.0;
};

inline std::vector<FrontierPoint> wastage_comfort_frontier(
    std::span<const ActivityTrace> traces, std::span<const CoverageMask> masks,
    const Grid& grid, const std::vector<double>& timeout_grid) {
  if (traces.empty())
    throw std::invalid_argument("wastage_comfort_frontier: need at least one trace");
  std::vector<std::vector<double>> det;
  det.reserve(traces.size());
  const DetectionModel model(masks, grid);
  for (const ActivityTrace& tr : traces) {
    std::vector<double> times;
    for (const ActivityEvent& e : tr.events)
      if (model.detects(e)) times.push_back(e.t_s);
    det.push_back(std::move(times));
  }

  std::vector<FrontierPoint> frontier;
  for (double timeout : timeout_grid) {
    TimeoutPolicy policy{timeout};
    std::vector<SimMetrics> per_trace;
    per_trace.reserve(traces.size());
    for (std::size_t i = 0; i < traces.size(); ++i)
      per_trace.push_back(simulate_detections(det[i], traces[i], policy));
    const PooledMetrics p = pool_metrics(per_trace);
    frontier.push_back({timeout, p.comfort_level, p.energy_wastage, p.ta_fraction});
  }
  return frontier;
}

/// Smallest timeout on the curve reaching a TA target, linearly interpolated
/// between neighbouring grid points; NaN when never reached.
inline double timeout_for_ta(const std::vector<std::pair<double, double>>& cdf,
                             double target) {
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    if (cdf[i].second >= target) {
      if (i == 0 || cdf[i - 1].second >= target) return cdf[i].first;
      const auto [t0, p0] = cdf[i - 1];
      const auto [t1, p1] = cdf[i];
      if (p1 <= p0) return t1;
      return t0 + (target - p0) / (p1 - p0) * (t1 - t0);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace pirplan

#endif  // PIRPLAN_SIM_HPP
