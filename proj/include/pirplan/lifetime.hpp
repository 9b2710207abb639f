#ifndef PIRPLAN_LIFETIME_HPP
#define PIRPLAN_LIFETIME_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pirplan/errors.hpp"

namespace pirplan {

inline constexpr double kSecondsPerDay = 86400.0;
inline constexpr double kHoursPerYear = 24.0 * 365.0;

/// LPL-style energy accounting inputs for one sensor-mote / switch-mote pair.
/// The wake-up period T is the bargained quantity: the sensor pays an expected
/// T/2 of preamble per report, the switch pays one CCA channel sample every T
/// while the office is occupied.
struct MoteEnergyParams {
  double battery_capacity_mah = 2600.0;
  double voltage_v = 3.0;
  double current_sleep_ma = 0.005;
  double current_rx_ma = 10.0;
  double current_tx_ma = 8.0;
  double current_pir_ma = 0.002;
  double cca_duration_s = 0.003;
  double event_rate_per_day = 100.0;  // occupancy-state changes + light reports
  double payload_tx_time_s = 0.002;
  double occupied_fraction = 0.375;
  double t_min_s = 0.010;
  double t_max_s = 10.0;

  void validate() const {
    if (!(battery_capacity_mah > 0.0)) throw std::invalid_argument("energy: capacity must be > 0");
    if (!(voltage_v > 0.0)) throw std::invalid_argument("energy: voltage must be > 0");
    if (current_sleep_ma < 0.0 || current_rx_ma < 0.0 || current_tx_ma < 0.0 ||
        current_pir_ma < 0.0)
      throw std::invalid_argument("energy: currents must be >= 0");
    if (current_sleep_ma > current_rx_ma)
      throw std::invalid_argument("energy: sleep current must not exceed rx current");
    if (cca_duration_s < 0.0 || payload_tx_time_s < 0.0 || event_rate_per_day < 0.0)
      throw std::invalid_argument("energy: durations and rates must be >= 0");
    if (occupied_fraction < 0.0 || occupied_fraction > 1.0)
      throw std::invalid_argument("energy: occupied_fraction must be in [0,1]");
    if (!(t_min_s > 0.0) || !(t_max_s > t_min_s))
      throw std::invalid_argument("energy: need 0 < t_min < t_max");
  }

  void check_period(double t_s) const {
    if (t_s < t_min_s - 1e-12 || t_s > t_max_s + 1e-12)
      throw std::invalid_argument("wake-up period outside feasible interval");
  }
};

namespace detail {
inline double years_from_average_current(const MoteEnergyParams& p, double avg_ma) {
  return p.battery_capacity_mah / avg_ma / kHoursPerYear;
}
}  // namespace detail

/// Sensor-mote average current: baseline sleep + PIR, plus per-event transmit
/// cost of an expected T/2 preamble and the payload. Strictly decreasing
/// lifetime in T whenever events occur.
inline double lifetime_sensor_years(double t_s, const MoteEnergyParams& p) {
  p.validate();
  p.check_period(t_s);
  const double tx_seconds_per_day =
      p.event_rate_per_day * (t_s / 2.0 + p.payload_tx_time_s);
  const double avg_ma = p.current_sleep_ma + p.current_pir_ma +
                        tx_seconds_per_day * p.current_tx_ma / kSecondsPerDay;
  return detail::years_from_average_current(p, avg_ma);
}

/// Switch-mote average current: baseline plus one CCA sample per wake-up while
/// occupied, plus per-event receive cost (payload + one channel sample).
/// Strictly increasing lifetime in T whenever the office is ever occupied.
inline double lifetime_switch_years(double t_s, const MoteEnergyParams& p) {
  p.validate();
  p.check_period(t_s);
  const double cca_ma = p.occupied_fraction * (p.cca_duration_s / t_s) * p.current_rx_ma;
  const double rx_seconds_per_day =
      p.event_rate_per_day * (p.payload_tx_time_s + p.cca_duration_s);
  const double avg_ma = p.current_sleep_ma + p.current_pir_ma + cca_ma +
                        rx_seconds_per_day * p.current_rx_ma / kSecondsPerDay;
  return detail::years_from_average_current(p, avg_ma);
}

/// Disagreement payoffs: each player is held at the opponent's unilateral
/// optimum. The sensor prefers short periods, the switch long ones, so the
/// sensor's threat point sits at t_max and the switch's at t_min.
inline std::pair<double, double> threat_points(const MoteEnergyParams& p) {
  return {lifetime_sensor_years(p.t_max_s, p), lifetime_switch_years(p.t_min_s, p)};
}

struct GameSolution {
  double wakeup_period_s = 0.0;
  double lifetime_sensor_years = 0.0;
  double lifetime_switch_years = 0.0;
  double threat_sensor_years = 0.0;
  double threat_switch_years = 0.0;
  double alpha = 1.0;
  double nash_product = 0.0;
};

namespace detail {

/// Maximizes alpha*log(u1-d1) + log(u2-d2) over [lo, hi]: a deterministic
/// coarse scan brackets the global maximum, golden-section refines it.
inline double maximize_weighted_log_product(const std::function<double(double)>& surplus1,
                                            const std::function<double(double)>& surplus2,
                                            double alpha, double lo, double hi,
                                            double tol_s) {
  const auto value = [&](double t) {
    const double s1 = surplus1(t);
    const double s2 = surplus2(t);
    if (s1 <= 0.0 || s2 <= 0.0) {
      // Individual rationality boundary: product is zero (or infeasible).
      if (s1 < -1e-12 || s2 < -1e-12) return -std::numeric_limits<double>::infinity();
      return -1e300;
    }
    return alpha * std::log(s1) + std::log(s2);
  };

  constexpr int kScan = 4097;
  int best_i = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScan; ++i) {
    const double t = lo + (hi - lo) * i / (kScan - 1);
    const double v = value(t);
    if (v > best_v) {
      best_v = v;
      best_i = i;
    }
  }
  if (!std::isfinite(best_v) || best_v <= -1e299) {
    // No interior point with positive surpluses; caller decides feasibility.
    return std::numeric_limits<double>::quiet_NaN();
  }

  double a = lo + (hi - lo) * std::max(0, best_i - 1) / (kScan - 1);
  double b = lo + (hi - lo) * std::min(kScan - 1, best_i + 1) / (kScan - 1);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = value(x1);
  double f2 = value(x2);
  while (b - a > tol_s) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = value(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = value(x1);
    }
  }
  return (a + b) / 2.0;
}

}  // namespace detail

/// Weighted Nash bargaining over the wake-up period: maximizes
/// (u_sensor - d_sensor)^alpha * (u_switch - d_switch) on [t_min, t_max].
/// The sensor lifetime is alpha >= 1 times more important than the switch's.
inline GameSolution nash_bargain(const MoteEnergyParams& p, double alpha) {
  p.validate();
  if (!(alpha >= 1.0)) throw std::invalid_argument("nash_bargain: alpha must be >= 1");
  const auto [d_sensor, d_switch] = threat_points(p);

  const auto s1 = [&](double t) { return lifetime_sensor_years(t, p) - d_sensor; };
  const auto s2 = [&](double t) { return lifetime_switch_years(t, p) - d_switch; };

  const double t_star = detail::maximize_weighted_log_product(s1, s2, alpha, p.t_min_s,
                                                              p.t_max_s, 1e-4);
  if (std::isnan(t_star)) {
    // Degenerate surplus everywhere: agreement exists only if both players are
    // at least at their threat points somewhere.
    for (double t : {p.t_min_s, (p.t_min_s + p.t_max_s) / 2.0, p.t_max_s}) {
      if (s1(t) >= -1e-12 && s2(t) >= -1e-12) {
        GameSolution flat;
        flat.wakeup_period_s = t;
        flat.lifetime_sensor_years = lifetime_sensor_years(t, p);
        flat.lifetime_switch_years = lifetime_switch_years(t, p);
        flat.threat_sensor_years = d_sensor;
        flat.threat_switch_years = d_switch;
        flat.alpha = alpha;
        flat.nash_product = 0.0;
        return flat;
      }
    }
    throw NoAgreementError(d_sensor, d_switch);
  }

  GameSolution sol;
  sol.wakeup_period_s = t_star;
  sol.lifetime_sensor_years = lifetime_sensor_years(t_star, p);
  sol.lifetime_switch_years = lifetime_switch_years(t_star, p);
  sol.threat_sensor_years = d_sensor;
  sol.threat_switch_years = d_switch;
  sol.alpha = alpha;
  sol.nash_product = std::pow(sol.lifetime_sensor_years - d_sensor, alpha) *
                     (sol.lifetime_switch_years - d_switch);
  return sol;
}

/// One bargaining solution per alpha. Under the monotone lifetime models the
/// sensor column is non-decreasing and the switch column non-increasing in
/// alpha.
inline std::vector<GameSolution> sweep_alpha(const MoteEnergyParams& p,
                                             const std::vector<double>& alphas) {
  std::vector<GameSolution> rows;
  rows.reserve(alphas.size());
  for (double a : alphas) rows.push_back(nash_bargain(p, a));
  return rows;
}

}  // namespace pirplan

#endif  // PIRPLAN_LIFETIME_HPP
