#ifndef PIRPLAN_PRESETS_HPP
#define PIRPLAN_PRESETS_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include "pirplan/geometry.hpp"
#include "pirplan/lifetime.hpp"
#include "pirplan/sim.hpp"

namespace pirplan {

/// Parametric stand-in for a ceiling EKMB-class lens: an inner block of beams
/// around the nadir plus an axial cross, leaving ring-shaped sensing holes
/// that grow toward the range edge. Calibrated so that a centrally mounted
/// unit leaves ~87% of the reference office grid uncovered at desk height.
inline FovPattern fov_preset_ekmb_v1() {
  // Designed in work-plane units and divided by the projection scale, so the
  // beam landings line up with a 0.3 m analysis lattice at desk height: a
  // dense 3x3 block around the nadir and four sparse far beams on the
  // diagonals, with nothing in between (the >1 m holes of the real lens).
  FovPattern p;
  p.mount_height_m = 3.0;
  p.plane_height_m = 0.75;  // plane scale 0.75
  p.max_range_m = 5.0;
  const double s = p.plane_scale();
  const double side = 0.35;
  p.rings.push_back({0.0, 1, side, 0.0});                                  // nadir beam
  p.rings.push_back({0.3 / s, 4, side, 0.0});                              // inner axial
  p.rings.push_back({0.3 * std::numbers::sqrt2 / s, 4, side, 45.0});       // inner diagonal
  p.rings.push_back({1.2 * std::numbers::sqrt2 / s, 4, side, 45.0});       // far diagonal
  return p;
}

inline FovPattern fov_preset(const std::string& name) {
  if (name == "ekmb-v1") return fov_preset_ekmb_v1();
  throw std::invalid_argument("unknown fov preset: " + name);
}

/// 2xAA-class battery with nRF51-class radio currents; event rate covers
/// occupancy flips plus periodic light reports.
inline MoteEnergyParams energy_preset_aa2600_v1() {
  MoteEnergyParams p;
  p.battery_capacity_mah = 2600.0;
  p.voltage_v = 3.0;
  p.current_sleep_ma = 0.005;
  p.current_rx_ma = 10.0;
  p.current_tx_ma = 8.0;
  p.current_pir_ma = 0.002;
  p.cca_duration_s = 0.003;
  p.event_rate_per_day = 528.0;
  p.payload_tx_time_s = 0.002;
  p.occupied_fraction = 0.375;
  p.t_min_s = 0.010;
  p.t_max_s = 10.0;
  return p;
}

inline MoteEnergyParams energy_preset(const std::string& name) {
  if (name == "aa2600-v1") return energy_preset_aa2600_v1();
  throw std::invalid_argument("unknown energy preset: " + name);
}

/// Single-occupant office activity, calibrated against the evaluation's
/// timeout and wastage anchors: dense micro-motions while working, short
/// step-out vacancies, most motion mass on the desk.
inline OccupantModel occupant_preset_office_v1() {
  OccupantModel m;
  m.occupied_mean_s = 2700.0;
  m.vacant_mean_s = 215.0;
  m.motion_rate_hz = 0.42;
  m.p_hand = 0.85;
  m.p_arm = 0.08;
  m.hand_extent_min_m = 0.1;
  m.hand_extent_max_m = 0.6;
  m.arm_extent_min_m = 0.6;
  m.arm_extent_max_m = 1.0;
  m.body_extent_min_m = 1.0;
  m.body_extent_max_m = 2.0;
  m.hand_margin_m = 0.3;  // hands roam the reach zone around the desk
  m.arm_reach_m = 1.0;
  m.doorway = {0.15, 2.25};
  m.doorway_extent_m = 1.2;
  // desk is wired from the scenario's office desk region on load
  return m;
}

inline OccupantModel occupant_preset(const std::string& name) {
  if (name == "office-v1") return occupant_preset_office_v1();
  throw std::invalid_argument("unknown occupant preset: " + name);
}

}  // namespace pirplan

#endif  // PIRPLAN_PRESETS_HPP
