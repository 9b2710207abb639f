#ifndef PIRPLAN_SCENARIO_HPP
#define PIRPLAN_SCENARIO_HPP

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pirplan/errors.hpp"
#include "pirplan/geometry.hpp"
#include "pirplan/lifetime.hpp"
#include "pirplan/presets.hpp"
#include "pirplan/relay.hpp"
#include "pirplan/sim.hpp"

namespace pirplan {

inline constexpr int kScenarioSchemaVersion = 1;

/// Everything one reproducible run needs: office geometry and desk weights,
/// the FoV pattern, candidate-mount spec, energy/channel/occupant parameters,
/// seeds, and the output location. Field names carry units.
struct Scenario {
  int schema_version = kScenarioSchemaVersion;

  struct Office {
    double width_m = 3.3;
    double depth_m = 2.4;
    double step_m = 0.3;
    std::vector<WeightRegion> desk_regions;  // room coordinates
  } office;

  FovPattern fov;
  std::string fov_preset_name;  // nonempty when loaded from a preset

  struct CandidateSpec {
    double pitch_m = 0.3;
    double interior_margin_m = 0.3;
    std::vector<double> yaw_deg{0.0, 15.0, 30.0};
  } candidates;

  MountPose reference_mount{1.5, 1.2, 0.0};

  MoteEnergyParams energy;
  std::string energy_preset_name;

  ChannelParams channel;
  double max_link_distance_m = 30.0;

  struct RelayInstance {
    std::vector<Point> sensors;
    std::vector<Point> candidates;
    Point sink{0.0, 0.0};
    double outage_cap = 0.1;
  } relay;

  OccupantModel occupant;
  std::string occupant_preset_name;

  struct SimSpec {
    int trace_count = 50;
    double duration_s = 86400.0;
    std::vector<double> timeouts_s;
    std::uint64_t base_seed = 424242;
  } sim;

  std::string output_dir = "out";

  Rect office_rect() const { return {0.0, 0.0, office.width_m, office.depth_m}; }

  /// Monitored lattice. Lattice lines that land exactly on the far walls are
  /// excluded: they are wall lines, not monitorable positions. For the 3.3 x
  /// 2.4 m office at 0.3 m this yields the 11 x 8 grid.
  Grid office_grid() const {
    const auto span = [](double length, double step) {
      int k = static_cast<int>(std::floor(length / step + kGeomTol));
      if (k * step >= length - kGeomTol * std::max(1.0, length)) --k;
      if (k < 1) k = 1;
      return k * step;
    };
    const double span_w = span(office.width_m, office.step_m);
    const double span_d = span(office.depth_m, office.step_m);
    WeightSpec weights;
    weights.base = 1.0;
    const Rect grid_rect{0.0, 0.0, span_w, span_d};
    for (const WeightRegion& region : office.desk_regions) {
      WeightRegion clipped = region;
      clipped.rect = region.rect.clipped_to(grid_rect);
      weights.regions.push_back(clipped);
    }
    return discretize_area(span_w, span_d, office.step_m, weights);
  }

  /// Desk rectangle used by the occupant model and the desk-coverage metrics
  /// (the first desk region, clipped to the monitored lattice).
  Rect desk_rect() const {
    if (office.desk_regions.empty())
      throw std::invalid_argument("scenario: office.desk_regions must not be empty");
    const Grid g = office_grid();
    return office.desk_regions.front().rect.clipped_to({0.0, 0.0, g.width_m, g.depth_m});
  }

  /// Ceiling-interior candidate mounts: a pitch_m lattice inset by
  /// interior_margin_m, crossed with the yaw list.
  std::vector<MountPose> candidate_mounts() const {
    const Grid g = office_grid();
    std::vector<MountPose> mounts;
    for (double yaw : candidates.yaw_deg) {
      const double yaw_rad = yaw * std::numbers::pi / 180.0;
      for (double y = candidates.interior_margin_m; y <= g.depth_m - candidates.interior_margin_m + kGeomTol;
           y += candidates.pitch_m) {
        for (double x = candidates.interior_margin_m;
             x <= g.width_m - candidates.interior_margin_m + kGeomTol; x += candidates.pitch_m) {
          mounts.push_back({x, y, yaw_rad});
        }
      }
    }
    return mounts;
  }
};

namespace detail {

[[noreturn]] inline void semantic_error(const std::string& path, const std::string& what) {
  throw std::invalid_argument("scenario: " + path + ": " + what);
}

inline double require_number(const nlohmann::json& j, const std::string& path,
                             const std::string& key) {
  if (!j.contains(key)) semantic_error(path + "." + key, "missing required field");
  if (!j[key].is_number()) semantic_error(path + "." + key, "expected a number");
  return j[key].get<double>();
}

inline double number_or(const nlohmann::json& j, const std::string& path,
                        const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) semantic_error(path + "." + key, "expected a number");
  return j[key].get<double>();
}

inline Point parse_point(const nlohmann::json& j, const std::string& path) {
  return {require_number(j, path, "x_m"), require_number(j, path, "y_m")};
}

}  // namespace detail

/// Parses and fully validates a scenario from JSON text. Parse errors carry
/// line/column; semantic errors carry the offending field path.
inline Scenario parse_scenario_text(const std::string& text,
                                    const std::string& origin = "<string>") {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw std::invalid_argument("scenario: parse error in " + origin + " at line " +
                                std::to_string(line) + ", column " + std::to_string(col) +
                                ": " + e.what());
  }

  using detail::number_or;
  using detail::require_number;
  using detail::semantic_error;

  Scenario s;
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
    semantic_error("schema_version", "missing or non-integer");
  s.schema_version = j["schema_version"].get<int>();
  if (s.schema_version != kScenarioSchemaVersion)
    semantic_error("schema_version",
                   "unknown version " + std::to_string(s.schema_version) + " (expected " +
                       std::to_string(kScenarioSchemaVersion) + ")");

  if (!j.contains("office") || !j["office"].is_object())
    semantic_error("office", "missing required object");
  const auto& jo = j["office"];
  s.office.width_m = require_number(jo, "office", "width_m");
  s.office.depth_m = require_number(jo, "office", "depth_m");
  s.office.step_m = require_number(jo, "office", "step_m");
  if (!(s.office.width_m > 0.0)) semantic_error("office.width_m", "must be > 0");
  if (!(s.office.depth_m > 0.0)) semantic_error("office.depth_m", "must be > 0");
  if (!(s.office.step_m > 0.0)) semantic_error("office.step_m", "must be > 0");
  if (s.office.step_m > std::min(s.office.width_m, s.office.depth_m))
    semantic_error("office.step_m", "must not exceed min(width_m, depth_m)");
  if (jo.contains("desk_regions")) {
    if (!jo["desk_regions"].is_array()) semantic_error("office.desk_regions", "expected array");
    int idx = 0;
    for (const auto& jr : jo["desk_regions"]) {
      const std::string path = "office.desk_regions[" + std::to_string(idx++) + "]";
      WeightRegion region;
      region.rect = {require_number(jr, path, "x0_m"), require_number(jr, path, "y0_m"),
                     require_number(jr, path, "x1_m"), require_number(jr, path, "y1_m")};
      region.weight = number_or(jr, path, "weight", 3.0);
      if (region.rect.x0 >= region.rect.x1 || region.rect.y0 >= region.rect.y1)
        semantic_error(path, "rectangle is empty or inverted");
      const Rect room{0.0, 0.0, s.office.width_m, s.office.depth_m};
      if (!room.contains(region.rect.x0, region.rect.y0) ||
          !room.contains(region.rect.x1, region.rect.y1))
        semantic_error(path, "region extends outside the office");
      if (region.weight < 0.0) semantic_error(path + ".weight", "must be >= 0");
      s.office.desk_regions.push_back(region);
    }
  }

  if (!j.contains("fov")) semantic_error("fov", "missing required object");
  const auto& jf = j["fov"];
  if (jf.contains("preset")) {
    s.fov_preset_name = jf["preset"].get<std::string>();
    try {
      s.fov = fov_preset(s.fov_preset_name);
    } catch (const std::invalid_argument&) {
      semantic_error("fov.preset", "unknown preset '" + s.fov_preset_name + "'");
    }
  } else {
    s.fov.mount_height_m = require_number(jf, "fov", "mount_height_m");
    s.fov.plane_height_m = require_number(jf, "fov", "plane_height_m");
    s.fov.max_range_m = require_number(jf, "fov", "max_range_m");
    if (!jf.contains("rings") || !jf["rings"].is_array())
      semantic_error("fov.rings", "missing array");
    int idx = 0;
    for (const auto& jring : jf["rings"]) {
      const std::string path = "fov.rings[" + std::to_string(idx++) + "]";
      BeamRing ring;
      ring.radius_m = require_number(jring, path, "radius_m");
      ring.beam_count = static_cast<int>(require_number(jring, path, "beam_count"));
      ring.footprint_side_m = require_number(jring, path, "footprint_side_m");
      ring.phase_deg = number_or(jring, path, "phase_deg", 0.0);
      s.fov.rings.push_back(ring);
    }
  }
  try {
    s.fov.validate();
  } catch (const std::invalid_argument& e) {
    semantic_error("fov", e.what());
  }

  if (j.contains("candidates")) {
    const auto& jc = j["candidates"];
    s.candidates.pitch_m = number_or(jc, "candidates", "pitch_m", s.candidates.pitch_m);
    s.candidates.interior_margin_m =
        number_or(jc, "candidates", "interior_margin_m", s.candidates.interior_margin_m);
    if (!(s.candidates.pitch_m > 0.0)) semantic_error("candidates.pitch_m", "must be > 0");
    if (jc.contains("yaw_deg")) {
      if (!jc["yaw_deg"].is_array()) semantic_error("candidates.yaw_deg", "expected array");
      s.candidates.yaw_deg.clear();
      for (const auto& y : jc["yaw_deg"]) s.candidates.yaw_deg.push_back(y.get<double>());
      if (s.candidates.yaw_deg.empty())
        semantic_error("candidates.yaw_deg", "must not be empty");
    }
  }

  if (j.contains("reference_mount")) {
    const auto& jm = j["reference_mount"];
    s.reference_mount.x = require_number(jm, "reference_mount", "x_m");
    s.reference_mount.y = require_number(jm, "reference_mount", "y_m");
    s.reference_mount.yaw_rad =
        number_or(jm, "reference_mount", "yaw_deg", 0.0) * std::numbers::pi / 180.0;
  }

  if (!j.contains("energy")) semantic_error("energy", "missing required object");
  const auto& je = j["energy"];
  if (je.contains("preset")) {
    s.energy_preset_name = je["preset"].get<std::string>();
    try {
      s.energy = energy_preset(s.energy_preset_name);
    } catch (const std::invalid_argument&) {
      semantic_error("energy.preset", "unknown preset '" + s.energy_preset_name + "'");
    }
  } else {
    s.energy.battery_capacity_mah = require_number(je, "energy", "battery_capacity_mah");
    s.energy.voltage_v = number_or(je, "energy", "voltage_v", 3.0);
    s.energy.current_sleep_ma = require_number(je, "energy", "current_sleep_ma");
    s.energy.current_rx_ma = require_number(je, "energy", "current_rx_ma");
    s.energy.current_tx_ma = require_number(je, "energy", "current_tx_ma");
    s.energy.current_pir_ma = require_number(je, "energy", "current_pir_ma");
    s.energy.cca_duration_s = require_number(je, "energy", "cca_duration_s");
    s.energy.event_rate_per_day = require_number(je, "energy", "event_rate_per_day");
    s.energy.payload_tx_time_s = require_number(je, "energy", "payload_tx_time_s");
    s.energy.occupied_fraction = require_number(je, "energy", "occupied_fraction");
    s.energy.t_min_s = number_or(je, "energy", "t_min_s", 0.010);
    s.energy.t_max_s = number_or(je, "energy", "t_max_s", 10.0);
  }
  try {
    s.energy.validate();
  } catch (const std::invalid_argument& e) {
    semantic_error("energy", e.what());
  }

  if (j.contains("channel")) {
    const auto& jch = j["channel"];
    s.channel.tx_power_dbm = number_or(jch, "channel", "tx_power_dbm", 0.0);
    s.channel.noise_power_dbm = number_or(jch, "channel", "noise_power_dbm", -96.0);
    s.channel.path_loss_exponent = number_or(jch, "channel", "path_loss_exponent", 3.0);
    s.channel.reference_loss_db = number_or(jch, "channel", "reference_loss_db", 40.0);
    s.channel.sinr_threshold_db = number_or(jch, "channel", "sinr_threshold_db", 10.0);
    s.max_link_distance_m = number_or(jch, "channel", "max_link_distance_m", 30.0);
    if (jch.contains("interferers")) {
      int idx = 0;
      for (const auto& ji : jch["interferers"]) {
        const std::string path = "channel.interferers[" + std::to_string(idx++) + "]";
        ChannelParams::Interferer intf;
        intf.position = detail::parse_point(ji, path);
        intf.power_dbm = require_number(ji, path, "power_dbm");
        intf.activity = number_or(ji, path, "activity", 1.0);
        s.channel.interference_sources.push_back(intf);
      }
    }
    try {
      s.channel.validate();
    } catch (const std::invalid_argument& e) {
      semantic_error("channel", e.what());
    }
  }

  if (j.contains("relay")) {
    const auto& jr = j["relay"];
    if (jr.contains("sensors")) {
      int idx = 0;
      for (const auto& jp : jr["sensors"])
        s.relay.sensors.push_back(
            detail::parse_point(jp, "relay.sensors[" + std::to_string(idx++) + "]"));
    }
    if (jr.contains("candidates")) {
      int idx = 0;
      for (const auto& jp : jr["candidates"])
        s.relay.candidates.push_back(
            detail::parse_point(jp, "relay.candidates[" + std::to_string(idx++) + "]"));
    }
    if (jr.contains("sink")) s.relay.sink = detail::parse_point(jr["sink"], "relay.sink");
    s.relay.outage_cap = number_or(jr, "relay", "outage_cap", 0.1);
    if (s.relay.outage_cap <= 0.0 || s.relay.outage_cap > 1.0)
      semantic_error("relay.outage_cap", "must be in (0, 1]");
  }

  if (!j.contains("occupant")) semantic_error("occupant", "missing required object");
  const auto& joc = j["occupant"];
  if (joc.contains("preset")) {
    s.occupant_preset_name = joc["preset"].get<std::string>();
    try {
      s.occupant = occupant_preset(s.occupant_preset_name);
    } catch (const std::invalid_argument&) {
      semantic_error("occupant.preset", "unknown preset '" + s.occupant_preset_name + "'");
    }
  } else {
    s.occupant.occupied_mean_s = require_number(joc, "occupant", "occupied_mean_s");
    s.occupant.vacant_mean_s = require_number(joc, "occupant", "vacant_mean_s");
    s.occupant.motion_rate_hz = require_number(joc, "occupant", "motion_rate_hz");
    s.occupant.p_hand = number_or(joc, "occupant", "p_hand", 0.7);
    s.occupant.p_arm = number_or(joc, "occupant", "p_arm", 0.2);
    s.occupant.hand_extent_min_m = number_or(joc, "occupant", "hand_extent_min_m", 0.1);
    s.occupant.hand_extent_max_m = number_or(joc, "occupant", "hand_extent_max_m", 0.6);
    s.occupant.arm_extent_min_m = number_or(joc, "occupant", "arm_extent_min_m", 0.6);
    s.occupant.arm_extent_max_m = number_or(joc, "occupant", "arm_extent_max_m", 1.0);
    s.occupant.body_extent_min_m = number_or(joc, "occupant", "body_extent_min_m", 1.0);
    s.occupant.body_extent_max_m = number_or(joc, "occupant", "body_extent_max_m", 2.0);
    s.occupant.hand_margin_m = number_or(joc, "occupant", "hand_margin_m", 0.0);
    s.occupant.arm_reach_m = number_or(joc, "occupant", "arm_reach_m", 0.6);
  }
  if (joc.contains("doorway"))
    s.occupant.doorway = detail::parse_point(joc["doorway"], "occupant.doorway");
  // The occupant's desk is the office desk region unless given explicitly.
  if (joc.contains("desk")) {
    const auto& jd = joc["desk"];
    s.occupant.desk = {require_number(jd, "occupant.desk", "x0_m"),
                       require_number(jd, "occupant.desk", "y0_m"),
                       require_number(jd, "occupant.desk", "x1_m"),
                       require_number(jd, "occupant.desk", "y1_m")};
  } else if (!s.office.desk_regions.empty()) {
    s.occupant.desk = s.office.desk_regions.front().rect;
  } else {
    semantic_error("occupant.desk", "missing and no office.desk_regions to inherit from");
  }
  const Rect room{0.0, 0.0, s.office.width_m, s.office.depth_m};
  if (!room.contains(s.occupant.doorway.x, s.occupant.doorway.y))
    semantic_error("occupant.doorway", "must lie inside the office");
  try {
    s.occupant.validate();
  } catch (const std::invalid_argument& e) {
    semantic_error("occupant", e.what());
  }

  if (j.contains("sim")) {
    const auto& js = j["sim"];
    s.sim.trace_count = static_cast<int>(number_or(js, "sim", "trace_count", 50));
    s.sim.duration_s = number_or(js, "sim", "duration_s", 86400.0);
    s.sim.base_seed = static_cast<std::uint64_t>(number_or(js, "sim", "base_seed", 424242));
    if (js.contains("timeouts_s")) {
      for (const auto& t : js["timeouts_s"]) s.sim.timeouts_s.push_back(t.get<double>());
    }
    if (s.sim.trace_count < 1) semantic_error("sim.trace_count", "must be >= 1");
    if (!(s.sim.duration_s > 0.0)) semantic_error("sim.duration_s", "must be > 0");
  }
  if (s.sim.timeouts_s.empty())
    for (double t = 2.0; t <= 120.0; t += 2.0) s.sim.timeouts_s.push_back(t);

  if (j.contains("output") && j["output"].contains("dir"))
    s.output_dir = j["output"]["dir"].get<std::string>();

  // Cross-checks touching several sections.
  if (!room.contains(s.reference_mount.x, s.reference_mount.y))
    semantic_error("reference_mount", "must lie inside the office");
  if (s.candidate_mounts().empty())
    semantic_error("candidates", "spec produces no candidate mounts");
  return s;
}

inline Scenario parse_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path);
}

/// Serializes a scenario back to JSON. parse(serialize(s)) == s up to preset
/// expansion (presets are written by name when they were loaded by name).
inline nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json j;
  j["schema_version"] = s.schema_version;
  j["office"]["width_m"] = s.office.width_m;
  j["office"]["depth_m"] = s.office.depth_m;
  j["office"]["step_m"] = s.office.step_m;
  for (const WeightRegion& r : s.office.desk_regions)
    j["office"]["desk_regions"].push_back({{"x0_m", r.rect.x0},
                                           {"y0_m", r.rect.y0},
                                           {"x1_m", r.rect.x1},
                                           {"y1_m", r.rect.y1},
                                           {"weight", r.weight}});
  if (!s.fov_preset_name.empty()) {
    j["fov"]["preset"] = s.fov_preset_name;
  } else {
    j["fov"]["mount_height_m"] = s.fov.mount_height_m;
    j["fov"]["plane_height_m"] = s.fov.plane_height_m;
    j["fov"]["max_range_m"] = s.fov.max_range_m;
    for (const BeamRing& r : s.fov.rings)
      j["fov"]["rings"].push_back({{"radius_m", r.radius_m},
                                   {"beam_count", r.beam_count},
                                   {"footprint_side_m", r.footprint_side_m},
                                   {"phase_deg", r.phase_deg}});
  }
  j["candidates"]["pitch_m"] = s.candidates.pitch_m;
  j["candidates"]["interior_margin_m"] = s.candidates.interior_margin_m;
  j["candidates"]["yaw_deg"] = s.candidates.yaw_deg;
  j["reference_mount"]["x_m"] = s.reference_mount.x;
  j["reference_mount"]["y_m"] = s.reference_mount.y;
  j["reference_mount"]["yaw_deg"] = s.reference_mount.yaw_rad * 180.0 / std::numbers::pi;
  if (!s.energy_preset_name.empty()) {
    j["energy"]["preset"] = s.energy_preset_name;
  } else {
    j["energy"]["battery_capacity_mah"] = s.energy.battery_capacity_mah;
    j["energy"]["voltage_v"] = s.energy.voltage_v;
    j["energy"]["current_sleep_ma"] = s.energy.current_sleep_ma;
    j["energy"]["current_rx_ma"] = s.energy.current_rx_ma;
    j["energy"]["current_tx_ma"] = s.energy.current_tx_ma;
    j["energy"]["current_pir_ma"] = s.energy.current_pir_ma;
    j["energy"]["cca_duration_s"] = s.energy.cca_duration_s;
    j["energy"]["event_rate_per_day"] = s.energy.event_rate_per_day;
    j["energy"]["payload_tx_time_s"] = s.energy.payload_tx_time_s;
    j["energy"]["occupied_fraction"] = s.energy.occupied_fraction;
    j["energy"]["t_min_s"] = s.energy.t_min_s;
    j["energy"]["t_max_s"] = s.energy.t_max_s;
  }
  j["channel"]["tx_power_dbm"] = s.channel.tx_power_dbm;
  j["channel"]["noise_power_dbm"] = s.channel.noise_power_dbm;
  j["channel"]["path_loss_exponent"] = s.channel.path_loss_exponent;
  j["channel"]["reference_loss_db"] = s.channel.reference_loss_db;
  j["channel"]["sinr_threshold_db"] = s.channel.sinr_threshold_db;
  j["channel"]["max_link_distance_m"] = s.max_link_distance_m;
  for (const auto& i : s.channel.interference_sources)
    j["channel"]["interferers"].push_back({{"x_m", i.position.x},
                                           {"y_m", i.position.y},
                                           {"power_dbm", i.power_dbm},
                                           {"activity", i.activity}});
  for (const Point& p : s.relay.sensors)
    j["relay"]["sensors"].push_back({{"x_m", p.x}, {"y_m", p.y}});
  for (const Point& p : s.relay.candidates)
    j["relay"]["candidates"].push_back({{"x_m", p.x}, {"y_m", p.y}});
  j["relay"]["sink"] = {{"x_m", s.relay.sink.x}, {"y_m", s.relay.sink.y}};
  j["relay"]["outage_cap"] = s.relay.outage_cap;
  if (!s.occupant_preset_name.empty()) {
    j["occupant"]["preset"] = s.occupant_preset_name;
  } else {
    j["occupant"]["occupied_mean_s"] = s.occupant.occupied_mean_s;
    j["occupant"]["vacant_mean_s"] = s.occupant.vacant_mean_s;
    j["occupant"]["motion_rate_hz"] = s.occupant.motion_rate_hz;
    j["occupant"]["p_hand"] = s.occupant.p_hand;
    j["occupant"]["p_arm"] = s.occupant.p_arm;
    j["occupant"]["hand_extent_min_m"] = s.occupant.hand_extent_min_m;
    j["occupant"]["hand_extent_max_m"] = s.occupant.hand_extent_max_m;
    j["occupant"]["arm_extent_min_m"] = s.occupant.arm_extent_min_m;
    j["occupant"]["arm_extent_max_m"] = s.occupant.arm_extent_max_m;
    j["occupant"]["body_extent_min_m"] = s.occupant.body_extent_min_m;
    j["occupant"]["body_extent_max_m"] = s.occupant.body_extent_max_m;
    j["occupant"]["hand_margin_m"] = s.occupant.hand_margin_m;
    j["occupant"]["arm_reach_m"] = s.occupant.arm_reach_m;
  }
  j["occupant"]["doorway"] = {{"x_m", s.occupant.doorway.x}, {"y_m", s.occupant.doorway.y}};
  j["occupant"]["desk"] = {{"x0_m", s.occupant.desk.x0},
                           {"y0_m", s.occupant.desk.y0},
                           {"x1_m", s.occupant.desk.x1},
                           {"y1_m", s.occupant.desk.y1}};
  j["sim"]["trace_count"] = s.sim.trace_count;
  j["sim"]["duration_s"] = s.sim.duration_s;
  j["sim"]["timeouts_s"] = s.sim.timeouts_s;
  j["sim"]["base_seed"] = s.sim.base_seed;
  j["output"]["dir"] = s.output_dir;
  return j;
}

/// The built-in office scenario mirroring the prototype deployment: a
/// 3.3 x 2.4 m single-occupant office on a 0.3 m lattice with a desk block
/// against the right wall.
inline Scenario paper_office_scenario() {
  Scenario s;
  s.office.width_m = 3.3;
  s.office.depth_m = 2.4;
  s.office.step_m = 0.3;
  // Corner desk against the right wall; heavy weight keeps the MPC optimum on
  // the desk instead of spraying beams across the open floor.
  s.office.desk_regions.push_back({Rect{2.35, 0.0, 3.25, 1.35}, 10.0});
  s.fov = fov_preset_ekmb_v1();
  s.fov_preset_name = "ekmb-v1";
  s.candidates.pitch_m = 0.3;
  s.candidates.interior_margin_m = 0.3;
  s.candidates.yaw_deg = {0.0, 15.0, 30.0};
  s.reference_mount = {1.5, 1.2, 0.0};
  s.energy = energy_preset_aa2600_v1();
  s.energy_preset_name = "aa2600-v1";
  s.channel = ChannelParams{};
  s.max_link_distance_m = 30.0;
  // Building-floor relay instance: offices along a 36 x 24 m wing, sink at
  // the wing entrance.
  s.relay.sensors = {{3.0, 20.0}, {9.0, 21.0}, {20.0, 22.0}, {30.0, 20.0}, {34.0, 12.0}};
  s.relay.candidates = {{4.0, 12.0},  {10.0, 14.0}, {16.0, 12.0}, {22.0, 14.0},
                        {28.0, 12.0}, {8.0, 6.0},   {16.0, 5.0},  {24.0, 6.0},
                        {30.0, 5.0},  {12.0, 20.0}};
  s.relay.sink = {1.0, 1.0};
  s.relay.outage_cap = 0.1;
  s.occupant = occupant_preset_office_v1();
  s.occupant_preset_name = "office-v1";
  s.occupant.desk = s.office.desk_regions.front().rect;
  s.sim.trace_count = 50;
  s.sim.duration_s = 86400.0;
  s.sim.base_seed = 424242;
  for (double t = 2.0; t <= 120.0; t += 2.0) s.sim.timeouts_s.push_back(t);
  return s;
}

}  // namespace pirplan

#endif  // PIRPLAN_SCENARIO_HPP
