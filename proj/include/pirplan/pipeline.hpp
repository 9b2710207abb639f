#ifndef PIRPLAN_PIPELINE_HPP
#define PIRPLAN_PIPELINE_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "pirplan/io.hpp"
#include "pirplan/milp.hpp"
#include "pirplan/relay.hpp"
#include "pirplan/scenario.hpp"
#include "pirplan/sim.hpp"

namespace pirplan {

/// A loaded scenario plus the provenance hash stamped into every output.
struct RunContext {
  Scenario scenario;
  std::string scenario_hash;
  std::filesystem::path out_dir;

  static RunContext from_file(const std::string& path, const std::string& out_override) {
    const std::string text = read_file(path);
    RunContext ctx;
    ctx.scenario = parse_scenario_text(text, path);
    ctx.scenario_hash = fnv1a64_hex(text);
    ctx.out_dir = out_override.empty() ? ctx.scenario.output_dir : out_override;
    return ctx;
  }

  static RunContext builtin(const std::string& out_override) {
    RunContext ctx;
    ctx.scenario = paper_office_scenario();
    ctx.scenario_hash = fnv1a64_hex(scenario_to_json(ctx.scenario).dump());
    ctx.out_dir = out_override.empty() ? ctx.scenario.output_dir : out_override;
    return ctx;
  }
};

namespace pipeline {

/// Candidate masks for the scenario's mount lattice, in candidate order.
inline CoverageProblem coverage_problem(const Scenario& s, int k) {
  CoverageProblem problem;
  problem.grid = s.office_grid();
  for (const MountPose& m : s.candidate_mounts())
    problem.candidates.push_back(project_fov(s.fov, m, problem.grid));
  problem.k = k;
  return problem;
}

inline nlohmann::json placement_json(const RunContext& ctx, const PlacementSolution& sol,
                                     const Grid& grid, const std::string& label) {
  nlohmann::json j;
  j["scenario_hash"] = ctx.scenario_hash;
  j["label"] = label;
  j["optimal"] = sol.optimal;
  j["objective_value"] = sol.objective_value;
  j["coverage_fraction"] = sol.coverage_fraction;
  j["desk_coverage"] = region_coverage(sol.covered, grid, ctx.scenario.desk_rect());
  for (std::size_t i = 0; i < sol.chosen.size(); ++i) {
    j["mounts"].push_back({{"candidate", sol.chosen[i]},
                           {"x_m", sol.mounts[i].x},
                           {"y_m", sol.mounts[i].y},
                           {"yaw_deg", sol.mounts[i].yaw_rad * 180.0 / std::numbers::pi}});
  }
  return j;
}

inline std::string coverage_csv(const RunContext& ctx, const PlacementSolution& sol,
                                const Grid& grid) {
  CsvBuilder csv;
  csv.comment("scenario_hash=" + ctx.scenario_hash);
  csv.header({"x_m", "y_m", "weight", "covered"});
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const Point pt = grid.point(p);
    csv.row({format_g9(pt.x), format_g9(pt.y), format_g9(grid.weights[p]),
             sol.covered[p] ? "1" : "0"});
  }
  return csv.str();
}

/// `place`: exact MPC solve (or the hole-unaware baseline), written as a
/// placement JSON plus a per-point coverage CSV.
inline PlacementSolution run_place(const RunContext& ctx, int k, bool baseline,
                                   double time_budget_s = 1e18) {
  CoverageProblem problem = coverage_problem(ctx.scenario, baseline ? 1 : k);
  const PlacementSolution sol =
      baseline ? hole_unaware_placement(problem) : solve_exact(problem, time_budget_s);
  const std::string label = baseline ? "hole-unaware" : "optimal" + std::to_string(k);
  atomic_write_file(ctx.out_dir / ("placement_" + label + ".json"),
                    placement_json(ctx, sol, problem.grid, label).dump(2) + "\n");
  atomic_write_file(ctx.out_dir / ("coverage_" + label + ".csv"),
                    coverage_csv(ctx, sol, problem.grid));
  return sol;
}

/// `game`: alpha sweep CSV (alpha, T*, both lifetimes, threat points, product).
inline std::vector<GameSolution> run_game(const RunContext& ctx,
                                          const std::vector<double>& alphas) {
  const std::vector<GameSolution> rows = sweep_alpha(ctx.scenario.energy, alphas);
  CsvBuilder csv;
  csv.comment("scenario_hash=" + ctx.scenario_hash);
  csv.header({"alpha", "wakeup_period_s", "lifetime_sensor_years", "lifetime_switch_years",
              "threat_sensor_years", "threat_switch_years", "nash_product"});
  for (const GameSolution& g : rows)
    csv.row({format_g9(g.alpha), format_g9(g.wakeup_period_s),
             format_g9(g.lifetime_sensor_years), format_g9(g.lifetime_switch_years),
             format_g9(g.threat_sensor_years), format_g9(g.threat_switch_years),
             format_g9(g.nash_product)});
  atomic_write_file(ctx.out_dir / "game_sweep.csv", csv.str());
  return rows;
}

/// `relay`: outage-weighted graph, relay placement, link/tree outputs.
inline RelaySolution run_relay(const RunContext& ctx, RelaySearch mode) {
  const Scenario& s = ctx.scenario;
  const CommGraph graph = build_weighted_graph(s.relay.sensors, s.relay.candidates,
                                               s.relay.sink, s.channel, s.max_link_distance_m);
  CsvBuilder links;
  links.comment("scenario_hash=" + ctx.scenario_hash);
  links.header({"node_a", "node_b", "distance_m", "outage", "weight"});
  for (const CommGraph::Edge& e : graph.edges)
    links.row({std::to_string(e.a), std::to_string(e.b), format_g9(e.distance),
               format_g9(e.outage), format_g9(e.weight)});
  atomic_write_file(ctx.out_dir / "link_outages.csv", links.str());

  const RelaySolution sol = place_relays(graph, s.relay.outage_cap, mode);
  nlohmann::json j;
  j["scenario_hash"] = ctx.scenario_hash;
  j["outage_cap"] = s.relay.outage_cap;
  j["optimal"] = sol.optimal;
  j["relay_lower_bound"] = sol.relay_lower_bound;
  j["tree_cost"] = sol.tree_cost;
  j["relays"] = nlohmann::json::array();
  for (int c : sol.chosen_candidates)
    j["relays"].push_back(
        {{"candidate", c}, {"x_m", s.relay.candidates[c].x}, {"y_m", s.relay.candidates[c].y}});
  j["tree_edges"] = nlohmann::json::array();
  for (const CommGraph::Edge& e : sol.tree_edges)
    j["tree_edges"].push_back({{"a", e.a}, {"b", e.b}, {"outage", e.outage}});
  const TreeMetrics tm = evaluate_tree(graph, sol, s.energy.event_rate_per_day);
  for (const TreeMetrics::PerSensor& ps : tm.sensors)
    j["sensors"].push_back({{"node", ps.sensor_node},
                            {"path_success", ps.path_success},
                            {"expected_tx_per_packet", ps.expected_tx_per_packet},
                            {"expected_tx_per_day", ps.expected_tx_per_day}});
  atomic_write_file(ctx.out_dir / "relay.json", j.dump(2) + "\n");
  return sol;
}

/// Masks for a placement loaded from a placement JSON file.
inline std::vector<CoverageMask> masks_from_placement_file(const Scenario& s,
                                                           const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("placement file " + path + ": " + e.what());
  }
  if (!j.contains("mounts") || !j["mounts"].is_array() || j["mounts"].empty())
    throw std::invalid_argument("placement file " + path + ": no mounts");
  const Grid grid = s.office_grid();
  std::vector<CoverageMask> masks;
  for (const auto& jm : j["mounts"]) {
    MountPose m;
    m.x = jm.at("x_m").get<double>();
    m.y = jm.at("y_m").get<double>();
    m.yaw_rad = jm.value("yaw_deg", 0.0) * std::numbers::pi / 180.0;
    masks.push_back(project_fov(s.fov, m, grid));
  }
  return masks;
}

inline std::vector<ActivityTrace> scenario_traces(const Scenario& s) {
  std::vector<ActivityTrace> traces;
  traces.reserve(static_cast<std::size_t>(s.sim.trace_count));
  for (int i = 0; i < s.sim.trace_count; ++i)
    traces.push_back(
        generate_trace(s.occupant, s.office_rect(), s.sim.duration_s, s.sim.base_seed + i));
  return traces;
}

/// One row per event: timestamp, kind, position, extent.
inline std::string trace_csv(const ActivityTrace& trace, const std::string& scenario_hash) {
  CsvBuilder csv;
  csv.comment("scenario_hash=" + scenario_hash);
  csv.comment("seed=" + std::to_string(trace.seed) +
              " duration_s=" + format_g9(trace.duration_s));
  csv.header({"timestamp_s", "kind", "x_m", "y_m", "extent_m"});
  for (const ActivityEvent& e : trace.events) {
    const char* kind = e.kind == EventKind::enter   ? "enter"
                       : e.kind == EventKind::leave ? "leave"
                                                    : "motion";
    csv.row({format_g9(e.t_s), kind, format_g9(e.pos.x), format_g9(e.pos.y),
             format_g9(e.extent_m)});
  }
  return csv.str();
}

inline std::string frontier_csv(const RunContext& ctx, const std::vector<FrontierPoint>& pts,
                                const std::string& label) {
  CsvBuilder csv;
  csv.comment("scenario_hash=" + ctx.scenario_hash);
  csv.comment("label=" + label + " traces=" + std::to_string(ctx.scenario.sim.trace_count) +
              " base_seed=" + std::to_string(ctx.scenario.sim.base_seed));
  csv.header({"timeout_s", "comfort_level", "energy_wastage", "ta_fraction"});
  for (const FrontierPoint& fp : pts)
    csv.row({format_g9(fp.timeout_s), format_g9(fp.comfort_level),
             format_g9(fp.energy_wastage), format_g9(fp.ta_fraction)});
  return csv.str();
}

/// `simulate`: replays the scenario's trace suite against one placement,
/// emitting the timeout-swept metrics/CDF table.
inline std::vector<FrontierPoint> run_simulate(const RunContext& ctx,
                                               const std::vector<CoverageMask>& masks,
                                               const std::string& label) {
  const Scenario& s = ctx.scenario;
  const Grid grid = s.office_grid();
  const std::vector<ActivityTrace> traces = scenario_traces(s);
  const std::vector<FrontierPoint> frontier =
      wastage_comfort_frontier(traces, masks, grid, s.sim.timeouts_s);
  atomic_write_file(ctx.out_dir / ("metrics_" + label + ".csv"),
                    frontier_csv(ctx, frontier, label));
  return frontier;
}

struct ReproduceSummary {
  double hole_fraction = 0.0;
  double desk_coverage_k1 = 0.0;
  double desk_coverage_k3 = 0.0;
  double desk_coverage_baseline = 0.0;
  double t90_optimal3 = 0.0;
  double t90_optimal1 = 0.0;
  double t90_baseline = 0.0;
  double wastage_delta_o3_pts = 0.0;
  double wastage_delta_o1_pts = 0.0;
  GameSolution headline_game;  // the sweep row with sensor > 9y closest to 2y switch
};

/// `reproduce`: the full calibrated pipeline, emitting every headline result
/// table. Deterministic: same scenario + seeds give byte-identical outputs.
inline ReproduceSummary run_reproduce(const RunContext& ctx) {
  const Scenario& s = ctx.scenario;
  const Grid grid = s.office_grid();
  ReproduceSummary summary;

  // Sensing-hole statistic for the reference mount.
  const CoverageMask ref = project_fov(s.fov, s.reference_mount, grid);
  summary.hole_fraction = hole_fraction(ref, grid);

  // Placements.
  const PlacementSolution k1 = run_place(ctx, 1, false);
  const PlacementSolution k3 = run_place(ctx, 3, false);
  const PlacementSolution baseline = run_place(ctx, 1, true);
  const Rect desk = s.desk_rect();
  summary.desk_coverage_k1 = region_coverage(k1.covered, grid, desk);
  summary.desk_coverage_k3 = region_coverage(k3.covered, grid, desk);
  summary.desk_coverage_baseline = region_coverage(baseline.covered, grid, desk);

  // Duty-cycle bargaining sweep.
  std::vector<double> alphas;
  for (double a = 1.0; a <= 5.0 + 1e-9; a += 0.5) alphas.push_back(a);
  const std::vector<GameSolution> sweep = run_game(ctx, alphas);
  double best_gap = 1e300;
  for (const GameSolution& g : sweep) {
    const double gap = std::abs(g.lifetime_switch_years - 2.0);
    if (g.lifetime_sensor_years > 9.0 && gap < best_gap) {
      best_gap = gap;
      summary.headline_game = g;
    }
  }

  // Relay planning.
  run_relay(ctx, RelaySearch::automatic);

  // Occupancy simulation for the three deployment scenarios.
  CoverageProblem problem = coverage_problem(s, 1);
  const auto masks_of = [&](const PlacementSolution& sol) {
    std::vector<CoverageMask> masks;
    for (int c : sol.chosen) masks.push_back(problem.candidates[c]);
    return masks;
  };
  const std::vector<ActivityTrace> traces = scenario_traces(s);
  struct Entry {
    std::string label;
    std::vector<FrontierPoint> frontier;
  };
  std::vector<Entry> entries{{"optimal3", {}}, {"optimal1", {}}, {"hole-unaware", {}}};
  entries[0].frontier = wastage_comfort_frontier(traces, masks_of(k3), grid, s.sim.timeouts_s);
  entries[1].frontier = wastage_comfort_frontier(traces, masks_of(k1), grid, s.sim.timeouts_s);
  entries[2].frontier =
      wastage_comfort_frontier(traces, masks_of(baseline), grid, s.sim.timeouts_s);
  for (const Entry& e : entries)
    atomic_write_file(ctx.out_dir / ("metrics_" + e.label + ".csv"),
                      frontier_csv(ctx, e.frontier, e.label));

  // Pooled TA-CDF table across the three deployments.
  CsvBuilder cdf;
  cdf.comment("scenario_hash=" + ctx.scenario_hash);
  cdf.header({"timeout_s", "ta_optimal3", "ta_optimal1", "ta_hole_unaware"});
  for (std::size_t i = 0; i < s.sim.timeouts_s.size(); ++i)
    cdf.row({format_g9(s.sim.timeouts_s[i]), format_g9(entries[0].frontier[i].ta_fraction),
             format_g9(entries[1].frontier[i].ta_fraction),
             format_g9(entries[2].frontier[i].ta_fraction)});
  atomic_write_file(ctx.out_dir / "ta_cdf.csv", cdf.str());

  const auto t90_of = [](const std::vector<FrontierPoint>& frontier) {
    std::vector<std::pair<double, double>> curve;
    for (const FrontierPoint& fp : frontier) curve.push_back({fp.timeout_s, fp.ta_fraction});
    return timeout_for_ta(curve, 0.9);
  };
  summary.t90_optimal3 = t90_of(entries[0].frontier);
  summary.t90_optimal1 = t90_of(entries[1].frontier);
  summary.t90_baseline = t90_of(entries[2].frontier);

  const auto wastage_at95 = [](const std::vector<FrontierPoint>& frontier) {
    for (const FrontierPoint& fp : frontier)
      if (fp.comfort_level >= 0.95) return fp.energy_wastage;
    return -1.0;
  };
  const double wh = wastage_at95(entries[2].frontier);
  summary.wastage_delta_o3_pts = 100.0 * (wh - wastage_at95(entries[0].frontier));
  summary.wastage_delta_o1_pts = 100.0 * (wh - wastage_at95(entries[1].frontier));

  nlohmann::json j;
  j["scenario_hash"] = ctx.scenario_hash;
  j["base_seed"] = s.sim.base_seed;
  j["trace_count"] = s.sim.trace_count;
  j["hole_fraction"] = summary.hole_fraction;
  j["desk_coverage"] = {{"optimal1", summary.desk_coverage_k1},
                        {"optimal3", summary.desk_coverage_k3},
                        {"hole_unaware", summary.desk_coverage_baseline}};
  j["t90_s"] = {{"optimal3", summary.t90_optimal3},
                {"optimal1", summary.t90_optimal1},
                {"hole_unaware", summary.t90_baseline}};
  j["wastage_delta_pts"] = {{"optimal3", summary.wastage_delta_o3_pts},
                            {"optimal1", summary.wastage_delta_o1_pts}};
  j["bargain_headline"] = {{"alpha", summary.headline_game.alpha},
                           {"wakeup_period_s", summary.headline_game.wakeup_period_s},
                           {"lifetime_sensor_years", summary.headline_game.lifetime_sensor_years},
                           {"lifetime_switch_years", summary.headline_game.lifetime_switch_years}};
  atomic_write_file(ctx.out_dir / "summary.json", j.dump(2) + "\n");
  return summary;
}

}  // namespace pipeline
}  // namespace pirplan

#endif  // PIRPLAN_PIPELINE_HPP
