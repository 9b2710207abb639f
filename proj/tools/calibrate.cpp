// Calibration report for the shipped presets: prints every calibration-target
// statistic so preset changes can be checked at a glance.
#include <chrono>
#include <cstdio>
#include <vector>

#include "pirplan/milp.hpp"
#include "pirplan/scenario.hpp"

using namespace pirplan;

namespace {

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct ScenarioMasks {
  std::vector<CoverageMask> optimal3;
  std::vector<CoverageMask> optimal1;
  std::vector<CoverageMask> hole_unaware;
};

void report_sim(const Scenario& s, const ScenarioMasks& masks, int seeds) {
  const Grid grid = s.office_grid();
  const Rect office = s.office_rect();
  std::vector<ActivityTrace> traces;
  for (int i = 0; i < seeds; ++i)
    traces.push_back(generate_trace(s.occupant, office, s.sim.duration_s, s.sim.base_seed + i));

  const std::vector<double>& tg = s.sim.timeouts_s;
  struct Row {
    const char* name;
    const std::vector<CoverageMask>* masks;
    std::vector<FrontierPoint> frontier;
  };
  std::vector<Row> rows{{"optimal3", &masks.optimal3, {}},
                        {"optimal1", &masks.optimal1, {}},
                        {"hole-unaware", &masks.hole_unaware, {}}};
  for (Row& r : rows) {
    r.frontier = wastage_comfort_frontier(traces, *r.masks, grid, tg);
    std::vector<std::pair<double, double>> cdf;
    for (const FrontierPoint& fp : r.frontier) cdf.push_back({fp.timeout_s, fp.ta_fraction});
    const double t90 = timeout_for_ta(cdf, 0.9);
    double wast95 = -1.0, comf_at = -1.0, t95 = -1.0;
    for (const FrontierPoint& fp : r.frontier) {
      if (fp.comfort_level >= 0.95) {
        wast95 = fp.energy_wastage;
        comf_at = fp.comfort_level;
        t95 = fp.timeout_s;
        break;
      }
    }
    std::printf("  %-13s T90=%6.2f s   comfort>=.95 at T=%5.1f (comfort %.4f)  wastage %.4f\n",
                r.name, t90, t95, comf_at, wast95);
  }
  // Pointwise CDF ordering violations.
  int viol31 = 0, viol1h = 0;
  for (std::size_t i = 0; i < tg.size(); ++i) {
    if (rows[0].frontier[i].ta_fraction < rows[1].frontier[i].ta_fraction - 1e-12) ++viol31;
    if (rows[1].frontier[i].ta_fraction < rows[2].frontier[i].ta_fraction - 1e-12) ++viol1h;
  }
  std::printf("  CDF ordering violations: o3>=o1 %d, o1>=hu %d (of %zu timeouts)\n", viol31,
              viol1h, tg.size());
  // Wastage deltas at matched comfort >= 0.95.
  const auto wastage_at95 = [&](const Row& r) {
    for (const FrontierPoint& fp : r.frontier)
      if (fp.comfort_level >= 0.95) return fp.energy_wastage;
    return -1.0;
  };
  const double w3 = wastage_at95(rows[0]);
  const double w1 = wastage_at95(rows[1]);
  const double wh = wastage_at95(rows[2]);
  std::printf("  wastage deltas at comfort>=0.95: hu-o3 = %.2f pts, hu-o1 = %.2f pts\n",
              100.0 * (wh - w3), 100.0 * (wh - w1));
}

}  // namespace

int main(int argc, char** argv) {
  const int seeds = argc > 1 ? std::atoi(argv[1]) : 10;
  Scenario s = paper_office_scenario();
  const Grid grid = s.office_grid();
  std::printf("office grid: %d x %d = %zu points (span %.2f x %.2f)\n", grid.nx(), grid.ny(),
              grid.size(), grid.width_m, grid.depth_m);

  const CoverageMask ref = project_fov(s.fov, s.reference_mount, grid);
  std::printf("reference mount (%.2f, %.2f): covered %zu/%zu -> hole fraction %.4f\n",
              s.reference_mount.x, s.reference_mount.y, ref.covered_count(),
              ref.in_range_count(), hole_fraction(ref, grid));

  const std::vector<MountPose> mounts = s.candidate_mounts();
  std::printf("candidates: %zu mounts\n", mounts.size());
  CoverageProblem problem;
  problem.grid = grid;
  for (const MountPose& m : mounts) problem.candidates.push_back(project_fov(s.fov, m, grid));

  const Rect desk = s.desk_rect();
  std::printf("desk rect [%.2f,%.2f]x[%.2f,%.2f], %d desk points\n", desk.x0, desk.x1, desk.y0,
              desk.y1, [&] {
                int n = 0;
                for (std::size_t i = 0; i < grid.size(); ++i) {
                  const Point p = grid.point(i);
                  if (desk.contains(p.x, p.y)) ++n;
                }
                return n;
              }());

  const auto run_k = [&](int k) {
    problem.k = k;
    const double t0 = now_s();
    const PlacementSolution sol = solve_exact(problem);
    const double dt = now_s() - t0;
    std::printf("k=%d: obj=%.1f coverage=%.4f desk=%.4f optimal=%d nodes=%lld  (%.2f s) mounts:",
                k, sol.objective_value, sol.coverage_fraction,
                region_coverage(sol.covered, grid, desk), sol.optimal ? 1 : 0,
                static_cast<long long>(sol.nodes_explored), dt);
    for (int c : sol.chosen)
      std::printf(" (%.1f,%.1f,%.0f)", problem.candidates[c].source_mount.x,
                  problem.candidates[c].source_mount.y,
                  problem.candidates[c].source_mount.yaw_rad * 180.0 / std::numbers::pi);
    std::printf("\n");
    return sol;
  };

  problem.k = 1;
  const PlacementSolution hu = hole_unaware_placement(problem);
  std::printf("hole-unaware: mount (%.1f,%.1f) desk=%.4f office coverage=%.4f covered=%zu\n",
              problem.candidates[hu.chosen[0]].source_mount.x,
              problem.candidates[hu.chosen[0]].source_mount.y,
              region_coverage(hu.covered, grid, desk), hu.coverage_fraction,
              static_cast<std::size_t>(
                  std::count(hu.covered.begin(), hu.covered.end(), char(1))));

  const PlacementSolution k1 = run_k(1);
  const PlacementSolution k3 = run_k(3);

  ScenarioMasks masks;
  for (int c : k3.chosen) masks.optimal3.push_back(problem.candidates[c]);
  for (int c : k1.chosen) masks.optimal1.push_back(problem.candidates[c]);
  for (int c : hu.chosen) masks.hole_unaware.push_back(problem.candidates[c]);
  std::printf("sim over %d seeds x %.0f h:\n", seeds, s.sim.duration_s / 3600.0);
  report_sim(s, masks, seeds);

  std::printf("alpha sweep (energy preset %s):\n", s.energy_preset_name.c_str());
  for (double alpha = 1.0; alpha <= 5.0 + 1e-9; alpha += 0.5) {
    const GameSolution g = nash_bargain(s.energy, alpha);
    std::printf("  alpha=%.2f T*=%.4f s sensor=%.2f y switch=%.2f y\n", alpha,
                g.wakeup_period_s, g.lifetime_sensor_years, g.lifetime_switch_years);
  }
  std::printf("bullets: sensor@Tmin=%.2f y (>=5?), switch@Tmax=%.2f y (>=9?)\n",
              lifetime_sensor_years(s.energy.t_min_s, s.energy),
              lifetime_switch_years(s.energy.t_max_s, s.energy));

  const CommGraph g = build_weighted_graph(s.relay.sensors, s.relay.candidates, s.relay.sink,
                                           s.channel, s.max_link_distance_m);
  std::printf("relay graph: %zu nodes %zu edges\n", g.nodes.size(), g.edges.size());
  try {
    const RelaySolution exact = place_relays(g, s.relay.outage_cap, RelaySearch::exact);
    const RelaySolution greedy = place_relays(g, s.relay.outage_cap, RelaySearch::greedy);
    std::printf("relays: exact=%zu (LB %d) greedy=%zu tree cost %.4f\n",
                exact.chosen_candidates.size(), exact.relay_lower_bound,
                greedy.chosen_candidates.size(), exact.tree_cost);
    const TreeMetrics tm = evaluate_tree(g, exact, 528.0);
    for (const auto& ps : tm.sensors)
      std::printf("  sensor node %d: success %.4f, tx/packet %.3f\n", ps.sensor_node,
                  ps.path_success, ps.expected_tx_per_packet);
  } catch (const InfeasibleError& e) {
    std::printf("relay instance INFEASIBLE: %zu stranded sensors\n", e.worst_links.size());
  }
  return 0;
}
