// pirplan: plan and evaluate battery-operated PIR occupancy-sensing
// deployments. Subcommands: place, game, relay, simulate, reproduce.
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pirplan/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

/// Resolve --scenario: builtin name, literal path, or $PIRPLAN_PRESET_DIR/<name>.json.
pirplan::RunContext load_context(const std::string& scenario_arg, const std::string& out_dir) {
  using pirplan::RunContext;
  if (scenario_arg.empty() || scenario_arg == "paper-office")
    return RunContext::builtin(out_dir);
  namespace fs = std::filesystem;
  if (fs::exists(scenario_arg)) return RunContext::from_file(scenario_arg, out_dir);
  if (scenario_arg.find('/') == std::string::npos) {
    if (const char* dir = std::getenv("PIRPLAN_PRESET_DIR")) {
      const fs::path candidate = fs::path(dir) / (scenario_arg + ".json");
      if (fs::exists(candidate)) return RunContext::from_file(candidate.string(), out_dir);
    }
  }
  throw pirplan::IoError("scenario not found: " + scenario_arg);
}

void print_error(int code, const char* kind, const std::string& msg) {
  std::string clean = msg;
  for (char& c : clean)
    if (c == '\n' || c == '"') c = ' ';
  std::fprintf(stderr, "pirplan: error code=%d kind=%s msg=\"%s\"\n", code, kind, clean.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PIR occupancy-sensing deployment planner"};
  app.require_subcommand(1);
  app.fallthrough();  // --scenario/--out may follow the subcommand

  std::string scenario_arg;
  std::string out_dir;
  app.add_option("--scenario", scenario_arg,
                 "Scenario JSON path, or 'paper-office' for the built-in preset");
  app.add_option("--out", out_dir, "Output directory (default: scenario's output.dir)");

  auto* place = app.add_subcommand("place", "Solve the maximum-coverage PIR placement");
  int k = 1;
  bool baseline = false;
  double budget_s = 600.0;
  place->add_option("--k", k, "Number of PIRs to place")->check(CLI::PositiveNumber);
  place->add_flag("--baseline", baseline, "Hole-unaware single-PIR baseline instead");
  place->add_option("--time-budget", budget_s, "Solver budget in seconds");

  auto* game = app.add_subcommand("game", "Nash-bargained wake-up period sweep");
  std::vector<double> alphas;
  game->add_option("--alpha", alphas, "Sensor-lifetime weights (each >= 1)")->expected(-1);

  auto* relay = app.add_subcommand("relay", "Relay placement over the outage graph");
  bool exact = false, heuristic = false;
  relay->add_flag("--exact", exact, "Force exact subset search");
  relay->add_flag("--heuristic", heuristic, "Force the greedy heuristic");

  auto* simulate = app.add_subcommand("simulate", "Replay the trace suite against a placement");
  std::string placement_path;
  std::string label = "placement";
  std::vector<double> timeouts;
  std::uint64_t seed_override = 0;
  bool seed_set = false;
  bool dump_traces = false;
  simulate->add_option("--placement", placement_path, "Placement JSON from `place`")
      ->required();
  simulate->add_option("--label", label, "Label used in output filenames");
  simulate->add_option("--timeouts", timeouts, "Timeout grid in seconds")->expected(-1);
  simulate->add_option_function<std::uint64_t>(
      "--seed", [&](const std::uint64_t& v) { seed_override = v; seed_set = true; },
      "Base seed override");
  simulate->add_flag("--dump-traces", dump_traces, "Also write each trace as CSV");

  auto* reproduce =
      app.add_subcommand("reproduce", "Full calibrated pipeline with all result tables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    pirplan::RunContext ctx = load_context(scenario_arg, out_dir);

    if (place->parsed()) {
      const pirplan::PlacementSolution sol =
          pirplan::pipeline::run_place(ctx, k, baseline, budget_s);
      std::printf("placed %zu PIR(s): objective %s, coverage %s, optimal %s\n",
                  sol.chosen.size(), pirplan::format_g9(sol.objective_value).c_str(),
                  pirplan::format_g9(sol.coverage_fraction).c_str(),
                  sol.optimal ? "yes" : "no");
    } else if (game->parsed()) {
      if (alphas.empty()) alphas = {1.0, 2.0, 3.0, 4.0, 5.0};
      for (double a : alphas)
        if (a < 1.0) throw std::invalid_argument("--alpha values must be >= 1");
      const auto rows = pirplan::pipeline::run_game(ctx, alphas);
      for (const pirplan::GameSolution& g : rows)
        std::printf("alpha %s: T* %s s, sensor %s y, switch %s y\n",
                    pirplan::format_g9(g.alpha).c_str(),
                    pirplan::format_g9(g.wakeup_period_s).c_str(),
                    pirplan::format_g9(g.lifetime_sensor_years).c_str(),
                    pirplan::format_g9(g.lifetime_switch_years).c_str());
    } else if (relay->parsed()) {
      if (exact && heuristic)
        throw std::invalid_argument("--exact and --heuristic are mutually exclusive");
      const auto mode = exact       ? pirplan::RelaySearch::exact
                        : heuristic ? pirplan::RelaySearch::greedy
                                    : pirplan::RelaySearch::automatic;
      const pirplan::RelaySolution sol = pirplan::pipeline::run_relay(ctx, mode);
      std::printf("relays: %zu (lower bound %d, %s), tree cost %s\n",
                  sol.chosen_candidates.size(), sol.relay_lower_bound,
                  sol.optimal ? "optimal" : "heuristic",
                  pirplan::format_g9(sol.tree_cost).c_str());
    } else if (simulate->parsed()) {
      if (!timeouts.empty()) ctx.scenario.sim.timeouts_s = timeouts;
      if (seed_set) ctx.scenario.sim.base_seed = seed_override;
      const auto masks =
          pirplan::pipeline::masks_from_placement_file(ctx.scenario, placement_path);
      if (dump_traces) {
        for (const auto& trace : pirplan::pipeline::scenario_traces(ctx.scenario))
          pirplan::atomic_write_file(
              ctx.out_dir / ("trace_" + std::to_string(trace.seed) + ".csv"),
              pirplan::pipeline::trace_csv(trace, ctx.scenario_hash));
      }
      const auto frontier = pirplan::pipeline::run_simulate(ctx, masks, label);
      std::vector<std::pair<double, double>> curve;
      for (const auto& fp : frontier) curve.push_back({fp.timeout_s, fp.ta_fraction});
      std::printf("simulated %d traces; 90%% TA timeout %s s\n", ctx.scenario.sim.trace_count,
                  pirplan::format_g9(pirplan::timeout_for_ta(curve, 0.9)).c_str());
    } else if (reproduce->parsed()) {
      const auto summary = pirplan::pipeline::run_reproduce(ctx);
      std::printf("hole fraction %s\n", pirplan::format_g9(summary.hole_fraction).c_str());
      std::printf("desk coverage: optimal1 %s, optimal3 %s, hole-unaware %s\n",
                  pirplan::format_g9(summary.desk_coverage_k1).c_str(),
                  pirplan::format_g9(summary.desk_coverage_k3).c_str(),
                  pirplan::format_g9(summary.desk_coverage_baseline).c_str());
      std::printf("90%% TA timeouts: optimal3 %s s, optimal1 %s s, hole-unaware %s s\n",
                  pirplan::format_g9(summary.t90_optimal3).c_str(),
                  pirplan::format_g9(summary.t90_optimal1).c_str(),
                  pirplan::format_g9(summary.t90_baseline).c_str());
      std::printf("wastage deltas at comfort>=0.95: %s and %s points\n",
                  pirplan::format_g9(summary.wastage_delta_o3_pts).c_str(),
                  pirplan::format_g9(summary.wastage_delta_o1_pts).c_str());
      std::printf("bargain: alpha %s -> sensor %s y, switch %s y\n",
                  pirplan::format_g9(summary.headline_game.alpha).c_str(),
                  pirplan::format_g9(summary.headline_game.lifetime_sensor_years).c_str(),
                  pirplan::format_g9(summary.headline_game.lifetime_switch_years).c_str());
    }
    return kExitOk;
  } catch (const pirplan::NoAgreementError& e) {
    print_error(kExitInfeasible, "no-agreement", e.what());
    return kExitInfeasible;
  } catch (const pirplan::InfeasibleError& e) {
    std::string msg = e.what();
    for (const auto& wl : e.worst_links)
      msg += "; sensor " + std::to_string(wl.sensor_index) +
             " best bottleneck outage " + pirplan::format_g9(wl.outage);
    print_error(kExitInfeasible, "infeasible", msg);
    return kExitInfeasible;
  } catch (const pirplan::IoError& e) {
    print_error(kExitIo, "io", e.what());
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    print_error(kExitIo, "io", e.what());
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    print_error(kExitUsage, "usage", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    print_error(1, "internal", e.what());
    return 1;
  }
}
