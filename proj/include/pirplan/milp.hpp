#ifndef PIRPLAN_MILP_HPP
#define PIRPLAN_MILP_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pirplan/errors.hpp"
#include "pirplan/geometry.hpp"
#include "pirplan/lp.hpp"

namespace pirplan {

/// Maximum PIR Coverage instance: a weighted grid, candidate mounts with their
/// precomputed masks, and a cap k on the number of PIRs to place.
struct CoverageProblem {
  Grid grid;
  std::vector<CoverageMask> candidates;
  int k = 1;

  void validate() const {
    if (candidates.empty()) throw std::invalid_argument("mpc: candidates must be nonempty");
    if (k < 1 || k > static_cast<int>(candidates.size()))
      throw std::invalid_argument("mpc: k must be in [1, candidate count]");
    for (const CoverageMask& m : candidates)
      if (m.covered.size() != grid.size())
        throw std::invalid_argument("mpc: candidate mask size mismatch");
  }
};

/// Mixed-integer model. Maximization; rows over sparse coefficients.
/// build_mpc populates placement_vars (y_c) and coverage_vars (z_p) so the
/// solver can reconstruct a PlacementSolution from an assignment.
struct MilpModel {
  struct Variable {
    std::string name;
    double lower = 0.0;
    double upper = 1.0;
    bool integral = false;
    double objective = 0.0;
  };
  struct Constraint {
    std::vector<std::pair<int, double>> coeffs;
    lp::Relation rel = lp::Relation::less_eq;
    double rhs = 0.0;
  };

  std::vector<Variable> vars;
  std::vector<Constraint> rows;
  std::vector<int> placement_vars;  // y_c, in candidate order (empty for generic models)
  std::vector<int> coverage_vars;   // z_p, in grid-point order

  int num_binaries() const {
    int n = 0;
    for (const Variable& v : vars)
      if (v.integral) ++n;
    return n;
  }

  lp::Problem relaxation() const {
    lp::Problem p;
    p.objective.reserve(vars.size());
    for (const Variable& v : vars) {
      p.objective.push_back(v.objective);
      p.lower.push_back(v.lower);
      p.upper.push_back(v.upper);
    }
    p.rows.reserve(rows.size());
    for (const Constraint& c : rows) p.rows.push_back({c.coeffs, c.rel, c.rhs});
    return p;
  }
};

/// Builds the MPC model: binaries y_c (place candidate c) and z_p (point p
/// covered), objective sum(phi_p z_p), linking rows z_p <= sum of covering y_c,
/// and the cardinality row sum(y) <= k.
inline MilpModel build_mpc(const Grid& grid, const std::vector<CoverageMask>& candidates,
                           int k) {
  CoverageProblem problem{grid, candidates, k};
  problem.validate();
  for (double w : grid.weights)
    if (w < 0.0) throw std::invalid_argument("build_mpc: weights must be >= 0");

  MilpModel model;
  const int nc = static_cast<int>(candidates.size());
  const int np = static_cast<int>(grid.size());
  model.vars.reserve(static_cast<std::size_t>(nc + np));
  for (int c = 0; c < nc; ++c) {
    model.placement_vars.push_back(static_cast<int>(model.vars.size()));
    model.vars.push_back({"y" + std::to_string(c), 0.0, 1.0, true, 0.0});
  }
  for (int p = 0; p < np; ++p) {
    model.coverage_vars.push_back(static_cast<int>(model.vars.size()));
    model.vars.push_back({"z" + std::to_string(p), 0.0, 1.0, true, grid.weights[p]});
  }

  for (int p = 0; p < np; ++p) {
    MilpModel::Constraint link;
    link.coeffs.push_back({model.coverage_vars[p], 1.0});
    for (int c = 0; c < nc; ++c)
      if (candidates[c].covered[p]) link.coeffs.push_back({model.placement_vars[c], -1.0});
    link.rel = lp::Relation::less_eq;
    link.rhs = 0.0;
    model.rows.push_back(std::move(link));
  }
  MilpModel::Constraint card;
  for (int c = 0; c < nc; ++c) card.coeffs.push_back({model.placement_vars[c], 1.0});
  card.rel = lp::Relation::less_eq;
  card.rhs = static_cast<double>(k);
  model.rows.push_back(std::move(card));
  return model;
}

/// Rewrites every constraint as an equality with nonnegative slack variables,
/// adding big-M penalized artificial variables where a slack alone cannot
/// express the row. The transformed model has the same optimal objective.
///
/// The per-row M defaults to 1 + sum|a_ij| + |b_i|; a user-supplied M must be
/// strictly larger than every derived bound.
inline MilpModel big_m_standard_form(const MilpModel& model,
                                     std::optional<double> big_m = std::nullopt) {
  MilpModel out;
  out.vars = model.vars;
  out.placement_vars = model.placement_vars;
  out.coverage_vars = model.coverage_vars;

  double max_derived = 0.0;
  for (const MilpModel::Constraint& row : model.rows) {
    double derived = 1.0 + std::abs(row.rhs);
    for (const auto& [j, a] : row.coeffs) derived += std::abs(a);
    max_derived = std::max(max_derived, derived);
  }
  if (big_m && *big_m <= max_derived)
    throw std::invalid_argument("big_m_standard_form: big_M must exceed the derived bound " +
                                std::to_string(max_derived));

  for (const MilpModel::Constraint& row : model.rows) {
    MilpModel::Constraint eq;
    eq.coeffs = row.coeffs;
    eq.rel = lp::Relation::equal;
    eq.rhs = row.rhs;
    lp::Relation rel = row.rel;
    if (eq.rhs < 0.0) {  // normalize to b >= 0
      for (auto& [j, a] : eq.coeffs) a = -a;
      eq.rhs = -eq.rhs;
      if (rel == lp::Relation::less_eq)
        rel = lp::Relation::greater_eq;
      else if (rel == lp::Relation::greater_eq)
        rel = lp::Relation::less_eq;
    }
    double derived = 1.0 + std::abs(row.rhs);
    for (const auto& [j, a] : row.coeffs) derived += std::abs(a);
    const double m_row = big_m ? *big_m : derived;

    const std::string row_id = std::to_string(out.rows.size());
    const auto add_slack = [&](double coeff) {
      const int idx = static_cast<int>(out.vars.size());
      out.vars.push_back({"s" + row_id, 0.0, lp::kInf, false, 0.0});
      eq.coeffs.push_back({idx, coeff});
    };
    const auto add_artificial = [&]() {
      const int idx = static_cast<int>(out.vars.size());
      out.vars.push_back({"a" + row_id, 0.0, lp::kInf, false, -m_row});
      eq.coeffs.push_back({idx, 1.0});
    };
    if (rel == lp::Relation::less_eq) {
      add_slack(1.0);
    } else if (rel == lp::Relation::greater_eq) {
      add_slack(-1.0);
      add_artificial();
    } else {
      add_artificial();
    }
    out.rows.push_back(std::move(eq));
  }
  return out;
}

/// Chosen mounts and what they cover. objective_value is recomputed
/// combinatorially (never read off LP floats) so oracle comparisons are exact.
struct PlacementSolution {
  std::vector<int> chosen;  // candidate indices, ascending
  std::vector<MountPose> mounts;
  std::vector<char> covered;          // union over chosen masks
  double objective_value = 0.0;       // sum of weights over covered points
  double coverage_fraction = 0.0;     // objective / total weight
  bool optimal = false;
  std::int64_t nodes_explored = 0;
};

namespace detail {

/// Shared objective evaluation: identical summation order for solver and
/// oracle paths, so equal choices give bitwise-equal objectives.
inline PlacementSolution make_placement(const CoverageProblem& problem,
                                        std::vector<int> chosen) {
  std::sort(chosen.begin(), chosen.end());
  PlacementSolution sol;
  sol.covered.assign(problem.grid.size(), 0);
  for (int c : chosen) {
    sol.mounts.push_back(problem.candidates[c].source_mount);
    for (std::size_t p = 0; p < problem.grid.size(); ++p)
      sol.covered[p] |= problem.candidates[c].covered[p];
  }
  sol.chosen = std::move(chosen);
  double value = 0.0;
  for (std::size_t p = 0; p < problem.grid.size(); ++p)
    if (sol.covered[p]) value += problem.grid.weights[p];
  sol.objective_value = value;
  const double total = problem.grid.total_weight();
  sol.coverage_fraction = total > 0.0 ? value / total : 0.0;
  return sol;
}

struct MilpAssignment {
  bool feasible = false;
  double objective = 0.0;
  std::vector<double> x;
  bool optimal = false;
  std::int64_t nodes = 0;
};

/// Deterministic branch and bound over the model's integral variables:
/// LP-relaxation bounds, branching on the fractional variable closest to 0.5,
/// depth-first diving with best-bound restarts when a dive dead-ends.
inline MilpAssignment solve_milp(const MilpModel& model, double time_budget_s) {
  constexpr double kIntTol = 1e-6;
  constexpr double kGapTol = 1e-7;
  const bool unlimited = time_budget_s >= 1e9;  // avoids clock-duration overflow
  const auto deadline =
      unlimited ? std::chrono::steady_clock::time_point::max()
                : std::chrono::steady_clock::now() +
                      std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                          std::chrono::duration<double>(time_budget_s));

  lp::Problem base = model.relaxation();
  std::vector<int> int_vars;
  for (int j = 0; j < static_cast<int>(model.vars.size()); ++j)
    if (model.vars[j].integral) int_vars.push_back(j);
  // Branch on placement variables when the model carries them: coverage
  // variables are implied by the y's, so branching on them is wasted depth.
  std::vector<int> branch_vars;
  for (int j : model.placement_vars)
    if (model.vars[j].integral) branch_vars.push_back(j);
  if (branch_vars.empty()) branch_vars = int_vars;

  struct Node {
    std::vector<std::pair<int, double>> fix_lower;  // (var, new lower)
    std::vector<std::pair<int, double>> fix_upper;
    double bound = std::numeric_limits<double>::infinity();
    int depth = 0;
  };

  MilpAssignment best;
  best.objective = -std::numeric_limits<double>::infinity();

  std::vector<Node> open;
  open.push_back({});
  bool dive = false;  // true when the previous expansion pushed children
  std::int64_t nodes = 0;
  bool timed_out = false;

  while (!open.empty()) {
    if (!unlimited && std::chrono::steady_clock::now() > deadline) {
      timed_out = true;
      break;
    }
    std::size_t pick = open.size() - 1;
    if (!dive) {
      for (std::size_t i = 0; i < open.size(); ++i)
        if (open[i].bound > open[pick].bound +
                                1e-12)  // best bound; ties keep latest (deepest) node
          pick = i;
    }
    Node node = std::move(open[pick]);
    open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
    dive = false;

    if (node.bound <= best.objective + kGapTol) continue;

    lp::Problem sub = base;
    for (const auto& [j, v] : node.fix_lower) sub.lower[j] = v;
    for (const auto& [j, v] : node.fix_upper) sub.upper[j] = v;

    const lp::Result relax = lp::solve(sub);
    ++nodes;
    if (relax.status == lp::Status::infeasible) continue;
    if (relax.status != lp::Status::optimal)
      throw std::runtime_error("solve_milp: LP relaxation failed");
    if (relax.objective <= best.objective + kGapTol) continue;

    // Branch variable: fractional integral closest to 0.5, lowest index ties.
    int branch = -1;
    double best_frac_dist = 0.5 - kIntTol;
    for (int j : branch_vars) {
      const double frac = relax.x[j] - std::floor(relax.x[j]);
      const double dist_int = std::min(frac, 1.0 - frac);
      if (dist_int <= kIntTol) continue;
      const double dist_half = std::abs(frac - 0.5);
      if (branch < 0 || dist_half < best_frac_dist - 1e-12) {
        branch = j;
        best_frac_dist = dist_half;
      }
    }

    if (branch < 0) {
      // Integral: candidate incumbent.
      MilpAssignment cand;
      cand.feasible = true;
      cand.x = relax.x;
      for (int j : int_vars) cand.x[j] = std::round(cand.x[j]);
      cand.objective = relax.objective;
      if (cand.objective > best.objective) {
        best = std::move(cand);
      }
      continue;
    }

    const double value = relax.x[branch];
    Node down = node;
    down.fix_upper.push_back({branch, std::floor(value)});
    down.bound = relax.objective;
    down.depth = node.depth + 1;
    Node up = node;
    up.fix_lower.push_back({branch, std::ceil(value)});
    up.bound = relax.objective;
    up.depth = node.depth + 1;
    open.push_back(std::move(down));
    open.push_back(std::move(up));  // dive on the "include" child first
    dive = true;
  }

  best.nodes = nodes;
  best.optimal = best.feasible && !timed_out;
  if (timed_out && !best.feasible) best.optimal = false;
  return best;
}

}  // namespace detail

namespace detail {

/// Marginal-gain greedy cover: the fallback incumbent when the budget expires
/// before branch and bound finds one.
inline std::vector<int> greedy_cover(const CoverageProblem& problem) {
  std::vector<char> covered(problem.grid.size(), 0);
  std::vector<int> chosen;
  for (int round = 0; round < problem.k; ++round) {
    int best = -1;
    double best_gain = 0.0;
    for (int c = 0; c < static_cast<int>(problem.candidates.size()); ++c) {
      double gain = 0.0;
      for (std::size_t p = 0; p < covered.size(); ++p)
        if (!covered[p] && problem.candidates[c].covered[p]) gain += problem.grid.weights[p];
      if (gain > best_gain + 1e-12) {
        best_gain = gain;
        best = c;
      }
    }
    if (best < 0) break;
    chosen.push_back(best);
    for (std::size_t p = 0; p < covered.size(); ++p)
      covered[p] |= problem.candidates[best].covered[p];
  }
  if (chosen.empty()) chosen.push_back(0);
  return chosen;
}

}  // namespace detail

/// Exact MPC solve by branch and bound. Returns the provably optimal placement
/// when the search completes within the budget; otherwise the best incumbent
/// (or a greedy cover if the budget expired before any incumbent appeared)
/// with optimal = false.
inline PlacementSolution solve_exact(const CoverageProblem& problem,
                                     double time_budget_s = 1e18) {
  problem.validate();
  const MilpModel model = build_mpc(problem.grid, problem.candidates, problem.k);
  detail::MilpAssignment a = detail::solve_milp(model, time_budget_s);
  std::vector<int> chosen;
  if (a.feasible) {
    for (std::size_t c = 0; c < model.placement_vars.size(); ++c)
      if (a.x[model.placement_vars[c]] > 0.5) chosen.push_back(static_cast<int>(c));
  } else {
    chosen = detail::greedy_cover(problem);
    a.optimal = false;
  }
  PlacementSolution sol = detail::make_placement(problem, std::move(chosen));
  sol.optimal = a.optimal;
  sol.nodes_explored = a.nodes;
  return sol;
}

/// Generic MILP objective for a model without placement metadata: integral
/// vars rounded, near-zero continuous values snapped to zero so big-M
/// artificial dust cannot leak into the objective.
struct ModelOptimum {
  double objective = 0.0;
  std::vector<double> x;
  bool optimal = false;
};

inline ModelOptimum solve_model(const MilpModel& model, double time_budget_s = 1e18) {
  detail::MilpAssignment a = detail::solve_milp(model, time_budget_s);
  if (!a.feasible) throw std::runtime_error("solve_model: model is infeasible");
  ModelOptimum opt;
  opt.x = a.x;
  opt.optimal = a.optimal;
  double obj = 0.0;
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    double v = opt.x[j];
    if (model.vars[j].integral)
      v = std::round(v);
    else if (std::abs(v) < 1e-7)
      v = 0.0;
    opt.x[j] = v;
    obj += model.vars[j].objective * v;
  }
  opt.objective = obj;
  return opt;
}

/// Exhaustive oracle: enumerates every subset of at most k candidates.
/// Ties broken lexicographically on the sorted index tuple.
inline PlacementSolution brute_force_placement(const CoverageProblem& problem) {
  problem.validate();
  const int n = static_cast<int>(problem.candidates.size());
  const int k = problem.k;
  double combos = 0.0;
  {
    double c = 1.0;
    for (int j = 1; j <= k; ++j) {
      c = c * (n - j + 1) / j;
      combos += c;
    }
  }
  if (combos > 1e6)
    throw SizeLimitError("brute_force_placement: C(n,k) budget exceeded (" +
                         std::to_string(combos) + " subsets)");

  std::vector<char> covered(problem.grid.size(), 0);
  std::vector<int> current;
  std::vector<int> best_set;
  double best_value = -1.0;

  // Depth-first subset enumeration in lexicographic order; the first subset
  // reaching a value wins ties, which is exactly the lexicographic rule.
  auto consider = [&]() {
    double value = 0.0;
    for (std::size_t p = 0; p < covered.size(); ++p)
      if (covered[p]) value += problem.grid.weights[p];
    if (value > best_value + 1e-12) {
      best_value = value;
      best_set = current;
    }
  };
  std::vector<std::vector<char>> saved_stack;
  auto recurse = [&](auto&& self, int start) -> void {
    if (!current.empty()) consider();
    if (static_cast<int>(current.size()) == k) return;
    for (int c = start; c < n; ++c) {
      saved_stack.push_back(covered);
      for (std::size_t p = 0; p < covered.size(); ++p)
        covered[p] |= problem.candidates[c].covered[p];
      current.push_back(c);
      self(self, c + 1);
      current.pop_back();
      covered = std::move(saved_stack.back());
      saved_stack.pop_back();
    }
  };
  recurse(recurse, 0);

  PlacementSolution sol = detail::make_placement(problem, best_set);
  sol.optimal = true;
  return sol;
}

/// Baseline that ignores sensing holes: picks the single candidate that puts
/// the most grid points inside its sensing range (full-disc assumption), then
/// reports that mount's true, hole-aware coverage. Range-count ties go to the
/// mount closest to the area centroid, then the lowest index.
inline PlacementSolution hole_unaware_placement(const CoverageProblem& problem) {
  problem.validate();
  if (problem.k != 1)
    throw std::invalid_argument("hole_unaware_placement: defined for k = 1");
  const Point centroid{problem.grid.width_m / 2.0, problem.grid.depth_m / 2.0};
  int best = -1;
  std::size_t best_count = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int c = 0; c < static_cast<int>(problem.candidates.size()); ++c) {
    const std::size_t count = problem.candidates[c].in_range_count();
    const MountPose& m = problem.candidates[c].source_mount;
    const double dist = std::hypot(m.x - centroid.x, m.y - centroid.y);
    if (best < 0 || count > best_count ||
        (count == best_count && dist < best_dist - kGeomTol)) {
      best = c;
      best_count = count;
      best_dist = dist;
    }
  }
  PlacementSolution sol = detail::make_placement(problem, {best});
  sol.optimal = true;
  return sol;
}

}  // namespace pirplan

#endif  // PIRPLAN_MILP_HPP
