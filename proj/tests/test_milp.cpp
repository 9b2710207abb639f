#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "pirplan/milp.hpp"
#include "pirplan/random.hpp"

using namespace pirplan;

namespace {

CoverageMask synthetic_mask(std::size_t points, const std::vector<std::size_t>& covered) {
  CoverageMask m;
  m.covered.assign(points, 0);
  m.in_range.assign(points, 1);
  for (std::size_t p : covered) m.covered[p] = 1;
  return m;
}

CoverageProblem random_problem(Rng& rng, int max_side = 6, int max_candidates = 10,
                               int max_k = 3) {
  const int nx = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_side - 1)));
  const int ny = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_side - 1)));
  CoverageProblem problem;
  problem.grid = discretize_area(0.5 * (nx - 1), 0.5 * (ny - 1), 0.5);
  REQUIRE(problem.grid.nx() == nx);
  REQUIRE(problem.grid.ny() == ny);
  for (auto& w : problem.grid.weights) w = static_cast<double>(rng.below(5));
  if (problem.grid.total_weight() <= 0.0) problem.grid.weights[0] = 1.0;

  const int nc = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_candidates - 1)));
  for (int c = 0; c < nc; ++c) {
    CoverageMask m;
    m.covered.assign(problem.grid.size(), 0);
    m.in_range.assign(problem.grid.size(), 1);
    const double density = rng.uniform(0.05, 0.45);
    for (std::size_t p = 0; p < problem.grid.size(); ++p)
      if (rng.uniform01() < density) m.covered[p] = 1;
    m.source_mount = {rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0), 0.0};
    problem.candidates.push_back(std::move(m));
  }
  problem.k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_k)));
  problem.k = std::min(problem.k, nc);
  return problem;
}

/// Enumeration oracle for MILP models whose variables are binaries plus the
/// nonnegative continuous slack/artificial columns added by the standard-form
/// transformation. Returns the optimal objective including big-M penalties.
double enumerate_standard_form(const MilpModel& model) {
  std::vector<int> binaries;
  for (int j = 0; j < static_cast<int>(model.vars.size()); ++j)
    if (model.vars[j].integral) binaries.push_back(j);
  REQUIRE(binaries.size() <= 22);

  double best = -1e300;
  for (std::uint64_t bits = 0; bits < (1ull << binaries.size()); ++bits) {
    std::vector<double> x(model.vars.size(), 0.0);
    for (std::size_t i = 0; i < binaries.size(); ++i)
      x[binaries[i]] = (bits >> i) & 1ull ? 1.0 : 0.0;

    bool feasible = true;
    double penalty = 0.0;
    for (const MilpModel::Constraint& row : model.rows) {
      REQUIRE(row.rel == lp::Relation::equal);
      double residual = row.rhs;
      int slack = -1;
      double slack_coeff = 0.0;
      int artificial = -1;
      double artificial_obj = 0.0;
      for (const auto& [j, a] : row.coeffs) {
        if (model.vars[j].integral) {
          residual -= a * x[j];
        } else if (model.vars[j].objective < 0.0) {
          artificial = j;
          artificial_obj = model.vars[j].objective;
        } else {
          slack = j;
          slack_coeff = a;
        }
      }
      // Choose slack >= 0 and artificial >= 0 minimizing the big-M penalty.
      double art_value = 0.0;
      if (artificial >= 0) {
        if (slack >= 0) {
          // residual = slack_coeff * s + a  with s, a >= 0.
          if (slack_coeff < 0.0) {
            art_value = std::max(residual, 0.0);
          } else {
            art_value = residual >= 0.0 ? 0.0 : -1.0;  // s absorbs positives only
            if (residual < 0.0) feasible = false;
          }
        } else {
          if (residual >= -1e-12) {
            art_value = std::max(residual, 0.0);
          } else {
            feasible = false;
          }
        }
        if (feasible) {
          x[artificial] = art_value;
          penalty += artificial_obj * art_value;
        }
      } else {
        // Slack only: slack_coeff * s = residual must have a s >= 0 solution.
        if (slack < 0) {
          if (std::abs(residual) > 1e-9) feasible = false;
        } else if (residual * slack_coeff < -1e-12) {
          feasible = false;
        }
      }
      if (!feasible) break;
    }
    if (!feasible) continue;
    double value = penalty;
    for (int j : binaries) value += model.vars[j].objective * x[j];
    best = std::max(best, value);
  }
  return best;
}

double enumerate_original(const MilpModel& model) {
  std::vector<int> binaries;
  for (int j = 0; j < static_cast<int>(model.vars.size()); ++j)
    if (model.vars[j].integral) binaries.push_back(j);
  REQUIRE(binaries.size() == model.vars.size());  // pure binary model
  REQUIRE(binaries.size() <= 22);

  double best = -1e300;
  for (std::uint64_t bits = 0; bits < (1ull << binaries.size()); ++bits) {
    std::vector<double> x(model.vars.size(), 0.0);
    for (std::size_t i = 0; i < binaries.size(); ++i)
      x[binaries[i]] = (bits >> i) & 1ull ? 1.0 : 0.0;
    bool feasible = true;
    for (const MilpModel::Constraint& row : model.rows) {
      double ax = 0.0;
      for (const auto& [j, a] : row.coeffs) ax += a * x[j];
      if (row.rel == lp::Relation::less_eq && ax > row.rhs + 1e-12) feasible = false;
      if (row.rel == lp::Relation::greater_eq && ax < row.rhs - 1e-12) feasible = false;
      if (row.rel == lp::Relation::equal && std::abs(ax - row.rhs) > 1e-12) feasible = false;
      if (!feasible) break;
    }
    if (!feasible) continue;
    double value = 0.0;
    for (std::size_t j = 0; j < model.vars.size(); ++j) value += model.vars[j].objective * x[j];
    best = std::max(best, value);
  }
  return best;
}

}  // namespace

TEST_CASE("build_mpc produces the documented model shape") {
  // An 88-point grid: 11 x 8 lattice.
  Grid grid = discretize_area(3.0, 2.1, 0.3);
  REQUIRE(grid.size() == 88);
  std::vector<CoverageMask> candidates;
  Rng rng(7);
  for (int c = 0; c < 24; ++c) {
    CoverageMask m;
    m.covered.assign(grid.size(), 0);
    m.in_range.assign(grid.size(), 1);
    for (std::size_t p = 0; p < grid.size(); ++p)
      if (rng.uniform01() < 0.2) m.covered[p] = 1;
    candidates.push_back(std::move(m));
  }
  const MilpModel model = build_mpc(grid, candidates, 3);
  CHECK(model.num_binaries() == 112);
  CHECK(model.rows.size() == 89);
  // Every coverage variable appears in exactly one linking constraint.
  std::vector<int> appearances(model.vars.size(), 0);
  for (const auto& row : model.rows)
    for (const auto& [j, a] : row.coeffs)
      if (a > 0.0 && !model.placement_vars.empty() && j >= model.coverage_vars.front())
        ++appearances[j];
  for (int z : model.coverage_vars) CHECK(appearances[z] == 1);
}

TEST_CASE("build_mpc rejects malformed problems") {
  Grid grid = discretize_area(1.0, 1.0, 0.5);
  std::vector<CoverageMask> candidates{synthetic_mask(grid.size(), {0})};
  CHECK_THROWS_AS(build_mpc(grid, candidates, 2), std::invalid_argument);
  candidates.push_back(synthetic_mask(grid.size() + 1, {0}));
  CHECK_THROWS_AS(build_mpc(grid, candidates, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_mpc(grid, {}, 1), std::invalid_argument);
}

TEST_CASE("trivial optima") {
  Grid grid = discretize_area(1.0, 1.0, 0.5);  // 9 points
  const std::size_t n = grid.size();

  SUBCASE("one candidate covering everything") {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    CoverageProblem problem{grid, {synthetic_mask(n, all)}, 1};
    const PlacementSolution sol = solve_exact(problem);
    CHECK(sol.objective_value == doctest::Approx(grid.total_weight()));
    CHECK(sol.coverage_fraction == doctest::Approx(1.0));
    CHECK(sol.optimal);
  }

  SUBCASE("two disjoint candidates, the larger wins") {
    CoverageProblem problem{grid, {synthetic_mask(n, {0, 1}), synthetic_mask(n, {2, 3, 4})}, 1};
    const PlacementSolution sol = solve_exact(problem);
    CHECK(sol.chosen == std::vector<int>{1});
    CHECK(sol.objective_value == doctest::Approx(3.0));
  }
}

TEST_CASE("brute force basics") {
  Grid grid = discretize_area(1.0, 1.0, 0.5);
  const std::size_t n = grid.size();

  SUBCASE("k equal to candidate count takes the union") {
    CoverageProblem problem{
        grid, {synthetic_mask(n, {0, 1}), synthetic_mask(n, {4}), synthetic_mask(n, {8})}, 3};
    const PlacementSolution sol = brute_force_placement(problem);
    CHECK(sol.chosen == std::vector<int>{0, 1, 2});
    CHECK(sol.objective_value == doctest::Approx(4.0));
  }

  SUBCASE("identical masks tie to the lexicographically first subset") {
    CoverageProblem problem{grid, {synthetic_mask(n, {0, 1}), synthetic_mask(n, {0, 1})}, 1};
    const PlacementSolution sol = brute_force_placement(problem);
    CHECK(sol.chosen == std::vector<int>{0});
  }

  SUBCASE("combination budget guard") {
    CoverageProblem problem;
    problem.grid = grid;
    for (int c = 0; c < 50; ++c) problem.candidates.push_back(synthetic_mask(n, {0}));
    problem.k = 10;
    CHECK_THROWS_AS(brute_force_placement(problem), SizeLimitError);
  }
}

TEST_CASE("exact solver equals the exhaustive oracle on random instances") {
  Rng rng(123456);
  for (int trial = 0; trial < 60; ++trial) {
    const CoverageProblem problem = random_problem(rng);
    const PlacementSolution exact = solve_exact(problem);
    const PlacementSolution oracle = brute_force_placement(problem);
    REQUIRE(exact.optimal);
    CHECK(exact.objective_value == oracle.objective_value);  // bitwise: same summation
  }
}

TEST_CASE("optimal objective is monotone in k") {
  Rng rng(999);
  for (int trial = 0; trial < 15; ++trial) {
    CoverageProblem problem = random_problem(rng, 5, 8, 1);
    double prev = -1.0;
    for (int k = 1; k <= std::min<int>(3, static_cast<int>(problem.candidates.size())); ++k) {
      problem.k = k;
      const double obj = solve_exact(problem).objective_value;
      CHECK(obj >= prev - 1e-12);
      prev = obj;
    }
  }
}

TEST_CASE("superset dominance: a dominated candidate never helps") {
  Rng rng(4242);
  for (int trial = 0; trial < 20; ++trial) {
    CoverageProblem problem = random_problem(rng, 5, 6, 2);
    // Make candidate 0 a superset of candidate 1.
    for (std::size_t p = 0; p < problem.grid.size(); ++p)
      if (problem.candidates[1].covered[p]) problem.candidates[0].covered[p] = 1;
    const double with_b = brute_force_placement(problem).objective_value;
    CoverageProblem without_b = problem;
    without_b.candidates.erase(without_b.candidates.begin() + 1);
    without_b.k = std::min(without_b.k, static_cast<int>(without_b.candidates.size()));
    const double wo_b = brute_force_placement(without_b).objective_value;
    CHECK(with_b == wo_b);
  }
}

TEST_CASE("an expired budget still yields a usable incumbent") {
  Rng rng(20202);
  const CoverageProblem problem = random_problem(rng, 6, 10, 3);
  const PlacementSolution sol = solve_exact(problem, 0.0);
  CHECK_FALSE(sol.optimal);
  CHECK(sol.chosen.size() >= 1);
  CHECK(sol.chosen.size() <= static_cast<std::size_t>(problem.k));
  CHECK(sol.objective_value > 0.0);
  CHECK(sol.objective_value <= brute_force_placement(problem).objective_value);
}

TEST_CASE("solve_exact is deterministic") {
  Rng rng(31337);
  const CoverageProblem problem = random_problem(rng);
  const PlacementSolution a = solve_exact(problem);
  const PlacementSolution b = solve_exact(problem);
  CHECK(a.chosen == b.chosen);
  CHECK(a.objective_value == b.objective_value);
  CHECK(a.nodes_explored == b.nodes_explored);
}

TEST_CASE("big-M standard form") {
  Rng rng(2718);

  SUBCASE("LP relaxation optimum is preserved") {
    for (int trial = 0; trial < 10; ++trial) {
      const CoverageProblem problem = random_problem(rng);
      const MilpModel model = build_mpc(problem.grid, problem.candidates, problem.k);
      const MilpModel standard = big_m_standard_form(model);
      const lp::Result orig = lp::solve(model.relaxation());
      const lp::Result xform = lp::solve(standard.relaxation());
      REQUIRE(orig.status == lp::Status::optimal);
      REQUIRE(xform.status == lp::Status::optimal);
      CHECK(xform.objective == doctest::Approx(orig.objective).epsilon(1e-7));
    }
  }

  SUBCASE("two-candidate toy model via the 0/1 enumeration oracle") {
    Grid grid = discretize_area(1.0, 0.5, 0.5);  // 3x2 = 6 points
    for (auto& w : grid.weights) w = 2.0;
    CoverageProblem problem{grid, {synthetic_mask(6, {0, 1, 2}), synthetic_mask(6, {3, 4})}, 1};
    const MilpModel model = build_mpc(problem.grid, problem.candidates, problem.k);
    const MilpModel standard = big_m_standard_form(model);
    const double orig = enumerate_original(model);
    const double xform = enumerate_standard_form(standard);
    CHECK(orig == doctest::Approx(6.0));
    CHECK(xform == doctest::Approx(orig));
    CHECK(solve_model(standard).objective == doctest::Approx(orig));
  }

  SUBCASE("zero weights give zero optimum in both forms") {
    Grid grid = discretize_area(1.0, 0.5, 0.5);
    for (auto& w : grid.weights) w = 0.0;
    grid.weights[0] = 0.0;
    CoverageProblem problem{grid, {synthetic_mask(6, {0, 1})}, 1};
    MilpModel model = build_mpc(problem.grid, problem.candidates, problem.k);
    // total_weight check is bypassed intentionally: weights may be all zero here.
    const MilpModel standard = big_m_standard_form(model);
    CHECK(solve_model(model).objective == doctest::Approx(0.0));
    CHECK(solve_model(standard).objective == doctest::Approx(0.0));
  }

  SUBCASE("user big_M below the derived bound is rejected") {
    Grid grid = discretize_area(1.0, 0.5, 0.5);
    CoverageProblem problem{grid, {synthetic_mask(6, {0, 1, 2})}, 1};
    const MilpModel model = build_mpc(problem.grid, problem.candidates, problem.k);
    CHECK_THROWS_AS(big_m_standard_form(model, 1.5), std::invalid_argument);
    CHECK_NOTHROW(big_m_standard_form(model, 500.0));
  }

  SUBCASE("integer-weight equality between original and standard form") {
    for (int trial = 0; trial < 12; ++trial) {
      const CoverageProblem problem = random_problem(rng, 4, 6, 2);
      const MilpModel model = build_mpc(problem.grid, problem.candidates, problem.k);
      const MilpModel standard = big_m_standard_form(model);
      const double orig = solve_model(model).objective;
      const double xform = solve_model(standard).objective;
      CHECK(orig == xform);  // integer weights: exact
    }
  }
}

TEST_CASE("hole-unaware placement") {
  Grid grid = discretize_area(2.0, 2.0, 0.5);  // 25 points
  const std::size_t n = grid.size();

  SUBCASE("full-range candidate wins regardless of holes") {
    // Candidate 0: corner mount, limited range but dense coverage.
    CoverageMask corner = synthetic_mask(n, {0, 1, 2, 5, 6, 7});
    for (std::size_t p = 0; p < n; ++p) corner.in_range[p] = p < 15 ? 1 : 0;
    corner.source_mount = {0.0, 0.0, 0.0};
    // Candidate 1: central mount, everything in range, almost nothing covered.
    CoverageMask center = synthetic_mask(n, {12});
    center.source_mount = {1.0, 1.0, 0.0};
    CoverageProblem problem{grid, {corner, center}, 1};
    const PlacementSolution sol = hole_unaware_placement(problem);
    CHECK(sol.chosen == std::vector<int>{1});
    CHECK(sol.objective_value == doctest::Approx(1.0));  // true, hole-aware value
  }

  SUBCASE("single candidate is chosen") {
    CoverageProblem problem{grid, {synthetic_mask(n, {3})}, 1};
    CHECK(hole_unaware_placement(problem).chosen == std::vector<int>{0});
  }

  SUBCASE("requires k = 1") {
    CoverageProblem problem{grid, {synthetic_mask(n, {3}), synthetic_mask(n, {4})}, 2};
    CHECK_THROWS_AS(hole_unaware_placement(problem), std::invalid_argument);
  }
}
