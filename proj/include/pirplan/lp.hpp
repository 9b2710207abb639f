#ifndef PIRPLAN_LP_HPP
#define PIRPLAN_LP_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pirplan::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { less_eq, greater_eq, equal };
enum class Status { optimal, infeasible, unbounded, iteration_limit };

/// maximize objective . x  subject to rows and lower <= x <= upper.
struct Problem {
  struct Row {
    std::vector<std::pair<int, double>> coeffs;  // (variable, coefficient)
    Relation rel = Relation::less_eq;
    double rhs = 0.0;
  };

  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Row> rows;

  int num_vars() const { return static_cast<int>(objective.size()); }
};

struct Result {
  Status status = Status::infeasible;
  double objective = 0.0;
  std::vector<double> x;
};

/// Dense bounded-variable primal simplex, two phases. Deterministic pivot
/// rules: largest reduced cost with lowest-index ties, falling back to Bland's
/// rule after a degenerate streak. Variables may sit at either bound.
class SimplexSolver {
 public:
  explicit SimplexSolver(const Problem& p, int max_iterations = 200000)
      : max_iterations_(max_iterations) {
    build(p);
  }

  Result solve() {
    Result res;
    // Phase 1: drive artificials to zero (skip when the slack basis is clean).
    if (artificial_load() > kFeasTol) {
      std::vector<double> phase1(cols_, 0.0);
      for (int j = first_artificial_; j < cols_; ++j) phase1[j] = -1.0;
      const Status st = optimize(phase1);
      if (st == Status::iteration_limit) {
        res.status = st;
        return res;
      }
      if (artificial_load() > kFeasTol) {
        res.status = Status::infeasible;
        return res;
      }
    }
    for (int j = first_artificial_; j < cols_; ++j) upper_[j] = 0.0;

    const Status st = optimize(cost_);
    res.status = st;
    if (st == Status::optimal) {
      res.x.assign(xval_.begin(), xval_.begin() + n_struct_);
      res.objective = 0.0;
      for (int j = 0; j < n_struct_; ++j) res.objective += cost_[j] * xval_[j];
    }
    return res;
  }

 private:
  static constexpr double kFeasTol = 1e-8;
  static constexpr double kCostTol = 1e-9;
  static constexpr double kPivotEps = 1e-11;

  enum class VarState : char { basic, at_lower, at_upper };

  void build(const Problem& p) {
    n_struct_ = p.num_vars();
    const int m = static_cast<int>(p.rows.size());
    rows_ = m;

    // Column layout: structurals, one slack/surplus per inequality row, then
    // artificials for rows whose slack cannot absorb the initial residual.
    std::vector<int> slack_col(m, -1);
    std::vector<double> slack_sign(m, 0.0);
    int next = n_struct_;
    for (int i = 0; i < m; ++i) {
      if (p.rows[i].rel == Relation::equal) continue;
      slack_col[i] = next++;
      slack_sign[i] = (p.rows[i].rel == Relation::less_eq) ? 1.0 : -1.0;
    }
    const int n_with_slacks = next;

    lower_.assign(n_with_slacks, 0.0);
    upper_.assign(n_with_slacks, kInf);
    cost_.assign(n_with_slacks, 0.0);
    xval_.assign(n_with_slacks, 0.0);
    state_.assign(n_with_slacks, VarState::at_lower);
    for (int j = 0; j < n_struct_; ++j) {
      lower_[j] = p.lower[j];
      upper_[j] = p.upper[j];
      cost_[j] = p.objective[j];
      if (!std::isfinite(lower_[j]))
        throw std::invalid_argument("lp: variables must have a finite lower bound");
      if (upper_[j] < lower_[j] - 1e-12) throw std::invalid_argument("lp: empty variable bound");
      xval_[j] = lower_[j];
    }

    // Initial residuals decide which rows need an artificial basic variable.
    std::vector<double> residual(m, 0.0);
    for (int i = 0; i < m; ++i) {
      double ax = 0.0;
      for (const auto& [j, a] : p.rows[i].coeffs) ax += a * xval_[j];
      residual[i] = p.rows[i].rhs - ax;
    }

    basis_.assign(m, -1);
    std::vector<int> artificial_rows;
    for (int i = 0; i < m; ++i) {
      const double r = residual[i];
      if (slack_col[i] >= 0 && r * slack_sign[i] >= 0.0) {
        basis_[i] = slack_col[i];
      } else {
        artificial_rows.push_back(i);
      }
    }
    first_artificial_ = n_with_slacks;
    cols_ = n_with_slacks + static_cast<int>(artificial_rows.size());
    lower_.resize(cols_, 0.0);
    upper_.resize(cols_, kInf);
    cost_.resize(cols_, 0.0);
    xval_.resize(cols_, 0.0);
    state_.resize(cols_, VarState::at_lower);

    tab_.assign(static_cast<std::size_t>(rows_) * cols_, 0.0);
    for (int i = 0; i < m; ++i) {
      for (const auto& [j, a] : p.rows[i].coeffs) at(i, j) += a;
      if (slack_col[i] >= 0) at(i, slack_col[i]) = slack_sign[i];
    }
    int art = first_artificial_;
    for (int i : artificial_rows) {
      at(i, art) = (residual[i] >= 0.0) ? 1.0 : -1.0;
      basis_[i] = art++;
    }

    // Basis columns are unit columns (slack/artificial each touch one row);
    // normalize the -1 cases so the tableau starts as B^{-1}A with identity
    // basis. Basic values are tracked incrementally from here on.
    for (int i = 0; i < m; ++i) {
      const int b = basis_[i];
      const double piv = at(i, b);
      if (std::abs(piv - 1.0) > kPivotEps)
        for (int j = 0; j < cols_; ++j) at(i, j) /= piv;
      state_[b] = VarState::basic;
      if (b >= first_artificial_)
        xval_[b] = std::abs(residual[i]);
      else
        xval_[b] = residual[i] * slack_sign[i];
    }
  }

  double artificial_load() const {
    double sum = 0.0;
    for (int j = first_artificial_; j < cols_; ++j) sum += std::abs(xval_[j]);
    return sum;
  }

  double& at(int i, int j) { return tab_[static_cast<std::size_t>(i) * cols_ + j]; }
  double at(int i, int j) const { return tab_[static_cast<std::size_t>(i) * cols_ + j]; }

  Status optimize(const std::vector<double>& c) {
    int degenerate_streak = 0;
    bool bland = false;
    for (int iter = 0; iter < max_iterations_; ++iter) {
      // Reduced costs d = c - c_B^T tab.
      std::vector<double> d(c.begin(), c.begin() + cols_);
      for (int i = 0; i < rows_; ++i) {
        const double cb = c[basis_[i]];
        if (cb == 0.0) continue;
        const double* row = &tab_[static_cast<std::size_t>(i) * cols_];
        for (int j = 0; j < cols_; ++j) d[j] -= cb * row[j];
      }

      int enter = -1;
      double enter_dir = 0.0;
      double best = kCostTol;
      for (int j = 0; j < cols_; ++j) {
        if (state_[j] == VarState::basic) continue;
        if (upper_[j] - lower_[j] <= kPivotEps) continue;  // fixed variable
        double score = 0.0;
        double dir = 0.0;
        if (state_[j] == VarState::at_lower && d[j] > kCostTol) {
          score = d[j];
          dir = 1.0;
        } else if (state_[j] == VarState::at_upper && d[j] < -kCostTol) {
          score = -d[j];
          dir = -1.0;
        } else {
          continue;
        }
        if (bland) {
          enter = j;
          enter_dir = dir;
          break;
        }
        if (score > best) {
          best = score;
          enter = j;
          enter_dir = dir;
        }
      }
      if (enter < 0) return Status::optimal;

      // Ratio test: how far can the entering variable move?
      double t = upper_[enter] - lower_[enter];  // bound flip limit
      int leave_row = -1;
      double leave_bound = 0.0;
      for (int i = 0; i < rows_; ++i) {
        const double a = at(i, enter);
        if (std::abs(a) < kPivotEps) continue;
        const int b = basis_[i];
        const double delta = -enter_dir * a;  // basic change per unit t
        double limit;
        double bound;
        if (delta > 0.0) {
          if (!std::isfinite(upper_[b])) continue;
          limit = (upper_[b] - xval_[b]) / delta;
          bound = upper_[b];
        } else {
          limit = (xval_[b] - lower_[b]) / (-delta);
          bound = lower_[b];
        }
        if (limit < t - kPivotEps || (limit < t + kPivotEps && leave_row >= 0 &&
                                      basis_[i] < basis_[leave_row])) {
          t = std::max(limit, 0.0);
          leave_row = i;
          leave_bound = bound;
        }
      }
      if (!std::isfinite(t)) return Status::unbounded;

      degenerate_streak = (t < 1e-10) ? degenerate_streak + 1 : 0;
      if (degenerate_streak > 2 * (rows_ + cols_)) bland = true;

      // Apply the move to all basic values.
      for (int i = 0; i < rows_; ++i) {
        const double a = at(i, enter);
        if (std::abs(a) > 0.0) xval_[basis_[i]] -= enter_dir * a * t;
      }
      xval_[enter] += enter_dir * t;

      if (leave_row < 0) {
        // Bound flip: entering variable traverses to its opposite bound.
        state_[enter] = (enter_dir > 0.0) ? VarState::at_upper : VarState::at_lower;
        xval_[enter] = (enter_dir > 0.0) ? upper_[enter] : lower_[enter];
        continue;
      }

      // Pivot enter into the basis at leave_row.
      const int leaving = basis_[leave_row];
      state_[leaving] =
          (leave_bound == lower_[leaving]) ? VarState::at_lower : VarState::at_upper;
      xval_[leaving] = leave_bound;
      state_[enter] = VarState::basic;
      basis_[leave_row] = enter;

      double* prow = &tab_[static_cast<std::size_t>(leave_row) * cols_];
      const double piv = prow[enter];
      for (int j = 0; j < cols_; ++j) prow[j] /= piv;
      for (int i = 0; i < rows_; ++i) {
        if (i == leave_row) continue;
        double* row = &tab_[static_cast<std::size_t>(i) * cols_];
        const double f = row[enter];
        if (std::abs(f) < kPivotEps) {
          row[enter] = 0.0;
          continue;
        }
        for (int j = 0; j < cols_; ++j) row[j] -= f * prow[j];
        row[enter] = 0.0;
      }
    }
    return Status::iteration_limit;
  }

  int n_struct_ = 0;
  int rows_ = 0;
  int cols_ = 0;
  int first_artificial_ = 0;
  int max_iterations_;
  std::vector<double> tab_;
  std::vector<double> lower_, upper_, cost_, xval_;
  std::vector<VarState> state_;
  std::vector<int> basis_;
};

inline Result solve(const Problem& p, int max_iterations = 200000) {
  return SimplexSolver(p, max_iterations).solve();
}

}  // namespace pirplan::lp

#endif  // PIRPLAN_LP_HPP
