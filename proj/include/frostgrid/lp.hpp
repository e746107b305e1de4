#pragma once

#include <chrono>
#include <optional>
#include <vector>

#include "frostgrid/milp.hpp"

namespace frostgrid::lp {

enum class LpStatus { Optimal, Infeasible, Unbounded, Cutoff, IterationLimit, TimeLimit, Numeric };

const char* to_string(LpStatus s);

struct LpOptions {
  double primal_tol = 1e-9;
  double dual_tol = 1e-9;
  double pivot_tol = 1e-9;
  long max_iterations = 200000;
  /// Stop with Cutoff once the objective provably exceeds this value.
  double cutoff = kInfinity;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct LpResult {
  LpStatus status = LpStatus::Numeric;
  double objective = 0.0;
  std::vector<double> x;  // structural values
  long iterations = 0;
};

/// Bounded-variable dual simplex on a dense tableau of B^-1 [A I].
///
/// Each solve runs on slightly perturbed costs of the boxed columns first,
/// which breaks the heavy dual degeneracy of the zero-cost columns, then
/// finishes on the true costs so the reported optimum is exact.
///
/// The engine starts from the all-slack basis and keeps its basis between
/// calls, so bound changes followed by solve() re-optimize from the previous
/// optimum. Integrality is ignored; the model's bounds are the LP's bounds.
class DualSimplex {
 public:
  explicit DualSimplex(const MilpModel& model);

  int structural_count() const { return n_; }
  int row_count() const { return m_; }

  double lower(int var) const { return lo_[var]; }
  double upper(int var) const { return hi_[var]; }
  void set_bounds(int var, double lower, double upper);

  LpResult solve(const LpOptions& options = {});

  /// Rebuilds the tableau for the current basis from the original data.
  void refactor();

  long total_iterations() const { return total_iterations_; }

 private:
  enum class At : unsigned char { Basic, Lower, Upper };

  double& t(int r, int c) { return tab_[static_cast<std::size_t>(r) * cols_ + c]; }
  double t(int r, int c) const { return tab_[static_cast<std::size_t>(r) * cols_ + c]; }

  void place_nonbasic(int j);
  void recompute_basic_values();
  void recompute_reduced_costs();
  void pivot(int r, int q);
  double row_weight(int r) const;
  double objective_value() const;
  double lagrangian_bound() const;
  void use_costs(const std::vector<double>& costs);
  LpStatus iterate(const LpOptions& opt, long& iterations);
  double max_row_residual() const;
  std::vector<double> structural_values() const;

  int m_ = 0;
  int n_ = 0;
  int cols_ = 0;  // n_ + m_
  std::vector<double> tab_;
  std::vector<double> rhs_;    // B^-1 b
  std::vector<double> cost_;       // per column, as used by the tableau
  std::vector<double> true_cost_;
  std::vector<double> perturbed_cost_;
  std::vector<double> d_;      // reduced costs
  std::vector<double> x_;      // current value of every column
  std::vector<double> lo_;
  std::vector<double> hi_;
  std::vector<char> artificial_lo_;
  std::vector<char> artificial_hi_;
  std::vector<At> at_;
  std::vector<int> basis_;  // row -> column
  std::vector<int> row_of_;  // column -> row or -1

  // Original rows for refactorization and residual checks.
  std::vector<std::vector<Term>> rows_;
  std::vector<double> b_;

  long total_iterations_ = 0;
  long pivots_since_refactor_ = 0;
  std::vector<int> scratch_nz_;
  std::vector<double> weight_;  // dual steepest-edge weights ||row r of B^-1||^2
};

}  // namespace frostgrid::lp
