#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "frostgrid/instance.hpp"
#include "frostgrid/milp.hpp"
#include "frostgrid/plan.hpp"
#include "frostgrid/solver.hpp"

namespace frostgrid {

struct ViolationSummary {
  std::vector<double> mu_lo;
  std::vector<double> mu_hi;
  double total = 0.0;      // sum over check points of mu_lo + mu_hi
  double obj_part2 = 0.0;  // total / n_cp
};

/// Per-heater uncertainty intervals: instance bounds for grid plans, the
/// instance-wide [min ku_lo, max ku_hi] for free-placed heaters.
void heater_bounds(const DesignPlan& plan, const OrchardInstance& inst, std::vector<double>& lo,
                   std::vector<double>& hi);

/// Tight worst-case range violations for a fixed placement:
///   mu_lo_s = max(0, f_lo - sum_i ku_lo_i h_is),  mu_hi_s = max(0, sum_i ku_hi_i h_is - f_hi).
ViolationSummary worst_case_violations(const DesignPlan& plan, const OrchardInstance& inst);

struct ViolationStats {
  double mean = 0.0;
  double max = 0.0;
  double stddev = 0.0;
  int draws = 0;
  std::uint64_t seed = 0;
};

inline constexpr int kDefaultDraws = 1000;

/// Monte Carlo obj_part2 with ku sampled uniformly per heater and draw from
/// the counter-based generator in rng.hpp.
ViolationStats sampled_violations(const DesignPlan& plan, const OrchardInstance& inst,
                                  std::uint64_t seed, int draws = kDefaultDraws,
                                  Execution exec = Execution::Parallel);

/// obj_part1 / beta1 + (alpha / beta2) * total worst-case violation.
double scalarized_objective(const DesignPlan& plan, const OrchardInstance& inst, double alpha);

struct ParetoRecord {
  double alpha = 0.0;
  double obj_part1_m = 0.0;
  double obj_part2 = 0.0;
  double rel_gap = 0.0;
  double wall_time_s = 0.0;
  SolveStatus status = SolveStatus::LimitReached;
  bool has_solution = false;
};

/// One solve per alpha, records sorted by alpha. Solve failures are recorded
/// in-row and the sweep continues.
std::vector<ParetoRecord> pareto_sweep(const OrchardInstance& inst, std::span<const double> alphas,
                                       const SolveConfig& cfg, Execution exec = Execution::Parallel);

/// Header `alpha,obj_part1_m,obj_part2,rel_gap,wall_time_s,status`, LF endings.
void write_pareto_csv(std::ostream& out, std::span<const ParetoRecord> records);

struct OracleResult {
  DesignPlan plan;
  double objective = 0.0;
  std::uint64_t subsets = 0;
};

inline constexpr std::uint64_t kOracleBudget = 1000000;

/// Enumerates every k-subset of candidate sites and returns the minimizer of
/// MST/beta1 + alpha/beta2 * sum(mu); ties go to the lexicographically first
/// subset. Throws BudgetExceeded if C(n, k) > budget.
OracleResult exhaustive_oracle(const OrchardInstance& inst, double alpha,
                               Execution exec = Execution::Parallel,
                               std::uint64_t budget = kOracleBudget);

/// MILP design run: builds the model, seeds the search with the snapped
/// heuristic layout and extracts the plan when an incumbent exists.
struct DesignRun {
  SolveResult result;
  std::optional<DesignPlan> plan;
};

DesignRun solve_design(const OrchardInstance& inst, const SolveConfig& cfg, bool warm_start = true);

}  // namespace frostgrid
