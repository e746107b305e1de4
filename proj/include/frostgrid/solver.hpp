#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "frostgrid/milp.hpp"

namespace frostgrid {

struct SolveConfig {
  double time_limit_s = 60.0;
  double rel_gap_tol = 1e-4;
  double abs_tol = 1e-6;
  std::optional<long> node_limit;
  int worker_count = 1;

  void validate() const;
};

/// Outcome of a branch-and-bound run. For minimization,
/// best_bound <= optimum <= incumbent_obj at all times.
struct SolveResult {
  std::optional<MilpSolution> solution;
  std::optional<double> incumbent_obj;
  double best_bound = -kInfinity;
  double rel_gap = kInfinity;
  double root_bound = -kInfinity;
  long nodes_explored = 0;
  long lp_iterations = 0;
  double wall_time_s = 0.0;
  SolveStatus status = SolveStatus::LimitReached;
};

/// rel_gap = (incumbent - bound) / max(|incumbent|, 1e-9)
double relative_gap(double incumbent, double bound);

/// Best-bound branch and bound over the binary variables with dual-simplex
/// LP bounds. `initial` is an optional full assignment used as the first
/// incumbent when it validates. Throws SolverError for models too large for
/// the dense LP engine.
SolveResult solve(const MilpModel& model, const SolveConfig& cfg,
                  const std::optional<std::vector<double>>& initial = std::nullopt);

/// LP relaxation value (binaries relaxed to [0, 1]).
SolveResult solve_lp_relaxation(const MilpModel& model, const SolveConfig& cfg = {});

/// Free-format MPS with integrality markers. Output bytes depend only on the model.
void write_mps(const MilpModel& model, std::ostream& out);
void export_mps(const MilpModel& model, const std::filesystem::path& path);

/// Reads free-format MPS (NAME/ROWS/COLUMNS/RHS/BOUNDS/ENDATA, MARKER lines).
MilpModel read_mps(std::istream& in);
MilpModel import_mps(const std::filesystem::path& path);

struct ImportedSolution {
  MilpSolution solution;
  std::vector<std::string> warnings;
};

/// Parses `name value` lines ('#' starts a comment). Missing variables default
/// to 0 with a warning. Throws MappingError for unknown names and
/// RejectedSolution if the result fails validate_solution.
ImportedSolution read_solution(const MilpModel& model, std::istream& in);
ImportedSolution import_solution(const MilpModel& model, const std::filesystem::path& path);

void write_solution(const MilpModel& model, const MilpSolution& sol, std::ostream& out);

}  // namespace frostgrid
