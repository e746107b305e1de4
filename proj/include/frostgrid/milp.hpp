#pragma once

#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "frostgrid/errors.hpp"
#include "frostgrid/graph.hpp"
#include "frostgrid/instance.hpp"
#include "frostgrid/plan.hpp"

namespace frostgrid {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class VarKind { Binary, Continuous };
enum class Sense { LessEqual, Equal, GreaterEqual };

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = kInfinity;
};

struct Term {
  int var = 0;
  double coeff = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

/// Solver-agnostic MILP: minimize c'x subject to linear rows and bounds.
class MilpModel {
 public:
  explicit MilpModel(std::string name = "FROSTGRID") : name_(std::move(name)) {}

  /// Binary variables are always given bounds [0, 1].
  int add_variable(const std::string& name, VarKind kind, double lower = 0.0,
                   double upper = kInfinity);
  int add_constraint(const std::string& name, std::vector<Term> terms, Sense sense, double rhs);
  void set_objective(int var, double coeff);

  const std::string& name() const { return name_; }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<double>& objective() const { return objective_; }
  std::optional<int> find_variable(const std::string& name) const;

  int variable_count() const { return static_cast<int>(variables_.size()); }
  int constraint_count() const { return static_cast<int>(constraints_.size()); }
  int binary_count() const;

  /// Replaces the bounds of an existing variable (used by solution fixing).
  void set_bounds(int var, double lower, double upper);

 private:
  std::string name_;
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::vector<double> objective_;
  std::unordered_map<std::string, int> index_;
  std::unordered_map<std::string, int> row_index_;
};

/// Model column ids for every decision family. The dummy terminal is node id
/// `tau` (== number of sites).
struct VariableCatalog {
  int tau = 0;
  std::map<std::pair<int, int>, int> z;  // real edges (i < j) and dummy edges (i, tau)
  std::map<std::pair<int, int>, int> w;  // directed arcs, both orientations
  std::vector<int> ell;                  // per site
  std::vector<int> u;                    // per site, then tau
  std::vector<int> mu_lo;                // per check point
  std::vector<int> mu_hi;
};

enum class SolveStatus { Optimal, Feasible, Infeasible, Unbounded, LimitReached, NumericError };

std::string to_string(SolveStatus s);

struct MilpSolution {
  std::vector<double> values;  // indexed by variable id
  double objective_value = 0.0;
  SolveStatus status = SolveStatus::Feasible;
};

struct Violation {
  enum class Kind { Row, Bound, Integrality };
  Kind kind = Kind::Row;
  std::string name;
  double amount = 0.0;
};

struct ViolationReport {
  std::vector<Violation> items;
  bool empty() const { return items.empty(); }
  std::string describe(std::size_t max_items = 20) const;
};

/// An external or imported solution failed validation.
class RejectedSolution : public Error {
 public:
  explicit RejectedSolution(ViolationReport report);
  const ViolationReport& report() const { return report_; }

 private:
  ViolationReport report_;
};

/// Upper bound used for the node potentials u_i <= cap * l_i.
enum class PotentialCap {
  /// cap = k. Admits every k-node tree including k = 1, 2.
  TreeDepth,
  /// cap = k - 1, as literally written for the original formulation; admits no
  /// solution for k <= 2.
  Verbatim,
};

struct KmstOptions {
  PotentialCap cap = PotentialCap::TreeDepth;
};

/// Adds z/w/l/u variables and the MTZ-style k-MST rows for graph g.
/// Throws InfeasibleParameters when k < 1 or k > node count.
void build_kmst_constraints(const WeightedGraph& g, int k, MilpModel& model, VariableCatalog& cat,
                            KmstOptions options = {});

/// Adds mu_lo/mu_hi and the robust lower/upper coverage rows for each check point.
void build_robust_coverage(const OrchardInstance& inst, const InfluenceMatrix& h, MilpModel& model,
                           VariableCatalog& cat);

/// Sets (1/beta1) * d_e on real z and (alpha/beta2) on every mu; dummy z cost 0.
void build_objective(const OrchardInstance& inst, const WeightedGraph& g, MilpModel& model,
                     const VariableCatalog& cat);

double evaluate_objective(const MilpModel& model, std::span<const double> values);

/// Every row violated beyond tol, every bound violated beyond tol and every
/// binary farther than tol from {0, 1}. Throws MappingError when the value
/// vector does not match the model.
ViolationReport validate_solution(const MilpModel& model, const MilpSolution& sol,
                                  double tol = 1e-6);

/// The full design model for an instance.
struct DesignModel {
  WeightedGraph graph;
  InfluenceMatrix influence;
  MilpModel model;
  VariableCatalog catalog;
};

DesignModel build_design_model(const OrchardInstance& inst, KmstOptions options = {});

/// Converts a feasible solution to a plan; refuses infeasible solutions with
/// RejectedSolution. obj_part2 is the closed-form violation of the selected
/// sites, not the solution's mu values (those are only tight when alpha > 0).
DesignPlan extract_plan(const OrchardInstance& inst, const WeightedGraph& g,
                        const VariableCatalog& cat, const MilpModel& model,
                        const MilpSolution& sol);

/// A complete feasible assignment for a chosen set of k distinct sites: MST
/// edges oriented towards the first site, which attaches to tau; potentials
/// equal tree depth; mu at their smallest feasible values.
std::vector<double> assignment_from_sites(const OrchardInstance& inst, const DesignModel& dm,
                                          std::span<const int> sites);

}  // namespace frostgrid
