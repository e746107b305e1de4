#include "frostgrid/milp.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace frostgrid {

namespace {

std::string id2(const char* prefix, int a, int b) {
  return std::string(prefix) + "_" + std::to_string(a) + "_" + std::to_string(b);
}

std::string id1(const char* prefix, int a) { return std::string(prefix) + "_" + std::to_string(a); }

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::LimitReached: return "limit-reached";
    case SolveStatus::NumericError: return "numeric-error";
  }
  return "numeric-error";
}

int MilpModel::add_variable(const std::string& name, VarKind kind, double lower, double upper) {
  if (name.empty()) throw InvalidArgument("variable name must not be empty");
  if (kind == VarKind::Binary) {
    lower = 0.0;
    upper = 1.0;
  }
  if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
    throw InvalidArgument("bad bounds for variable '" + name + "'");
  }
  const int id = static_cast<int>(variables_.size());
  if (!index_.emplace(name, id).second) throw InvalidArgument("duplicate variable '" + name + "'");
  variables_.push_back({name, kind, lower, upper});
  objective_.push_back(0.0);
  return id;
}

int MilpModel::add_constraint(const std::string& name, std::vector<Term> terms, Sense sense,
                              double rhs) {
  if (name.empty()) throw InvalidArgument("constraint name must not be empty");
  for (const Term& t : terms) {
    if (t.var < 0 || t.var >= variable_count()) {
      throw InvalidArgument("constraint '" + name + "' references an undefined variable");
    }
    if (!std::isfinite(t.coeff)) throw InvalidArgument("non-finite coefficient in '" + name + "'");
  }
  if (!std::isfinite(rhs)) throw InvalidArgument("non-finite rhs in '" + name + "'");
  const int id = static_cast<int>(constraints_.size());
  if (!row_index_.emplace(name, id).second) {
    throw InvalidArgument("duplicate constraint '" + name + "'");
  }
  constraints_.push_back({name, std::move(terms), sense, rhs});
  return id;
}

void MilpModel::set_objective(int var, double coeff) {
  if (var < 0 || var >= variable_count()) throw InvalidArgument("objective references an undefined variable");
  objective_[var] = coeff;
}

std::optional<int> MilpModel::find_variable(const std::string& name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int MilpModel::binary_count() const {
  return static_cast<int>(std::count_if(variables_.begin(), variables_.end(),
                                        [](const Variable& v) { return v.kind == VarKind::Binary; }));
}

void MilpModel::set_bounds(int var, double lower, double upper) {
  if (var < 0 || var >= variable_count() || lower > upper) throw InvalidArgument("bad bound update");
  variables_[var].lower = lower;
  variables_[var].upper = upper;
}

std::string ViolationReport::describe(std::size_t max_items) const {
  std::ostringstream os;
  os << items.size() << " violation(s)";
  for (std::size_t i = 0; i < items.size() && i < max_items; ++i) {
    const auto& v = items[i];
    const char* kind = v.kind == Violation::Kind::Row       ? "row"
                       : v.kind == Violation::Kind::Bound   ? "bound"
                                                            : "integrality";
    os << "\n  " << kind << " " << v.name << ": " << v.amount;
  }
  if (items.size() > max_items) os << "\n  ...";
  return os.str();
}

RejectedSolution::RejectedSolution(ViolationReport report)
    : Error("solution rejected: " + report.describe()), report_(std::move(report)) {}

void build_kmst_constraints(const WeightedGraph& g, int k, MilpModel& model, VariableCatalog& cat,
                            KmstOptions options) {
  const int n = g.node_count();
  if (k < 1) throw InfeasibleParameters("k must be at least 1");
  if (k > n) {
    throw InfeasibleParameters("k = " + std::to_string(k) + " exceeds the " + std::to_string(n) +
                               " graph nodes");
  }
  const int tau = n;
  const double cap = options.cap == PotentialCap::TreeDepth ? k : k - 1;
  cat = VariableCatalog{};
  cat.tau = tau;

  std::vector<Edge> edges = g.edges();
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });

  for (const Edge& e : edges) cat.z[{e.i, e.j}] = model.add_variable(id2("z", e.i, e.j), VarKind::Binary);
  for (int i = 0; i < n; ++i) cat.z[{i, tau}] = model.add_variable(id2("z", i, tau), VarKind::Binary);
  for (const Edge& e : edges) {
    cat.w[{e.i, e.j}] = model.add_variable(id2("w", e.i, e.j), VarKind::Binary);
    cat.w[{e.j, e.i}] = model.add_variable(id2("w", e.j, e.i), VarKind::Binary);
  }
  for (int i = 0; i < n; ++i) {
    cat.w[{i, tau}] = model.add_variable(id2("w", i, tau), VarKind::Binary);
    cat.w[{tau, i}] = model.add_variable(id2("w", tau, i), VarKind::Binary);
  }
  for (int i = 0; i < n; ++i) cat.ell.push_back(model.add_variable(id1("l", i), VarKind::Binary));
  for (int i = 0; i <= n; ++i) {
    cat.u.push_back(model.add_variable(id1("u", i), VarKind::Continuous, 0.0, std::max(cap, 0.0)));
  }

  // Undirected edge is used iff one of its arcs is.
  for (const Edge& e : edges) {
    model.add_constraint(id2("link", e.i, e.j),
                         {{cat.z.at({e.i, e.j}), 1.0}, {cat.w.at({e.i, e.j}), -1.0},
                          {cat.w.at({e.j, e.i}), -1.0}},
                         Sense::Equal, 0.0);
  }
  for (int i = 0; i < n; ++i) {
    model.add_constraint(id2("link", i, tau),
                         {{cat.z.at({i, tau}), 1.0}, {cat.w.at({i, tau}), -1.0},
                          {cat.w.at({tau, i}), -1.0}},
                         Sense::Equal, 0.0);
  }

  // Outgoing arcs per node, tau included as head.
  std::vector<std::vector<Term>> out_terms(n), in_terms(n);
  for (const Edge& e : edges) {
    out_terms[e.i].push_back({cat.w.at({e.i, e.j}), 1.0});
    out_terms[e.j].push_back({cat.w.at({e.j, e.i}), 1.0});
    in_terms[e.j].push_back({cat.w.at({e.i, e.j}), 1.0});
    in_terms[e.i].push_back({cat.w.at({e.j, e.i}), 1.0});
  }
  for (int i = 0; i < n; ++i) {
    auto terms = out_terms[i];
    terms.push_back({cat.w.at({i, tau}), 1.0});
    terms.push_back({cat.ell[i], -1.0});
    model.add_constraint(id1("out", i), std::move(terms), Sense::Equal, 0.0);
  }
  for (int i = 0; i < n; ++i) {
    auto terms = in_terms[i];
    terms.push_back({cat.ell[i], -static_cast<double>(k - 1)});
    model.add_constraint(id1("in", i), std::move(terms), Sense::LessEqual, 0.0);
  }

  std::vector<Term> from_tau, into_tau;
  for (int i = 0; i < n; ++i) {
    from_tau.push_back({cat.w.at({tau, i}), 1.0});
    into_tau.push_back({cat.w.at({i, tau}), 1.0});
  }
  model.add_constraint("tau_out", std::move(from_tau), Sense::Equal, 0.0);
  model.add_constraint("tau_in", std::move(into_tau), Sense::Equal, 1.0);

  // u_i >= u_j + w_ij - k (1 - w_ij)  <=>  u_i - u_j - (k + 1) w_ij >= -k
  const double big = static_cast<double>(k);
  auto add_mtz = [&](int i, int j) {
    model.add_constraint(id2("mtz", i, j),
                         {{cat.u[i], 1.0}, {cat.u[j], -1.0}, {cat.w.at({i, j}), -(big + 1.0)}},
                         Sense::GreaterEqual, -big);
  };
  for (const Edge& e : edges) {
    add_mtz(e.i, e.j);
    add_mtz(e.j, e.i);
  }
  for (int i = 0; i < n; ++i) add_mtz(i, tau);

  model.add_constraint("u_tau", {{cat.u[tau], 1.0}}, Sense::Equal, 0.0);
  for (int i = 0; i < n; ++i) {
    model.add_constraint(id1("pot_hi", i), {{cat.u[i], 1.0}, {cat.ell[i], -cap}}, Sense::LessEqual, 0.0);
  }
  for (int i = 0; i < n; ++i) {
    model.add_constraint(id1("pot_lo", i), {{cat.u[i], 1.0}, {cat.ell[i], -1.0}}, Sense::GreaterEqual,
                         0.0);
  }

  std::vector<Term> card;
  for (int i = 0; i < n; ++i) card.push_back({cat.ell[i], 1.0});
  model.add_constraint("card", std::move(card), Sense::Equal, static_cast<double>(k));
}

void build_robust_coverage(const OrchardInstance& inst, const InfluenceMatrix& h, MilpModel& model,
                           VariableCatalog& cat) {
  if (h.rows() != inst.site_count() || h.cols() != inst.cp_count()) {
    throw InvalidArgument("influence matrix does not match the instance");
  }
  if (cat.ell.size() != inst.site_count()) {
    throw InvalidArgument("k-MST variables must be built over the instance's candidate sites");
  }
  const std::size_t ncp = inst.cp_count();
  cat.mu_lo.clear();
  cat.mu_hi.clear();
  for (std::size_t s = 0; s < ncp; ++s) {
    cat.mu_lo.push_back(model.add_variable(id1("mul", static_cast<int>(s)), VarKind::Continuous));
  }
  for (std::size_t s = 0; s < ncp; ++s) {
    cat.mu_hi.push_back(model.add_variable(id1("muh", static_cast<int>(s)), VarKind::Continuous));
  }
  for (std::size_t s = 0; s < ncp; ++s) {
    // f_lo - mu_lo <= sum l_i ku_lo_i h_is
    std::vector<Term> terms;
    for (std::size_t i = 0; i < inst.site_count(); ++i) {
      terms.push_back({cat.ell[i], inst.ku_lo[i] * h(i, s)});
    }
    terms.push_back({cat.mu_lo[s], 1.0});
    model.add_constraint(id1("cov_lo", static_cast<int>(s)), std::move(terms), Sense::GreaterEqual,
                         inst.f_lo);
  }
  for (std::size_t s = 0; s < ncp; ++s) {
    // sum l_i ku_hi_i h_is <= f_hi + mu_hi
    std::vector<Term> terms;
    for (std::size_t i = 0; i < inst.site_count(); ++i) {
      terms.push_back({cat.ell[i], inst.ku_hi[i] * h(i, s)});
    }
    terms.push_back({cat.mu_hi[s], -1.0});
    model.add_constraint(id1("cov_hi", static_cast<int>(s)), std::move(terms), Sense::LessEqual,
                         inst.f_hi);
  }
}

void build_objective(const OrchardInstance& inst, const WeightedGraph& g, MilpModel& model,
                     const VariableCatalog& cat) {
  if (!(inst.beta1_nor > 0.0) || !(inst.beta2_nor > 0.0)) {
    throw InvalidArgument("normalization parameters must be positive");
  }
  for (const Edge& e : g.edges()) model.set_objective(cat.z.at({e.i, e.j}), e.weight / inst.beta1_nor);
  for (int i = 0; i < cat.tau; ++i) model.set_objective(cat.z.at({i, cat.tau}), 0.0);
  const double penalty = inst.alpha / inst.beta2_nor;
  for (int v : cat.mu_lo) model.set_objective(v, penalty);
  for (int v : cat.mu_hi) model.set_objective(v, penalty);
}

double evaluate_objective(const MilpModel& model, std::span<const double> values) {
  double total = 0.0;
  const auto& c = model.objective();
  for (std::size_t j = 0; j < c.size(); ++j) total += c[j] * values[j];
  return total;
}

ViolationReport validate_solution(const MilpModel& model, const MilpSolution& sol, double tol) {
  if (sol.values.size() != model.variables().size()) {
    throw MappingError("solution has " + std::to_string(sol.values.size()) +
                       " values but the model has " + std::to_string(model.variables().size()) +
                       " variables");
  }
  ViolationReport report;
  const auto& vars = model.variables();
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const double x = sol.values[j];
    if (!std::isfinite(x)) {
      report.items.push_back({Violation::Kind::Bound, vars[j].name, kInfinity});
      continue;
    }
    const double below = vars[j].lower - x;
    const double above = x - vars[j].upper;
    if (below > tol || above > tol) {
      report.items.push_back({Violation::Kind::Bound, vars[j].name, std::max(below, above)});
    }
    if (vars[j].kind == VarKind::Binary) {
      const double off = std::min(std::abs(x), std::abs(x - 1.0));
      if (off > tol) report.items.push_back({Violation::Kind::Integrality, vars[j].name, off});
    }
  }
  for (const Constraint& row : model.constraints()) {
    double activity = 0.0;
    for (const Term& t : row.terms) activity += t.coeff * sol.values[t.var];
    double excess = 0.0;
    switch (row.sense) {
      case Sense::LessEqual: excess = activity - row.rhs; break;
      case Sense::GreaterEqual: excess = row.rhs - activity; break;
      case Sense::Equal: excess = std::abs(activity - row.rhs); break;
    }
    if (!(excess <= tol)) report.items.push_back({Violation::Kind::Row, row.name, excess});
  }
  return report;
}

DesignModel build_design_model(const OrchardInstance& inst, KmstOptions options) {
  inst.validate();
  DesignModel dm;
  dm.graph = complete_graph(inst.candidate_sites);
  dm.influence = build_influence_matrix(inst);
  build_kmst_constraints(dm.graph, inst.k, dm.model, dm.catalog, options);
  build_robust_coverage(inst, dm.influence, dm.model, dm.catalog);
  build_objective(inst, dm.graph, dm.model, dm.catalog);
  return dm;
}

DesignPlan extract_plan(const OrchardInstance& inst, const WeightedGraph& g,
                        const VariableCatalog& cat, const MilpModel& model,
                        const MilpSolution& sol) {
  ViolationReport report = validate_solution(model, sol);
  if (!report.empty()) throw RejectedSolution(std::move(report));

  DesignPlan plan;
  plan.provenance = Provenance::Milp;
  plan.alpha = inst.alpha;
  std::vector<int> heater_of(cat.ell.size(), -1);
  std::vector<int> sites;
  for (std::size_t i = 0; i < cat.ell.size(); ++i) {
    if (sol.values[cat.ell[i]] > 0.5) {
      heater_of[i] = static_cast<int>(sites.size());
      sites.push_back(static_cast<int>(i));
      plan.heaters.push_back(inst.candidate_sites.at(i));
    }
  }
  plan.site_ids = sites;
  for (const Edge& e : g.edges()) {
    if (sol.values[cat.z.at({e.i, e.j})] > 0.5) {
      if (heater_of[e.i] < 0 || heater_of[e.j] < 0) {
        throw RejectedSolution(ViolationReport{
            {{Violation::Kind::Row, id2("z", e.i, e.j) + " joins an unselected site", 1.0}}});
      }
      plan.pipe_edges.emplace_back(heater_of[e.i], heater_of[e.j]);
    }
  }
  plan.obj_part1_m = pipe_length(plan);
  // Tight slacks of the chosen sites. They equal the solver's mu at an optimum
  // with alpha > 0; with alpha = 0 the solver's mu are arbitrary.
  double mu_sum = 0.0;
  for (std::size_t s = 0; s < inst.cp_count(); ++s) {
    double lo = 0.0;
    double hi = 0.0;
    for (int i : sites) {
      const double h = influence(inst.candidate_sites[i], inst.check_points[s], inst.k_tun);
      lo += inst.ku_lo[i] * h;
      hi += inst.ku_hi[i] * h;
    }
    mu_sum += std::max(0.0, inst.f_lo - lo) + std::max(0.0, hi - inst.f_hi);
  }
  plan.obj_part2 = inst.cp_count() == 0 ? 0.0 : mu_sum / static_cast<double>(inst.cp_count());
  validate_plan_structure(plan);
  return plan;
}

std::vector<double> assignment_from_sites(const OrchardInstance& inst, const DesignModel& dm,
                                          std::span<const int> sites) {
  const auto& cat = dm.catalog;
  std::vector<double> x(dm.model.variable_count(), 0.0);
  if (sites.empty()) throw InvalidArgument("need at least one site");
  const TreeSolution tree = kruskal_mst(dm.graph, sites);
  if (tree.nodes.size() != sites.size()) throw InvalidArgument("sites must be distinct");

  std::map<int, std::vector<int>> adj;
  for (auto [a, b] : tree.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
    x[cat.z.at({a, b})] = 1.0;
  }
  const int root = sites.front();
  const int tau = cat.tau;
  x[cat.w.at({root, tau})] = 1.0;
  x[cat.z.at({root, tau})] = 1.0;

  std::map<int, int> depth{{root, 1}};
  std::queue<int> frontier;
  frontier.push(root);
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int c : adj[v]) {
      if (depth.count(c)) continue;
      depth[c] = depth[v] + 1;
      x[cat.w.at({c, v})] = 1.0;  // child points towards the root
      frontier.push(c);
    }
  }
  for (auto [v, d] : depth) {
    x[cat.ell[v]] = 1.0;
    x[cat.u[v]] = static_cast<double>(d);
  }
  std::vector<int> ordered(sites.begin(), sites.end());
  std::sort(ordered.begin(), ordered.end());
  for (std::size_t s = 0; s < cat.mu_lo.size(); ++s) {
    double lo = 0.0;
    double hi = 0.0;
    for (int i : ordered) {
      lo += inst.ku_lo[i] * dm.influence(i, s);
      hi += inst.ku_hi[i] * dm.influence(i, s);
    }
    x[cat.mu_lo[s]] = std::max(0.0, inst.f_lo - lo);
    x[cat.mu_hi[s]] = std::max(0.0, hi - inst.f_hi);
  }
  return x;
}

}  // namespace frostgrid
