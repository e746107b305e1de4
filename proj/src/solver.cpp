#include "frostgrid/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <mutex>
#include <queue>
#include <set>
#include <thread>

#include "frostgrid/lp.hpp"

namespace frostgrid {

namespace {

using Clock = std::chrono::steady_clock;

// Dense tableau entries the built-in engine is willing to allocate.
constexpr double kMaxTableauEntries = 6e7;
constexpr double kIntegralityTol = 1e-6;

struct BoundChange {
  int var = 0;
  double value = 0.0;  // binaries are fixed to 0 or 1
};

struct Node {
  long id = 0;
  int depth = 0;
  double bound = -kInfinity;
  std::vector<BoundChange> fixes;
};

// Lowest bound first, then deeper, then older.
struct NodeAfter {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

struct SearchState {
  std::mutex mu;
  std::condition_variable cv;
  std::priority_queue<Node, std::vector<Node>, NodeAfter> frontier;
  std::multiset<double> active_bounds;
  int active = 0;
  long next_id = 1;
  long nodes = 0;
  long lp_iterations = 0;

  std::optional<std::vector<double>> incumbent;
  double incumbent_obj = kInfinity;
  // Smallest bound among nodes discarded only because of the gap tolerance.
  double pruned_floor = kInfinity;

  bool stop = false;
  bool hit_limit = false;
  bool gap_closed = false;
  bool numeric = false;
  bool unbounded = false;
};

class BranchAndBound {
 public:
  BranchAndBound(const MilpModel& model, const SolveConfig& cfg)
      : model_(model), cfg_(cfg), start_(Clock::now()),
        deadline_(start_ + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(cfg.time_limit_s))) {
    for (int j = 0; j < model.variable_count(); ++j) {
      if (model.variables()[j].kind == VarKind::Binary) binaries_.push_back(j);
    }
  }

  SolveResult run(const std::optional<std::vector<double>>& initial);

 private:
  double prune_tol(double incumbent) const {
    return std::max(cfg_.abs_tol, cfg_.rel_gap_tol * std::max(std::abs(incumbent), 1e-9));
  }
  void offer_incumbent(std::vector<double> values);  // caller holds the lock
  double global_bound_locked() const;
  void worker(lp::DualSimplex engine);
  bool apply_node(lp::DualSimplex& engine, std::vector<double>& current, const Node& node);
  std::optional<std::vector<double>> polish(lp::DualSimplex& engine, std::vector<double>& current,
                                            const std::vector<double>& lp_x);

  const MilpModel& model_;
  SolveConfig cfg_;
  Clock::time_point start_;
  Clock::time_point deadline_;
  std::vector<int> binaries_;
  SearchState st_;
};

void BranchAndBound::offer_incumbent(std::vector<double> values) {
  MilpSolution candidate{values, evaluate_objective(model_, values), SolveStatus::Feasible};
  if (!validate_solution(model_, candidate, kIntegralityTol).empty()) return;
  if (candidate.objective_value < st_.incumbent_obj) {
    st_.incumbent_obj = candidate.objective_value;
    st_.incumbent = std::move(values);
  }
}

double BranchAndBound::global_bound_locked() const {
  double bound = std::min(st_.incumbent_obj, st_.pruned_floor);
  if (!st_.frontier.empty()) bound = std::min(bound, st_.frontier.top().bound);
  if (!st_.active_bounds.empty()) bound = std::min(bound, *st_.active_bounds.begin());
  return bound;
}

bool BranchAndBound::apply_node(lp::DualSimplex& engine, std::vector<double>& current,
                                const Node& node) {
  // `current` holds the value each binary is fixed to, or NaN when free.
  std::vector<double> target(model_.variable_count(), std::nan(""));
  for (const BoundChange& c : node.fixes) target[c.var] = c.value;
  for (int j : binaries_) {
    const bool same = (std::isnan(target[j]) && std::isnan(current[j])) || target[j] == current[j];
    if (same) continue;
    if (std::isnan(target[j])) {
      engine.set_bounds(j, model_.variables()[j].lower, model_.variables()[j].upper);
    } else {
      engine.set_bounds(j, target[j], target[j]);
    }
    current[j] = target[j];
  }
  return true;
}

std::optional<std::vector<double>> BranchAndBound::polish(lp::DualSimplex& engine,
                                                          std::vector<double>& current,
                                                          const std::vector<double>& lp_x) {
  for (int j : binaries_) {
    const double v = lp_x[j] > 0.5 ? 1.0 : 0.0;
    if (current[j] != v) {
      engine.set_bounds(j, v, v);
      current[j] = v;
    }
  }
  lp::LpOptions opt;
  opt.deadline = deadline_;
  const lp::LpResult res = engine.solve(opt);
  {
    std::lock_guard lock(st_.mu);
    st_.lp_iterations += res.iterations;
  }
  if (res.status != lp::LpStatus::Optimal) return std::nullopt;
  std::vector<double> x = res.x;
  for (int j : binaries_) x[j] = current[j];
  return x;
}

void BranchAndBound::worker(lp::DualSimplex engine) {
  std::vector<double> current(model_.variable_count(), std::nan(""));
  for (;;) {
    Node node;
    double cutoff = kInfinity;
    {
      std::unique_lock lock(st_.mu);
      st_.cv.wait(lock, [&] { return st_.stop || !st_.frontier.empty() || st_.active == 0; });
      if (st_.stop || (st_.frontier.empty() && st_.active == 0)) {
        st_.cv.notify_all();
        return;
      }
      if (Clock::now() >= deadline_ || (cfg_.node_limit && st_.nodes >= *cfg_.node_limit)) {
        st_.stop = st_.hit_limit = true;
        st_.cv.notify_all();
        return;
      }
      if (st_.incumbent) {
        const double bound = global_bound_locked();
        if (relative_gap(st_.incumbent_obj, bound) <= cfg_.rel_gap_tol ||
            st_.incumbent_obj - bound <= cfg_.abs_tol) {
          st_.stop = st_.gap_closed = true;
          st_.cv.notify_all();
          return;
        }
      }
      node = st_.frontier.top();
      st_.frontier.pop();
      if (st_.incumbent && node.bound >= st_.incumbent_obj - prune_tol(st_.incumbent_obj)) {
        if (node.bound < st_.incumbent_obj) st_.pruned_floor = std::min(st_.pruned_floor, node.bound);
        continue;
      }
      cutoff = st_.incumbent ? st_.incumbent_obj - prune_tol(st_.incumbent_obj) : kInfinity;
      ++st_.active;
      st_.active_bounds.insert(node.bound);
      ++st_.nodes;
    }

    apply_node(engine, current, node);
    lp::LpOptions opt;
    opt.deadline = deadline_;
    opt.cutoff = cutoff;
    lp::LpResult res;
    bool numeric = false;
    try {
      res = engine.solve(opt);
    } catch (const SolverError&) {
      numeric = true;
    }

    // Branching decision outside the lock.
    int branch_var = -1;
    std::optional<std::vector<double>> integral;
    if (!numeric && res.status == lp::LpStatus::Optimal) {
      double best_frac = kIntegralityTol;
      for (int j : binaries_) {
        const double v = res.x[j];
        const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
        if (frac > best_frac) {
          best_frac = frac;
          branch_var = j;
        }
      }
      if (branch_var < 0) {
        try {
          integral = polish(engine, current, res.x);
        } catch (const SolverError&) {
          numeric = true;
        }
      }
    }

    std::lock_guard lock(st_.mu);
    --st_.active;
    st_.active_bounds.erase(st_.active_bounds.find(node.bound));
    st_.lp_iterations += res.iterations;
    if (numeric || res.status == lp::LpStatus::Numeric || res.status == lp::LpStatus::IterationLimit) {
      st_.frontier.push(node);
      st_.numeric = st_.stop = true;
    } else if (res.status == lp::LpStatus::TimeLimit) {
      st_.frontier.push(node);
      st_.hit_limit = st_.stop = true;
    } else if (res.status == lp::LpStatus::Unbounded) {
      st_.unbounded = st_.stop = true;
    } else if (res.status == lp::LpStatus::Cutoff) {
      if (res.objective < st_.incumbent_obj) {
        st_.pruned_floor = std::min(st_.pruned_floor, std::max(node.bound, res.objective));
      }
    } else if (res.status == lp::LpStatus::Optimal) {
      const double bound = std::max(node.bound, res.objective);
      if (branch_var < 0) {
        if (integral) offer_incumbent(std::move(*integral));
        // A failed polish leaves the node's bound unresolved.
        else if (bound < st_.incumbent_obj) st_.pruned_floor = std::min(st_.pruned_floor, bound);
      } else if (!(st_.incumbent && bound >= st_.incumbent_obj - prune_tol(st_.incumbent_obj))) {
        for (double value : {1.0, 0.0}) {
          Node child;
          child.id = st_.next_id++;
          child.depth = node.depth + 1;
          child.bound = bound;
          child.fixes = node.fixes;
          child.fixes.push_back({branch_var, value});
          st_.frontier.push(std::move(child));
        }
      } else if (bound < st_.incumbent_obj) {
        st_.pruned_floor = std::min(st_.pruned_floor, bound);
      }
    }
    // Infeasible: nothing to do.
    st_.cv.notify_all();
  }
}

SolveResult BranchAndBound::run(const std::optional<std::vector<double>>& initial) {
  SolveResult result;
  const double entries = static_cast<double>(model_.constraint_count()) *
                         (static_cast<double>(model_.variable_count()) + model_.constraint_count());
  if (entries > kMaxTableauEntries) {
    throw SolverError("model with " + std::to_string(model_.variable_count()) + " columns and " +
                      std::to_string(model_.constraint_count()) +
                      " rows is too large for the built-in dense solver; export it as MPS");
  }

  if (initial) {
    if (initial->size() != static_cast<std::size_t>(model_.variable_count())) {
      throw MappingError("initial assignment does not match the model");
    }
    offer_incumbent(*initial);
  }

  lp::DualSimplex root(model_);
  lp::LpOptions opt;
  opt.deadline = deadline_;
  lp::LpResult root_lp;
  try {
    root_lp = root.solve(opt);
  } catch (const SolverError&) {
    root_lp.status = lp::LpStatus::Numeric;
  }
  st_.lp_iterations += root_lp.iterations;
  result.root_bound = root_lp.status == lp::LpStatus::Optimal ? root_lp.objective : -kInfinity;

  bool run_search = true;
  switch (root_lp.status) {
    case lp::LpStatus::Optimal: break;
    case lp::LpStatus::Infeasible:
      st_.incumbent.reset();
      st_.incumbent_obj = kInfinity;
      run_search = false;
      break;
    case lp::LpStatus::Unbounded: st_.unbounded = true; run_search = false; break;
    case lp::LpStatus::TimeLimit: st_.hit_limit = true; run_search = false; break;
    default: st_.numeric = true; run_search = false; break;
  }

  if (run_search) {
    st_.frontier.push(Node{0, 0, root_lp.objective, {}});
    const int workers = std::max(1, cfg_.worker_count);
    if (workers == 1) {
      worker(std::move(root));
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back([this, copy = root]() mutable { worker(std::move(copy)); });
      for (auto& th : pool) th.join();
    }
  } else if (root_lp.status == lp::LpStatus::TimeLimit) {
    st_.frontier.push(Node{0, 0, -kInfinity, {}});
  }

  result.nodes_explored = st_.nodes;
  result.lp_iterations = st_.lp_iterations;
  result.wall_time_s = std::chrono::duration<double>(Clock::now() - start_).count();
  const bool exhausted = st_.frontier.empty() && !st_.hit_limit;
  if (st_.incumbent) {
    result.incumbent_obj = st_.incumbent_obj;
    result.solution = MilpSolution{*st_.incumbent, st_.incumbent_obj, SolveStatus::Feasible};
  }
  if (root_lp.status == lp::LpStatus::Infeasible) {
    result.status = SolveStatus::Infeasible;
    result.best_bound = kInfinity;
  } else if (st_.unbounded) {
    result.status = SolveStatus::Unbounded;
    result.best_bound = -kInfinity;
  } else if (st_.numeric) {
    result.status = SolveStatus::NumericError;
    result.best_bound = global_bound_locked();
  } else if (exhausted || st_.gap_closed) {
    result.status = st_.incumbent ? SolveStatus::Optimal : SolveStatus::Infeasible;
    result.best_bound = st_.incumbent ? global_bound_locked() : kInfinity;
  } else {
    result.status = st_.incumbent ? SolveStatus::Feasible : SolveStatus::LimitReached;
    result.best_bound = global_bound_locked();
  }
  if (st_.numeric) result.best_bound = std::min(result.best_bound, result.root_bound);
  if (result.incumbent_obj) {
    result.best_bound = std::min(result.best_bound, *result.incumbent_obj);
    result.rel_gap = relative_gap(*result.incumbent_obj, result.best_bound);
  }
  if (result.solution) result.solution->status = result.status;
  return result;
}

}  // namespace

void SolveConfig::validate() const {
  if (!(time_limit_s > 0.0)) throw InvalidArgument("time limit must be positive");
  if (!(rel_gap_tol >= 0.0)) throw InvalidArgument("relative gap tolerance must be >= 0");
  if (!(abs_tol >= 0.0)) throw InvalidArgument("absolute tolerance must be >= 0");
  if (node_limit && *node_limit <= 0) throw InvalidArgument("node limit must be positive");
  if (worker_count < 1) throw InvalidArgument("worker count must be at least 1");
}

double relative_gap(double incumbent, double bound) {
  return (incumbent - bound) / std::max(std::abs(incumbent), 1e-9);
}

SolveResult solve(const MilpModel& model, const SolveConfig& cfg,
                  const std::optional<std::vector<double>>& initial) {
  cfg.validate();
  BranchAndBound bnb(model, cfg);
  return bnb.run(initial);
}

SolveResult solve_lp_relaxation(const MilpModel& model, const SolveConfig& cfg) {
  cfg.validate();
  const auto start = Clock::now();
  lp::DualSimplex engine(model);
  lp::LpOptions opt;
  opt.deadline = start + std::chrono::duration_cast<Clock::duration>(
                             std::chrono::duration<double>(cfg.time_limit_s));
  const lp::LpResult res = engine.solve(opt);
  SolveResult out;
  out.lp_iterations = res.iterations;
  out.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
  switch (res.status) {
    case lp::LpStatus::Optimal:
      out.status = SolveStatus::Optimal;
      out.best_bound = res.objective;
      out.root_bound = res.objective;
      out.solution = MilpSolution{res.x, res.objective, SolveStatus::Optimal};
      break;
    case lp::LpStatus::Infeasible: out.status = SolveStatus::Infeasible; out.best_bound = kInfinity; break;
    case lp::LpStatus::Unbounded: out.status = SolveStatus::Unbounded; break;
    case lp::LpStatus::TimeLimit: out.status = SolveStatus::LimitReached; break;
    default: out.status = SolveStatus::NumericError; break;
  }
  return out;
}

}  // namespace frostgrid
