// frostgrid command-line tool: generate instances, solve, run the heuristic,
// sweep alpha, run the exhaustive oracle, evaluate and render plans.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "frostgrid/errors.hpp"
#include "frostgrid/evaluation.hpp"
#include "frostgrid/format.hpp"
#include "frostgrid/heuristic.hpp"
#include "frostgrid/io.hpp"
#include "frostgrid/render.hpp"
#include "frostgrid/solver.hpp"

namespace fg = frostgrid;

namespace {

enum Exit : int {
  kOk = 0,
  kInvalidInput = 2,
  kInfeasible = 3,
  kLimitNoIncumbent = 4,
  kInternal = 5,
};

struct SolveFlags {
  double time_limit = 60.0;
  double gap = 1e-4;
  int workers = 1;
  long node_limit = -1;
};

void add_solve_flags(CLI::App* cmd, SolveFlags& f) {
  cmd->add_option("--time-limit", f.time_limit, "Wall-clock limit per solve in seconds")->capture_default_str();
  cmd->add_option("--gap", f.gap, "Relative optimality gap tolerance")->capture_default_str();
  cmd->add_option("--workers", f.workers, "Worker threads (FROSTGRID_WORKERS overrides)")->capture_default_str();
  cmd->add_option("--node-limit", f.node_limit, "Branch-and-bound node limit (-1: none)");
}

int env_workers(int fallback) {
  const char* env = std::getenv("FROSTGRID_WORKERS");
  if (!env || !*env) return fallback;
  try {
    const int n = std::stoi(env);
    if (n < 1) throw std::invalid_argument("");
    return n;
  } catch (const std::exception&) {
    throw fg::InvalidArgument(std::string("FROSTGRID_WORKERS must be a positive integer, got '") + env + "'");
  }
}

fg::SolveConfig make_config(const SolveFlags& f) {
  fg::SolveConfig cfg;
  cfg.time_limit_s = f.time_limit;
  cfg.rel_gap_tol = f.gap;
  cfg.worker_count = env_workers(f.workers);
  if (f.node_limit >= 0) cfg.node_limit = f.node_limit;
  cfg.validate();
  return cfg;
}

int exit_for(fg::SolveStatus s, bool has_incumbent) {
  switch (s) {
    case fg::SolveStatus::Optimal:
    case fg::SolveStatus::Feasible:
      return kOk;
    case fg::SolveStatus::LimitReached:
      return has_incumbent ? kOk : kLimitNoIncumbent;
    case fg::SolveStatus::Infeasible:
    case fg::SolveStatus::Unbounded:
      return kInfeasible;
    case fg::SolveStatus::NumericError:
      return kInternal;
  }
  return kInternal;
}

void print_plan_summary(const fg::DesignPlan& plan) {
  std::cerr << "heaters: " << plan.heaters.size() << "  pipe length: " << fg::format_double(plan.obj_part1_m)
            << " m";
  if (plan.obj_part2) std::cerr << "  avg violation: " << fg::format_double(*plan.obj_part2);
  std::cerr << "\n";
}

// ---- generate ---------------------------------------------------------------

struct GenerateArgs {
  fg::GridParams params;
  std::string out;
};

int run_generate(const GenerateArgs& a) {
  const fg::OrchardInstance inst = fg::generate_instance(a.params);
  fg::save_instance(inst, a.out);
  std::cerr << "trees: " << inst.trees.size() << "  sites: " << inst.site_count()
            << "  check points: " << inst.cp_count() << "\n";
  return kOk;
}

// ---- solve ------------------------------------------------------------------

struct SolveArgs {
  std::string instance;
  std::string out;
  std::string export_mps;
  std::string import_solution;
  double alpha = -1.0;
  bool no_warm_start = false;
  SolveFlags flags;
};

int run_solve(const SolveArgs& a) {
  fg::OrchardInstance inst = fg::load_instance(a.instance);
  if (a.alpha >= 0.0) inst.alpha = a.alpha;
  const std::string digest = fg::instance_digest(inst);

  if (!a.export_mps.empty() || !a.import_solution.empty()) {
    const fg::DesignModel dm = fg::build_design_model(inst);
    if (!a.export_mps.empty()) {
      fg::export_mps(dm.model, a.export_mps);
      std::cerr << "wrote " << a.export_mps << " (" << dm.model.variable_count() << " columns, "
                << dm.model.constraint_count() << " rows)\n";
    }
    if (!a.import_solution.empty()) {
      const fg::ImportedSolution imp = fg::import_solution(dm.model, a.import_solution);
      for (const std::string& w : imp.warnings) std::cerr << "warning: " << w << "\n";
      fg::DesignPlan plan = fg::extract_plan(inst, dm.graph, dm.catalog, dm.model, imp.solution);
      plan.provenance = fg::Provenance::Imported;
      if (a.out.empty()) throw fg::InvalidArgument("--import-solution needs --out");
      fg::save_plan({plan, digest, std::nullopt, std::nullopt}, a.out);
      print_plan_summary(plan);
      return kOk;
    }
    if (a.out.empty()) return kOk;  // export only
  }
  if (a.out.empty()) throw fg::InvalidArgument("solve needs --out (or --export-mps alone)");

  const fg::DesignRun run = fg::solve_design(inst, make_config(a.flags), !a.no_warm_start);
  const fg::SolveResult& r = run.result;
  std::cerr << "status: " << fg::to_string(r.status) << "  nodes: " << r.nodes_explored
            << "  bound: " << fg::format_double(r.best_bound);
  if (r.incumbent_obj) std::cerr << "  incumbent: " << fg::format_double(*r.incumbent_obj);
  std::cerr << "  gap: " << fg::format_double(r.rel_gap) << "  time: " << fg::format_double(r.wall_time_s)
            << " s\n";
  const int code = exit_for(r.status, run.plan.has_value());
  if (code == kOk && run.plan) {
    fg::save_plan({*run.plan, digest, fg::to_string(r.status), r.rel_gap}, a.out);
    print_plan_summary(*run.plan);
  }
  return code;
}

// ---- heuristic / oracle -----------------------------------------------------

struct HeuristicArgs {
  std::string instance;
  std::string out;
  bool snap = false;
};

int run_heuristic(const HeuristicArgs& a) {
  const fg::OrchardInstance inst = fg::load_instance(a.instance);
  fg::DesignPlan plan = fg::heuristic_plan(inst);
  if (a.snap) {
    const std::vector<int> sites = fg::snap_to_sites(inst, plan.heaters);
    fg::DesignPlan snapped;
    snapped.provenance = fg::Provenance::Heuristic;
    snapped.alpha = inst.alpha;
    snapped.site_ids = sites;
    for (int s : sites) snapped.heaters.push_back(inst.candidate_sites[s]);
    snapped.pipe_edges = fg::kruskal_mst(fg::complete_graph(snapped.heaters)).edges;
    snapped.obj_part1_m = fg::pipe_length(snapped);
    plan = std::move(snapped);
  }
  plan.obj_part2 = fg::worst_case_violations(plan, inst).obj_part2;
  fg::save_plan({plan, fg::instance_digest(inst), std::nullopt, std::nullopt}, a.out);
  print_plan_summary(plan);
  return kOk;
}

struct OracleArgs {
  std::string instance;
  std::string out;
  double alpha = -1.0;
  std::uint64_t budget = fg::kOracleBudget;
};

int run_oracle(const OracleArgs& a) {
  const fg::OrchardInstance inst = fg::load_instance(a.instance);
  const double alpha = a.alpha >= 0.0 ? a.alpha : inst.alpha;
  const fg::OracleResult res = fg::exhaustive_oracle(inst, alpha, fg::Execution::Parallel, a.budget);
  std::cerr << "subsets: " << res.subsets << "  objective: " << fg::format_double(res.objective) << "\n";
  fg::save_plan({res.plan, fg::instance_digest(inst), std::string("optimal"), 0.0}, a.out);
  print_plan_summary(res.plan);
  return kOk;
}

// ---- sweep ------------------------------------------------------------------

struct SweepArgs {
  std::string instance;
  std::string out;
  std::vector<double> alphas{0.1, 1, 5, 10, 100, 1000};
  SolveFlags flags;
};

int run_sweep(const SweepArgs& a) {
  const fg::OrchardInstance inst = fg::load_instance(a.instance);
  const std::vector<fg::ParetoRecord> rows = fg::pareto_sweep(inst, a.alphas, make_config(a.flags));
  std::ostringstream csv;
  fg::write_pareto_csv(csv, rows);
  fg::write_text_file(a.out, csv.str());
  for (const fg::ParetoRecord& r : rows) {
    if (!r.has_solution) {
      std::cerr << "alpha " << fg::format_double(r.alpha) << ": no solution (" << fg::to_string(r.status) << ")\n";
    }
  }
  return kOk;
}

// ---- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
  std::string instance;
  std::string plan;
  std::uint64_t seed = 1;
  int draws = fg::kDefaultDraws;
  double alpha = -1.0;
};

fg::PlanFile load_matching_plan(const fg::OrchardInstance& inst, const std::string& path) {
  fg::PlanFile pf = fg::load_plan(path);
  if (pf.instance_digest != fg::instance_digest(inst)) {
    throw fg::MappingError("plan '" + path + "' was produced for a different instance (digest " +
                           pf.instance_digest + ")");
  }
  return pf;
}

int run_evaluate(const EvaluateArgs& a) {
  const fg::OrchardInstance inst = fg::load_instance(a.instance);
  const fg::PlanFile pf = load_matching_plan(inst, a.plan);
  const double alpha = a.alpha >= 0.0 ? a.alpha : pf.plan.alpha;
  const fg::ViolationSummary wc = fg::worst_case_violations(pf.plan, inst);
  const fg::ViolationStats st = fg::sampled_violations(pf.plan, inst, a.seed, a.draws);

  nlohmann::ordered_json j;
  j["obj_part1_m"] = fg::pipe_length(pf.plan);
  j["obj_part2_worst_case"] = wc.obj_part2;
  j["obj_part2_sampled"] = {{"mean", st.mean}, {"max", st.max}, {"stddev", st.stddev},
                            {"draws", st.draws}, {"seed", st.seed}};
  j["alpha"] = alpha;
  j["scalarized_objective"] = fg::scalarized_objective(pf.plan, inst, alpha);
  std::cout << j.dump(2) << "\n";
  return kOk;
}

// ---- render -----------------------------------------------------------------

struct RenderArgs {
  std::string instance;
  std::string plan;
  std::string out;
  fg::RenderSpec spec;
  bool no_trees = false;
  bool no_sites = false;
  bool no_cps = false;
};

int run_render(RenderArgs a) {
  const fg::OrchardInstance inst = fg::load_instance(a.instance);
  fg::DesignPlan plan;
  if (!a.plan.empty()) plan = load_matching_plan(inst, a.plan).plan;
  a.spec.layers.trees = !a.no_trees;
  a.spec.layers.candidate_sites = !a.no_sites;
  a.spec.layers.check_points = !a.no_cps;
  fg::write_text_file(a.out, fg::render_svg(inst, plan, a.spec));
  return kOk;
}

template <class F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const fg::RejectedSolution& e) {
    std::cerr << "error: imported solution rejected\n" << e.report().describe() << "\n";
    return kInvalidInput;
  } catch (const fg::InfeasibleInstance& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInfeasible;
  } catch (const fg::InfeasibleParameters& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInfeasible;
  } catch (const fg::SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  } catch (const fg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frost-protection heater layout design"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a grid orchard instance");
  fg::GridParams& p = gen.params;
  g->add_option("--length", p.length_m, "Orchard length (m)")->capture_default_str();
  g->add_option("--width", p.width_m, "Orchard width (m)")->capture_default_str();
  g->add_option("--tree-spacing", p.tree_spacing_m, "Tree spacing (m)")->capture_default_str();
  g->add_option("--site-spacing", p.site_spacing_m, "Candidate site spacing (m)")->capture_default_str();
  g->add_option("--cp-spacing", p.cp_spacing_m, "Check point spacing (m)")->capture_default_str();
  g->add_option("--k", p.k, "Number of heaters")->capture_default_str();
  g->add_option("--d-ht", p.d_ht_m, "Minimum heater-tree distance (m)")->capture_default_str();
  g->add_option("--f-lo", p.f_lo, "Lower power-fraction target")->capture_default_str();
  g->add_option("--f-hi", p.f_hi, "Upper power-fraction target")->capture_default_str();
  g->add_option("--ku-lo", p.ku_lo, "Lower heater uncertainty factor")->capture_default_str();
  g->add_option("--ku-hi", p.ku_hi, "Upper heater uncertainty factor")->capture_default_str();
  g->add_option("--k-tun", p.k_tun, "Heat decay rate (1/m)")->capture_default_str();
  g->add_option("--alpha", p.alpha, "Violation weight")->capture_default_str();
  g->add_option("--beta1", p.beta1_nor, "Pipe-length normalizer")->capture_default_str();
  g->add_option("--beta2", p.beta2_nor, "Violation normalizer")->capture_default_str();
  g->add_option("--out", gen.out, "Instance JSON path")->required();

  SolveArgs sol;
  auto* s = app.add_subcommand("solve", "Solve the design MILP");
  s->add_option("instance", sol.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  s->add_option("--out", sol.out, "Plan JSON path");
  s->add_option("--alpha", sol.alpha, "Override the instance alpha");
  s->add_option("--export-mps", sol.export_mps, "Write the model as free MPS (without --out: export only)");
  s->add_option("--import-solution", sol.import_solution, "Validate an external solution instead of solving")
      ->check(CLI::ExistingFile);
  s->add_flag("--no-warm-start", sol.no_warm_start, "Do not seed the search with the heuristic layout");
  add_solve_flags(s, sol.flags);

  HeuristicArgs heu;
  auto* h = app.add_subcommand("heuristic", "Partition heuristic plus Kruskal pipes");
  h->add_option("instance", heu.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  h->add_option("--out", heu.out, "Plan JSON path")->required();
  h->add_flag("--snap", heu.snap, "Move heaters to the nearest free candidate sites");

  SweepArgs sw;
  auto* w = app.add_subcommand("sweep", "Solve once per alpha and write the Pareto CSV");
  w->add_option("instance", sw.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  w->add_option("--out", sw.out, "CSV path")->required();
  w->add_option("--alphas", sw.alphas, "Alpha values")->delimiter(',')->capture_default_str();
  add_solve_flags(w, sw.flags);

  OracleArgs orc;
  auto* o = app.add_subcommand("oracle", "Exhaustive k-subset search (small instances)");
  o->add_option("instance", orc.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  o->add_option("--out", orc.out, "Plan JSON path")->required();
  o->add_option("--alpha", orc.alpha, "Override the instance alpha");
  o->add_option("--budget", orc.budget, "Maximum number of subsets")->capture_default_str();

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Worst-case and sampled violations of a plan");
  e->add_option("instance", ev.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  e->add_option("plan", ev.plan, "Plan JSON")->required()->check(CLI::ExistingFile);
  e->add_option("--seed", ev.seed, "Sampling seed")->capture_default_str();
  e->add_option("--draws", ev.draws, "Monte Carlo draws")->capture_default_str();
  e->add_option("--alpha", ev.alpha, "Alpha for the scalarized objective (default: plan alpha)");

  RenderArgs rn;
  auto* r = app.add_subcommand("render", "Draw an instance and optional plan as SVG");
  r->add_option("instance", rn.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  r->add_option("--plan", rn.plan, "Plan JSON")->check(CLI::ExistingFile);
  r->add_option("--out", rn.out, "SVG path")->required();
  r->add_option("--canvas-width", rn.spec.canvas_width_px, "Canvas width (px)")->capture_default_str();
  r->add_option("--canvas-height", rn.spec.canvas_height_px, "Canvas height (px)")->capture_default_str();
  r->add_option("--margin", rn.spec.margin_px, "Margin (px)")->capture_default_str();
  r->add_flag("--no-trees", rn.no_trees, "Hide trees");
  r->add_flag("--no-sites", rn.no_sites, "Hide candidate sites");
  r->add_flag("--no-check-points", rn.no_cps, "Hide check points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kInvalidInput;
  }

  if (g->parsed()) return guarded([&] { return run_generate(gen); });
  if (s->parsed()) return guarded([&] { return run_solve(sol); });
  if (h->parsed()) return guarded([&] { return run_heuristic(heu); });
  if (w->parsed()) return guarded([&] { return run_sweep(sw); });
  if (o->parsed()) return guarded([&] { return run_oracle(orc); });
  if (e->parsed()) return guarded([&] { return run_evaluate(ev); });
  if (r->parsed()) return guarded([&] { return run_render(rn); });
  return kInvalidInput;
}
