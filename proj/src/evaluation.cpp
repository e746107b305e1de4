#include "frostgrid/evaluation.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "frostgrid/format.hpp"
#include "frostgrid/heuristic.hpp"
#include "frostgrid/kernels.hpp"

namespace frostgrid {

void heater_bounds(const DesignPlan& plan, const OrchardInstance& inst, std::vector<double>& lo,
                   std::vector<double>& hi) {
  lo.resize(plan.heaters.size());
  hi.resize(plan.heaters.size());
  for (std::size_t i = 0; i < plan.heaters.size(); ++i) {
    if (plan.site_ids) {
      const int site = plan.site_ids->at(i);
      lo[i] = inst.ku_lo.at(site);
      hi[i] = inst.ku_hi.at(site);
    } else {
      lo[i] = inst.ku_lo_min();
      hi[i] = inst.ku_hi_max();
    }
  }
}

ViolationSummary worst_case_violations(const DesignPlan& plan, const OrchardInstance& inst) {
  std::vector<double> lo;
  std::vector<double> hi;
  heater_bounds(plan, inst, lo, hi);
  const std::size_t ncp = inst.cp_count();
  std::vector<double> h(plan.heaters.size() * ncp);
  kernels::influence_matrix_serial(plan.heaters, inst.check_points, inst.k_tun, h);

  ViolationSummary out;
  out.mu_lo.resize(ncp);
  out.mu_hi.resize(ncp);
  for (std::size_t s = 0; s < ncp; ++s) {
    double lo_sum = 0.0;
    double hi_sum = 0.0;
    for (std::size_t i = 0; i < plan.heaters.size(); ++i) {
      lo_sum += lo[i] * h[i * ncp + s];
      hi_sum += hi[i] * h[i * ncp + s];
    }
    out.mu_lo[s] = std::max(0.0, inst.f_lo - lo_sum);
    out.mu_hi[s] = std::max(0.0, hi_sum - inst.f_hi);
    out.total += out.mu_lo[s] + out.mu_hi[s];
  }
  out.obj_part2 = ncp == 0 ? 0.0 : out.total / static_cast<double>(ncp);
  return out;
}

ViolationStats sampled_violations(const DesignPlan& plan, const OrchardInstance& inst,
                                  std::uint64_t seed, int draws, Execution exec) {
  if (draws < 1) throw InvalidArgument("draws must be at least 1");
  std::vector<double> lo;
  std::vector<double> hi;
  heater_bounds(plan, inst, lo, hi);
  const std::size_t ncp = inst.cp_count();
  std::vector<double> h(plan.heaters.size() * ncp);
  kernels::influence_matrix_serial(plan.heaters, inst.check_points, inst.k_tun, h);

  kernels::SampledProblem p;
  p.influence = h;
  p.heaters = plan.heaters.size();
  p.cps = ncp;
  p.ku_lo = lo;
  p.ku_hi = hi;
  p.f_lo = inst.f_lo;
  p.f_hi = inst.f_hi;
  p.seed = seed;
  std::vector<double> per_draw(static_cast<std::size_t>(draws));
  if (exec == Execution::Parallel) {
    kernels::sampled_draws_omp(p, per_draw);
  } else {
    kernels::sampled_draws_serial(p, per_draw);
  }

  ViolationStats stats;
  stats.draws = draws;
  stats.seed = seed;
  stats.mean = std::accumulate(per_draw.begin(), per_draw.end(), 0.0) / draws;
  stats.max = *std::max_element(per_draw.begin(), per_draw.end());
  double sq = 0.0;
  for (double v : per_draw) sq += (v - stats.mean) * (v - stats.mean);
  stats.stddev = std::sqrt(sq / draws);
  return stats;
}

double scalarized_objective(const DesignPlan& plan, const OrchardInstance& inst, double alpha) {
  return pipe_length(plan) / inst.beta1_nor +
         alpha / inst.beta2_nor * worst_case_violations(plan, inst).total;
}

DesignRun solve_design(const OrchardInstance& inst, const SolveConfig& cfg, bool warm_start) {
  const DesignModel dm = build_design_model(inst);
  std::optional<std::vector<double>> initial;
  if (warm_start) {
    try {
      const DesignPlan h = heuristic_plan(inst);
      const std::vector<int> sites = snap_to_sites(inst, h.heaters);
      initial = assignment_from_sites(inst, dm, sites);
    } catch (const PlacementError&) {
      // No warm start; the search finds its own incumbent.
    }
  }
  DesignRun run;
  run.result = solve(dm.model, cfg, initial);
  if (run.result.solution) {
    run.plan = extract_plan(inst, dm.graph, dm.catalog, dm.model, *run.result.solution);
  }
  return run;
}

std::vector<ParetoRecord> pareto_sweep(const OrchardInstance& inst, std::span<const double> alphas,
                                       const SolveConfig& cfg, Execution exec) {
  if (alphas.empty()) throw InvalidArgument("need at least one alpha");
  for (double a : alphas) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidArgument("alpha values must be finite and >= 0");
  }
  std::vector<double> sorted(alphas.begin(), alphas.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<ParetoRecord> records(sorted.size());

  // Each solve is independent; B&B itself runs single-worker inside the sweep.
  SolveConfig inner = cfg;
  const int threads = exec == Execution::Parallel ? std::max(1, cfg.worker_count) : 1;
  inner.worker_count = 1;
  const auto count = static_cast<std::int64_t>(sorted.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t a = 0; a < count; ++a) {
    ParetoRecord rec;
    rec.alpha = sorted[a];
    OrchardInstance variant = inst;
    variant.alpha = sorted[a];
    try {
      const DesignRun run = solve_design(variant, inner);
      rec.status = run.result.status;
      rec.wall_time_s = run.result.wall_time_s;
      rec.rel_gap = std::max(0.0, run.result.rel_gap);
      if (run.plan) {
        rec.has_solution = true;
        rec.obj_part1_m = run.plan->obj_part1_m;
        rec.obj_part2 = run.plan->obj_part2.value_or(0.0);
      }
    } catch (const SolverError&) {
      rec.status = SolveStatus::NumericError;
    }
    records[a] = rec;
  }
  return records;
}

void write_pareto_csv(std::ostream& out, std::span<const ParetoRecord> records) {
  out << "alpha,obj_part1_m,obj_part2,rel_gap,wall_time_s,status\n";
  for (const ParetoRecord& r : records) {
    out << format_double(r.alpha) << ',';
    if (r.has_solution) {
      out << format_double(r.obj_part1_m) << ',' << format_double(r.obj_part2) << ','
          << format_double(r.rel_gap);
    } else {
      out << ",,";
    }
    out << ',' << format_double(r.wall_time_s) << ',' << to_string(r.status) << '\n';
  }
}

OracleResult exhaustive_oracle(const OrchardInstance& inst, double alpha, Execution exec,
                               std::uint64_t budget) {
  inst.validate();
  const std::size_t n = inst.site_count();
  const std::uint64_t subsets = kernels::binomial(n, static_cast<std::uint64_t>(inst.k));
  if (subsets > budget) {
    throw BudgetExceeded("exhaustive oracle would enumerate " + std::to_string(subsets) +
                         " subsets (budget " + std::to_string(budget) + ")");
  }
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = distance(inst.candidate_sites[i], inst.candidate_sites[j]);
  }
  const InfluenceMatrix h = build_influence_matrix(inst, exec);

  kernels::SubsetScanInput in;
  in.n = n;
  in.k = inst.k;
  in.dist = dist;
  in.influence = h.data();
  in.cps = inst.cp_count();
  in.ku_lo = inst.ku_lo;
  in.ku_hi = inst.ku_hi;
  in.f_lo = inst.f_lo;
  in.f_hi = inst.f_hi;
  in.w_len = 1.0 / inst.beta1_nor;
  in.w_vio = alpha / inst.beta2_nor;
  const kernels::SubsetScanResult best =
      exec == Execution::Parallel ? kernels::scan_subsets_omp(in) : kernels::scan_subsets_serial(in);

  OracleResult out;
  out.subsets = best.evaluated;
  out.objective = best.objective;
  DesignPlan& plan = out.plan;
  plan.provenance = Provenance::Oracle;
  plan.alpha = alpha;
  plan.site_ids = best.subset;
  for (int s : best.subset) plan.heaters.push_back(inst.candidate_sites[s]);
  const TreeSolution mst = kruskal_mst(complete_graph(plan.heaters));
  plan.pipe_edges = mst.edges;
  plan.obj_part1_m = pipe_length(plan);
  plan.obj_part2 = in.cps == 0 ? 0.0 : best.violation_sum / static_cast<double>(in.cps);
  return out;
}

}  // namespace frostgrid
