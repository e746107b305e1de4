#include <algorithm>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "frostgrid/evaluation.hpp"
#include "frostgrid/milp.hpp"
#include "frostgrid/solver.hpp"
#include "oracles.hpp"

using namespace frostgrid;

namespace {

bool report_mentions(const ViolationReport& r, const std::string& prefix) {
  return std::any_of(r.items.begin(), r.items.end(),
                     [&](const Violation& v) { return v.name.rfind(prefix, 0) == 0; });
}

SolveConfig exact() {
  SolveConfig cfg;
  cfg.rel_gap_tol = 0.0;
  cfg.abs_tol = 1e-9;
  return cfg;
}

}  // namespace

TEST_SUITE("milp") {

TEST_CASE("variable families on K4") {
  const Point2D sq[] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  const WeightedGraph g = complete_graph(sq);
  MilpModel m;
  VariableCatalog cat;
  build_kmst_constraints(g, 3, m, cat);

  int real_z = 0, dummy_z = 0, real_w = 0, dummy_w = 0;
  for (const auto& [key, id] : cat.z) (key.second == cat.tau ? dummy_z : real_z)++;
  for (const auto& [key, id] : cat.w) (key.first == cat.tau || key.second == cat.tau ? dummy_w : real_w)++;
  CHECK(real_z == 6);
  CHECK(dummy_z == 4);
  CHECK(real_w == 12);
  CHECK(dummy_w == 8);
  CHECK(cat.w.size() == 20);
  CHECK(cat.ell.size() == 4);
  CHECK(cat.u.size() == 5);
  CHECK(m.variable_count() == 10 + 20 + 4 + 5);
  CHECK(m.binary_count() == 34);

  for (const Edge& e : g.edges()) {
    CHECK(cat.w.count({e.i, e.j}) == 1);
    CHECK(cat.w.count({e.j, e.i}) == 1);
  }
  std::set<std::string> names;
  for (const Variable& v : m.variables()) {
    CHECK(names.insert(v.name).second);
    if (v.kind == VarKind::Binary) {
      CHECK(v.lower == 0.0);
      CHECK(v.upper == 1.0);
    }
  }
  for (const Constraint& c : m.constraints()) {
    for (const Term& t : c.terms) CHECK((t.var >= 0 && t.var < m.variable_count()));
  }
}

TEST_CASE("model rejects duplicate names and bad k") {
  MilpModel m;
  m.add_variable("x", VarKind::Binary, -5, 5);
  CHECK(m.variables()[0].lower == 0.0);
  CHECK(m.variables()[0].upper == 1.0);
  CHECK_THROWS_AS(m.add_variable("x", VarKind::Continuous), InvalidArgument);
  CHECK_THROWS_AS(m.add_constraint("r", {{3, 1.0}}, Sense::Equal, 0.0), InvalidArgument);

  const Point2D two[] = {{0, 0}, {1, 0}};
  MilpModel k;
  VariableCatalog cat;
  CHECK_THROWS_AS(build_kmst_constraints(complete_graph(two), 3, k, cat), InfeasibleParameters);
  CHECK_THROWS_AS(build_kmst_constraints(complete_graph(two), 0, k, cat), InfeasibleParameters);
}

TEST_CASE("k = 1 and k = 2 are feasible with the tree-depth cap") {
  const Point2D tri[] = {{0, 0}, {1, 0}, {0, 2}};
  const WeightedGraph g = complete_graph(tri);
  CHECK(oracle::kmst_projection(g, 1) == oracle::enumerate_ktrees(g, 1));
  CHECK(oracle::kmst_projection(g, 1).size() == 3);
  CHECK(oracle::kmst_projection(g, 2) == oracle::enumerate_ktrees(g, 2));
}

TEST_CASE("verbatim cap k-1 admits nothing for k <= 2") {
  const Point2D tri[] = {{0, 0}, {1, 0}, {0, 2}};
  const WeightedGraph g = complete_graph(tri);
  CHECK(oracle::kmst_projection(g, 1, PotentialCap::Verbatim).empty());
  CHECK(oracle::kmst_projection(g, 2, PotentialCap::Verbatim).empty());
  // Deeper trees lose their deepest orientation but k = 3 paths stay feasible.
  CHECK_FALSE(oracle::kmst_projection(g, 3, PotentialCap::Verbatim).empty());

  auto inst = fixtures::unit_square(2);
  const DesignModel dm = build_design_model(inst, {PotentialCap::Verbatim});
  CHECK(solve(dm.model, exact()).status == SolveStatus::Infeasible);
}

TEST_CASE("coverage rows and variables") {
  const OrchardInstance t1 = generate_instance({});
  const DesignModel dm = build_design_model(t1);
  CHECK(dm.catalog.mu_lo.size() + dm.catalog.mu_hi.size() == 432);
  int cov = 0;
  for (const Constraint& c : dm.model.constraints()) {
    if (c.name.rfind("cov_", 0) == 0) ++cov;
  }
  CHECK(cov == 432);

  // Objective coefficients d_e / 600 and alpha / 240.
  const Edge& e = dm.graph.edges().front();
  CHECK(dm.model.objective()[dm.catalog.z.at({e.i, e.j})] == doctest::Approx(e.weight / 600.0));
  CHECK(dm.model.objective()[dm.catalog.z.at({0, dm.catalog.tau})] == 0.0);
  CHECK(dm.model.objective()[dm.catalog.mu_lo[0]] == doctest::Approx(5.0 / 240.0));
  CHECK(dm.model.objective()[dm.catalog.mu_hi[215]] == doctest::Approx(5.0 / 240.0));
}

TEST_CASE("single site on its check point needs no slack") {
  auto inst = fixtures::make_instance({{0, 0}}, {{0, 0}}, 1);
  const DesignModel dm = build_design_model(inst);
  std::vector<int> sites{0};
  MilpSolution sol;
  sol.values = assignment_from_sites(inst, dm, sites);
  CHECK(validate_solution(dm.model, sol).empty());
  CHECK(sol.values[dm.catalog.mu_lo[0]] == 0.0);
  CHECK(sol.values[dm.catalog.mu_hi[0]] == 0.0);
}

TEST_CASE("without heat the lower slack must cover f_lo") {
  auto inst = fixtures::make_instance({{0, 0}}, {{0, 0}}, 1);
  const DesignModel dm = build_design_model(inst);
  MilpSolution sol;
  sol.values.assign(dm.model.variable_count(), 0.0);
  sol.values[dm.catalog.mu_lo[0]] = 0.49;
  const ViolationReport r = validate_solution(dm.model, sol);
  CHECK(report_mentions(r, "cov_lo_0"));
  sol.values[dm.catalog.mu_lo[0]] = 0.5;
  CHECK_FALSE(report_mentions(validate_solution(dm.model, sol), "cov_lo_0"));
}

TEST_CASE("alpha zero leaves only pipe length; two sites 10 m apart") {
  auto inst = fixtures::make_instance({{0, 0}, {10, 0}}, {{5, 0}}, 2);
  inst.f_lo = 0.0;
  inst.f_hi = 10.0;
  inst.alpha = 5.0;
  const DesignModel dm = build_design_model(inst);
  std::vector<int> sites{0, 1};
  const auto x = assignment_from_sites(inst, dm, sites);
  CHECK(evaluate_objective(dm.model, x) == doctest::Approx(10.0 / 600.0).epsilon(1e-15));
  const SolveResult r = solve(dm.model, exact());
  REQUIRE(r.incumbent_obj);
  CHECK(*r.incumbent_obj == doctest::Approx(10.0 / 600.0).epsilon(1e-12));

  auto zero = fixtures::unit_square(3, 0.0);
  const DesignModel dz = build_design_model(zero);
  for (int v : dz.catalog.mu_lo) CHECK(dz.model.objective()[v] == 0.0);
}

TEST_CASE("validation flags MTZ cycles and wrong cardinality") {
  auto inst = fixtures::unit_square(3);
  const DesignModel dm = build_design_model(inst);
  std::vector<int> sites{0, 1, 3};
  MilpSolution sol;
  sol.values = assignment_from_sites(inst, dm, sites);
  REQUIRE(validate_solution(dm.model, sol).empty());

  auto cyc = sol;
  for (const auto& [key, id] : dm.catalog.w) {
    const auto [a, b] = key;
    if (a != dm.catalog.tau && b != dm.catalog.tau && cyc.values[id] > 0.5) {
      cyc.values[dm.catalog.w.at({b, a})] = 1.0;
      break;
    }
  }
  CHECK(report_mentions(validate_solution(dm.model, cyc), "mtz_"));

  auto card = sol;
  card.values[dm.catalog.ell[3]] = 0.0;
  CHECK(report_mentions(validate_solution(dm.model, card), "card"));

  auto frac = sol;
  frac.values[dm.catalog.ell[0]] = 0.5;
  const ViolationReport r = validate_solution(dm.model, frac);
  CHECK(std::any_of(r.items.begin(), r.items.end(),
                    [](const Violation& v) { return v.kind == Violation::Kind::Integrality; }));
  CHECK(r.describe().find("l_0") != std::string::npos);

  MilpSolution short_sol;
  short_sol.values.assign(3, 0.0);
  CHECK_THROWS_AS(validate_solution(dm.model, short_sol), MappingError);
}

TEST_CASE("extract_plan") {
  auto one = fixtures::unit_square(1);
  const DesignModel d1 = build_design_model(one);
  const SolveResult r1 = solve(d1.model, exact());
  REQUIRE(r1.solution);
  const DesignPlan p1 = extract_plan(one, d1.graph, d1.catalog, d1.model, *r1.solution);
  CHECK(p1.heaters.size() == 1);
  CHECK(p1.pipe_edges.empty());
  CHECK(p1.obj_part1_m == 0.0);

  auto three = fixtures::unit_square(3);
  const DesignModel d3 = build_design_model(three);
  const SolveResult r3 = solve(d3.model, exact());
  REQUIRE(r3.solution);
  const DesignPlan p3 = extract_plan(three, d3.graph, d3.catalog, d3.model, *r3.solution);
  CHECK(p3.heaters.size() == 3);
  CHECK(p3.pipe_edges.size() == 2);
  CHECK(p3.obj_part1_m == doctest::Approx(2.0));
  for (auto [a, b] : p3.pipe_edges) {
    CHECK(a < 3);
    CHECK(b < 3);
  }
  REQUIRE(p3.site_ids);
  CHECK(p3.site_ids->size() == 3);

  MilpSolution bad = *r3.solution;
  bad.values[d3.catalog.ell[0]] = 1.0 - bad.values[d3.catalog.ell[0]];
  CHECK_THROWS_AS(extract_plan(three, d3.graph, d3.catalog, d3.model, bad), RejectedSolution);
}

TEST_CASE("assignment_from_sites matches the closed-form objective") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto inst = fixtures::random_instance(seed, 8, 6, 3, 5.0);
    const DesignModel dm = build_design_model(inst);
    std::vector<int> sites{static_cast<int>(seed % 8), static_cast<int>((seed + 3) % 8),
                           static_cast<int>((seed + 5) % 8)};
    MilpSolution sol;
    sol.values = assignment_from_sites(inst, dm, sites);
    CHECK(validate_solution(dm.model, sol).empty());

    std::vector<Point2D> pts;
    std::vector<double> lo, hi;
    std::vector<int> sorted = sites;
    std::sort(sorted.begin(), sorted.end());
    for (int s : sorted) {
      pts.push_back(inst.candidate_sites[s]);
      lo.push_back(inst.ku_lo[s]);
      hi.push_back(inst.ku_hi[s]);
    }
    const double expect = oracle::prim_points(pts) / inst.beta1_nor +
                          inst.alpha / inst.beta2_nor *
                              oracle::worst_violation_sum(pts, lo, hi, inst.check_points, inst.k_tun, inst.f_lo,
                                                          inst.f_hi);
    CHECK(evaluate_objective(dm.model, sol.values) == doctest::Approx(expect).epsilon(1e-12));
  }
}

}  // TEST_SUITE
