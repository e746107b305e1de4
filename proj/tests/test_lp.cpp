#include <random>

#include "doctest.h"
#include "frostgrid/lp.hpp"
#include "oracles.hpp"

using namespace frostgrid;

namespace {

MilpModel to_model(const oracle::SmallLp& lp) {
  MilpModel m;
  for (std::size_t j = 0; j < lp.c.size(); ++j) {
    const int id = m.add_variable("x" + std::to_string(j), VarKind::Continuous, lp.lo[j], lp.hi[j]);
    m.set_objective(id, lp.c[j]);
  }
  for (std::size_t r = 0; r < lp.a.size(); ++r) {
    std::vector<Term> terms;
    for (std::size_t j = 0; j < lp.c.size(); ++j) {
      if (lp.a[r][j] != 0.0) terms.push_back({static_cast<int>(j), lp.a[r][j]});
    }
    m.add_constraint("r" + std::to_string(r), terms, lp.sense[r], lp.b[r]);
  }
  return m;
}

}  // namespace

TEST_SUITE("lp") {

TEST_CASE("textbook LP") {
  // min -x - y  s.t. x + 2y <= 4, 3x + y <= 6, 0 <= x, y <= 10  -> x = 1.6, y = 1.2
  MilpModel m;
  const int x = m.add_variable("x", VarKind::Continuous, 0, 10);
  const int y = m.add_variable("y", VarKind::Continuous, 0, 10);
  m.set_objective(x, -1);
  m.set_objective(y, -1);
  m.add_constraint("a", {{x, 1}, {y, 2}}, Sense::LessEqual, 4);
  m.add_constraint("b", {{x, 3}, {y, 1}}, Sense::LessEqual, 6);
  lp::DualSimplex s(m);
  const lp::LpResult r = s.solve();
  REQUIRE(r.status == lp::LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-2.8));
  CHECK(r.x[0] == doctest::Approx(1.6));
  CHECK(r.x[1] == doctest::Approx(1.2));
}

TEST_CASE("infeasible and unbounded") {
  MilpModel m;
  const int x = m.add_variable("x", VarKind::Continuous, 0, 1);
  m.add_constraint("r", {{x, 1}}, Sense::GreaterEqual, 2);
  lp::DualSimplex s(m);
  CHECK(s.solve().status == lp::LpStatus::Infeasible);

  MilpModel u;
  const int y = u.add_variable("y", VarKind::Continuous, -kInfinity, kInfinity);
  u.set_objective(y, 1.0);
  u.add_constraint("r", {{y, 1}}, Sense::LessEqual, 3);
  lp::DualSimplex su(u);
  CHECK(su.solve().status == lp::LpStatus::Unbounded);
}

TEST_CASE("warm start after bound changes") {
  MilpModel m;
  const int x = m.add_variable("x", VarKind::Continuous, 0, 10);
  const int y = m.add_variable("y", VarKind::Continuous, 0, 10);
  m.set_objective(x, 1);
  m.set_objective(y, 2);
  m.add_constraint("c", {{x, 1}, {y, 1}}, Sense::GreaterEqual, 4);
  lp::DualSimplex s(m);
  CHECK(s.solve().objective == doctest::Approx(4.0));
  s.set_bounds(x, 0, 1);
  const lp::LpResult r = s.solve();
  CHECK(r.objective == doctest::Approx(1.0 + 2.0 * 3.0));
  s.set_bounds(x, 0, 10);
  CHECK(s.solve().objective == doctest::Approx(4.0));
}

TEST_CASE("cutoff stops early") {
  MilpModel m;
  const int x = m.add_variable("x", VarKind::Continuous, 0, 10);
  m.set_objective(x, 1);
  m.add_constraint("c", {{x, 1}}, Sense::GreaterEqual, 5);
  lp::DualSimplex s(m);
  lp::LpOptions o;
  o.cutoff = 2.0;
  CHECK(s.solve(o).status == lp::LpStatus::Cutoff);
}

TEST_CASE("dual simplex equals vertex enumeration on random LPs") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coef(-4, 4);
  int feasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    oracle::SmallLp lp;
    const int n = 1 + static_cast<int>(rng() % 4);
    const int rows = 1 + static_cast<int>(rng() % 4);
    for (int j = 0; j < n; ++j) {
      lp.c.push_back(coef(rng));
      lp.lo.push_back(-static_cast<double>(rng() % 4));
      lp.hi.push_back(static_cast<double>(rng() % 5));
    }
    for (int r = 0; r < rows; ++r) {
      std::vector<double> a(n);
      for (auto& v : a) v = coef(rng);
      lp.a.push_back(a);
      lp.sense.push_back(static_cast<Sense>(rng() % 3));
      lp.b.push_back(coef(rng));
    }
    const double expect = oracle::vertex_enumeration(lp);
    lp::DualSimplex s(to_model(lp));
    const lp::LpResult got = s.solve();
    if (expect == oracle::kInf) {
      CHECK(got.status == lp::LpStatus::Infeasible);
    } else {
      ++feasible;
      REQUIRE(got.status == lp::LpStatus::Optimal);
      CHECK(got.objective == doctest::Approx(expect).epsilon(1e-9));
    }
  }
  CHECK(feasible > 50);
}

}  // TEST_SUITE
