#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "agewave/cauchy.hpp"
#include "agewave/errors.hpp"
#include "agewave/model.hpp"

using namespace agewave;
using doctest::Approx;

namespace {

double sup_deviation(const Field& f, double value) {
  double worst = 0.0;
  for (double v : f.u) worst = std::max(worst, std::abs(v - value));
  return worst;
}

Field box_all_ages(const ModelSpec& model, const SpaceGrid& grid) {
  return make_field(model, grid,
                    [](double, double x) { return std::abs(x) <= 1.0 ? 1.0 : 0.0; });
}

}  // namespace

TEST_CASE("field sampling validates the range") {
  ModelSpec model = make_reference_model(21);
  SpaceGrid grid{5.0, 51};
  CHECK_NOTHROW(make_field(model, grid, [](double, double) { return 0.5; }));
  CHECK_THROWS_AS(make_field(model, grid, [](double, double) { return 1.5; }),
                  NumericalError);
  CHECK_THROWS_AS(make_field(model, grid, [](double, double) { return -0.1; }),
                  NumericalError);
}

TEST_CASE("stability limit rejects an overwhelming transmission rate") {
  ModelSpec hot = make_reference_model(101, 150.0);
  SpaceGrid grid{5.0, 51};
  CHECK_THROWS_AS(CauchySimulator(hot, grid), NumericalError);
  ModelSpec mild = make_reference_model(101, 1.0);
  CHECK_NOTHROW(CauchySimulator(mild, grid));
}

TEST_CASE("disease-free state is an exact fixed point") {
  ModelSpec model = make_reference_model(51);
  SpaceGrid grid{5.0, 101};
  CauchySimulator sim(model, grid);
  Field f = make_constant_field(model, grid, 0.0);
  for (int k = 0; k < 40; ++k) sim.step(f);
  CHECK(sup_deviation(f, 0.0) == 0.0);
}

TEST_CASE("saturated state persists under the edge closure") {
  ModelSpec model = make_reference_model(51);
  SpaceGrid grid{5.0, 101};
  CauchySimulator sim(model, grid, SpaceClosure::edge);
  Field f = make_constant_field(model, grid, 1.0);
  for (int k = 0; k < 40; ++k) sim.step(f);
  CHECK(sup_deviation(f, 1.0) < 1e-13);
}

TEST_CASE("saturated state erodes from a vacuum boundary") {
  ModelSpec model = make_reference_model(51);
  SpaceGrid grid{5.0, 101};
  CauchySimulator sim(model, grid, SpaceClosure::zero);
  Field f = make_constant_field(model, grid, 1.0);
  for (int k = 0; k < 40; ++k) sim.step(f);
  CHECK(f.at(0, 0) < 0.95);
  CHECK(f.at(0, 50) > 0.99);
  CHECK(f.at(0, 0) < f.at(0, 25));
}

TEST_CASE("spatially uniform runs reduce to the age ODE") {
  ModelSpec model = make_reference_model(51);
  SpaceGrid grid{5.0, 101};
  CauchySimulator sim(model, grid, SpaceClosure::edge);
  Field f = make_field(model, grid, [](double a, double) { return 0.25 + 0.25 * a; });

  std::vector<double> ode(model.n());
  for (int i = 0; i < model.n(); ++i) ode[i] = 0.25 + 0.25 * model.age.node(i);
  double dt = model.age.h();
  for (int k = 0; k < 40; ++k) {
    sim.step(f);
    std::vector<double> q = model.apply_Q(ode), next(model.n());
    for (int i = model.n() - 1; i >= 1; --i)
      next[i] = ode[i - 1] + dt * q[i - 1] * (1.0 - ode[i - 1]);
    double acc = 0.0;
    for (int i = 1; i < model.n(); ++i) acc += model.renewal_w[i] * next[i];
    next[0] = acc / (1.0 - model.renewal_w[0]);
    ode = next;
  }
  double worst = 0.0;
  for (int i = 0; i < model.n(); ++i)
    for (int j = 0; j < grid.n; ++j) worst = std::max(worst, std::abs(f.at(i, j) - ode[i]));
  CHECK(worst < 1e-12);
}

TEST_CASE("run snaps sample times and rejects off-grid requests") {
  ModelSpec model = make_reference_model(11);
  SpaceGrid grid{3.0, 31};
  CauchySimulator sim(model, grid);
  Field f = make_constant_field(model, grid, 0.1);
  Trajectory traj = sim.run(f, 0.5, {0.0, 0.2, 0.5});
  CHECK(traj.snapshots.size() == 3);
  CHECK(traj.snapshots[1].t == Approx(0.2).epsilon(1e-9));
  CHECK(traj.range_low >= 0.0);
  CHECK(traj.range_high <= 1.0);
  CHECK_THROWS_AS(sim.run(f, 0.5, {0.7}), ValidationError);
  CHECK_THROWS_AS(sim.run(f, 0.333, {0.1}), ValidationError);
}

TEST_CASE("characteristics formula defect shrinks at first order in dt") {
  SpaceGrid grid{4.0, 41};
  std::vector<double> older, younger;
  for (int na : {11, 21, 41}) {
    ModelSpec model = make_reference_model(na);
    CauchySimulator sim(model, grid);
    Field f = box_all_ages(model, grid);
    std::vector<Field> history = {f};
    int steps = static_cast<int>(std::llround(0.5 / model.age.h()));
    for (int k = 0; k < steps; ++k) {
      sim.step(f);
      history.push_back(f);
    }
    older.push_back(
        renewal_formula_check(history, model, sim.stencil(), sim.closure(), 0.5, 0.8));
    younger.push_back(
        renewal_formula_check(history, model, sim.stencil(), sim.closure(), 0.5, 0.2));
  }
  CHECK(older[0] == Approx(1.29131e-2).epsilon(1e-3));
  CHECK(older[1] / older[0] == Approx(0.5).epsilon(0.05));
  CHECK(older[2] / older[1] == Approx(0.5).epsilon(0.05));
  CHECK(younger[0] == Approx(4.16745e-3).epsilon(1e-3));
  CHECK(younger[1] / younger[0] == Approx(0.5).epsilon(0.05));
  CHECK(younger[2] / younger[1] == Approx(0.5).epsilon(0.05));
}

TEST_CASE("characteristics formula is exact at time zero") {
  ModelSpec model = make_reference_model(11);
  SpaceGrid grid{4.0, 41};
  CauchySimulator sim(model, grid);
  Field f = box_all_ages(model, grid);
  std::vector<Field> history = {f};
  CHECK(renewal_formula_check(history, model, sim.stencil(), sim.closure(), 0.0, 0.3) <
        1e-14);
}

TEST_CASE("steady scan finds exactly the two constant states") {
  ModelSpec model = make_reference_model(101);
  SteadyScanResult scan = steady_state_scan(model, 9);
  REQUIRE(scan.equilibria.size() == 2);
  CHECK(scan.equilibria[0].profile[50] == Approx(0.0).scale(1.0).epsilon(1e-9));
  CHECK(scan.equilibria[1].profile[50] == Approx(1.0).epsilon(1e-9));
  for (const auto& eq : scan.equilibria) {
    CHECK(eq.ode_residual < 1e-9);
    CHECK(eq.boundary_residual < 1e-9);
  }
  REQUIRE(scan.guesses.size() == 11);
  CHECK(scan.basin.front() == 0);
  for (std::size_t g = 1; g < scan.basin.size(); ++g) CHECK(scan.basin[g] == 1);
}

TEST_CASE("ordered initial data stays ordered") {
  ModelSpec model = make_reference_model(51);
  SpaceGrid grid{8.0, 161};
  Field lower = make_field(model, grid, [](double a, double x) {
    return 0.4 * std::exp(-x * x / 4.0) * (1.0 + 0.2 * std::sin(3.0 * a));
  });
  Field upper = make_field(model, grid, [](double, double x) {
    return 0.8 * std::exp(-x * x / 4.0);
  });
  ComparisonReport rep = comparison_check(lower, upper, model, SpaceClosure::zero, 2.0);
  CHECK(rep.ordered);
  CHECK(rep.worst_margin >= -1e-10);
  CHECK(rep.worst_margin == Approx(3.601e-8).epsilon(0.05));
}

TEST_CASE("comparison check rejects an unordered pair upfront") {
  ModelSpec model = make_reference_model(21);
  SpaceGrid grid{3.0, 31};
  Field lo = make_constant_field(model, grid, 0.6);
  Field hi = make_constant_field(model, grid, 0.2);
  CHECK_THROWS_AS(comparison_check(lo, hi, model, SpaceClosure::zero, 0.2),
                  ValidationError);
}
