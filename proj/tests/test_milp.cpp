#include <catch2/catch.hpp>

#include <cmath>

#include "test_helpers.hpp"
#include "v2g/branch_bound.hpp"
#include "v2g/build.hpp"
#include "v2g/feasibility.hpp"
#include "v2g/simplex.hpp"

using namespace v2g;
using testutil::make_scenario;
using testutil::make_set;
using testutil::random_tiny_instance;
using testutil::toy_instance;

namespace {

// exhaustive siting enumeration: every 0/1 vector with LP recourse
double enumerate_sitings(const Instance& inst, const ScenarioSet& set,
                         const ModelConfig& base_cfg = {}) {
  const int I = inst.num_stations();
  double best = kInf;
  for (int mask = 0; mask < (1 << I); ++mask) {
    ModelConfig cfg = base_cfg;
    std::vector<double> x(I);
    for (int i = 0; i < I; ++i) x[i] = (mask >> i) & 1 ? 1.0 : 0.0;
    if (cfg.station_budget) {
      double open = 0;
      for (double v : x) open += v;
      if (open > *cfg.station_budget) continue;
    }
    cfg.fixed_siting = x;
    MILPModel model = build_extensive_form(inst, set, cfg);
    LPSolution sol = solve_lp(model.lp);
    if (sol.status == LPStatus::Optimal) best = std::min(best, sol.objective);
  }
  return best;
}

}  // namespace

TEST_CASE("milp with no integer columns behaves exactly like the lp solver") {
  LPProblem lp;
  int x = lp.add_column(0, 10, -3.0);
  int y = lp.add_column(0, 10, -2.0);
  lp.add_row(RowSense::LE, 12.0, {{x, 2.0}, {y, 1.0}});
  lp.add_row(RowSense::LE, 9.0, {{x, 1.0}, {y, 1.0}});

  MILPModel model;
  model.lp = lp;
  model.integer_cols.assign(2, false);

  LPSolution ref = solve_lp(lp);
  MILPSolution sol = solve_milp(model);
  REQUIRE(ref.status == LPStatus::Optimal);
  REQUIRE(sol.status == MILPStatus::GapReached);
  CHECK(sol.objective == Approx(ref.objective).epsilon(1e-12));
  CHECK(sol.node_count == 1);
  CHECK(sol.gap == 0.0);
  CHECK(sol.x[0] == Approx(ref.x[0]));
  CHECK(sol.x[1] == Approx(ref.x[1]));
}

TEST_CASE("two-candidate toy opens exactly one station") {
  // two identical stations on the route, no grid at all
  Instance inst;
  for (int c = 0; c < 3; ++c) inst.transport.nodes.push_back({double(c), 0.0});
  inst.transport.edges = {{0, 1, 1.0}, {1, 2, 1.0}};
  inst.routes = {{0, {0, 1, 2}, 5.0, 100.0, 1.0}};
  inst.stations = {
      {0, 0, 0, 10.0, 0.5, 0.0, 5.0},
      {1, 2, 0, 10.0, 0.5, 0.0, 5.0},
  };
  inst.params.battery_power = 0.01;

  Scenario w;
  w.route_demands = {5.0};
  w.probability = 1.0;
  auto set = make_set(inst, {w});

  MILPModel model = build_extensive_form(inst, set);
  MILPSolution sol = solve_milp(model, {.gap_target = 1e-9});
  REQUIRE(sol.status == MILPStatus::GapReached);

  double opened = sol.x[model.registry.x(0)] + sol.x[model.registry.x(1)];
  CHECK(opened == Approx(1.0).margin(1e-9));
  // f + r * 5 batteries, zero detour, nothing unmet
  CHECK(sol.objective == Approx(10.0 + 0.5 * 5.0).margin(1e-9));

  double oracle = enumerate_sitings(inst, set);
  CHECK(sol.objective == Approx(oracle).margin(1e-9));
}

TEST_CASE("milp matches exhaustive siting enumeration on random tiny instances") {
  Rng rng(555);
  for (int trial = 0; trial < 20; ++trial) {
    Instance inst = random_tiny_instance(rng);
    auto assignment = assign_renewables(inst.generators, 0.4, trial);
    ScenarioSet set = sample_scenario_set(inst, assignment, 5, 1000 + trial);

    MILPModel model = build_extensive_form(inst, set);
    MILPSolution sol = solve_milp(model, {.gap_target = 0.01});
    REQUIRE(sol.status == MILPStatus::GapReached);

    double oracle = enumerate_sitings(inst, set);
    INFO("trial " << trial << ": milp " << sol.objective << " oracle " << oracle);
    CHECK(sol.objective <= oracle * 1.01 + 1e-6);
    CHECK(sol.objective >= oracle - 1e-6); // enumeration is exact, milp cannot beat it

    auto violations = check_solution_feasibility(inst, set, model, sol.x, 1e-6);
    CHECK(violations.empty());
  }
}

TEST_CASE("branch and bound reports monotone bounds and a valid gap") {
  Instance inst = toy_instance();
  // make the sitings genuinely contested so several nodes are explored
  inst.stations[0].fixed_cost = 400.0;
  inst.stations[1].fixed_cost = 405.0;
  auto set = make_set(inst, {make_scenario(inst, 1, 1.5, 1), make_scenario(inst, 0.9, 0.5, 1),
                             make_scenario(inst, 0.8, 1.0, 0.5)});
  MILPModel model = build_extensive_form(inst, set);

  double last_bound = -kInf;
  double last_gap = kInf;
  bool weak_duality = true, bound_monotone = true, gap_monotone = true;
  MILPOptions opts;
  opts.gap_target = 1e-9;
  opts.observer = [&](const BBEvent& e) {
    if (e.bound > e.incumbent + 1e-9) weak_duality = false;
    if (e.bound < last_bound - 1e-9) bound_monotone = false;
    double gap = relative_gap(e.incumbent, std::isfinite(e.bound) ? e.bound : e.incumbent);
    if (gap > last_gap + 1e-9) gap_monotone = false;
    last_bound = e.bound;
    last_gap = gap;
  };
  MILPSolution sol = solve_milp(model, opts);
  REQUIRE(sol.status == MILPStatus::GapReached);
  CHECK(weak_duality);
  CHECK(bound_monotone);
  CHECK(gap_monotone);
  CHECK(sol.gap <= 1e-9);
  CHECK(sol.bound <= sol.objective + 1e-9);
}

TEST_CASE("milp solves are deterministic") {
  Rng rng(99);
  Instance inst = random_tiny_instance(rng);
  auto assignment = assign_renewables(inst.generators, 0.5, 3);
  ScenarioSet set = sample_scenario_set(inst, assignment, 5, 44);
  MILPModel model = build_extensive_form(inst, set);

  MILPSolution a = solve_milp(model);
  MILPSolution b = solve_milp(model);
  CHECK(a.objective == b.objective);
  CHECK(a.bound == b.bound);
  CHECK(a.node_count == b.node_count);
  CHECK(a.lp_iterations == b.lp_iterations);
  CHECK(a.x == b.x);
}

TEST_CASE("infeasible milp is reported as infeasible") {
  LPProblem lp;
  int x = lp.add_column(0, 1, 1.0);
  lp.add_row(RowSense::GE, 2.0, {{x, 1.0}});
  MILPModel model;
  model.lp = lp;
  model.integer_cols = {true};
  CHECK(solve_milp(model).status == MILPStatus::Infeasible);
}

TEST_CASE("integer stock flag makes the battery counts integral") {
  Instance inst = toy_instance();
  inst.stations[0].per_battery_cost = 0.37; // fractional LP stock without the flag
  Scenario w = make_scenario(inst, 1, 1.15, 1);
  auto set = make_set(inst, {w});

  ModelConfig cfg;
  cfg.integer_stock = true;
  MILPModel model = build_extensive_form(inst, set, cfg);
  MILPSolution sol = solve_milp(model, {.gap_target = 1e-9});
  REQUIRE(sol.status == MILPStatus::GapReached);
  for (int i = 0; i < inst.num_stations(); ++i) {
    double wi = sol.x[model.registry.w(i)];
    CHECK(wi == std::round(wi));
  }
}

TEST_CASE("islanded grids get one angle reference per island") {
  // two disconnected triangles; each island must dispatch on its own
  Instance inst = toy_instance();
  for (int u = 0; u < 3; ++u) {
    Bus b = inst.buses[u];
    b.id = 3 + u;
    b.coords.x += 100.0;
    inst.buses.push_back(b);
  }
  inst.lines.push_back({3, 4, 1.0, 200.0});
  inst.lines.push_back({4, 5, 1.0, 200.0});
  inst.lines.push_back({3, 5, 1.0, 200.0});
  inst.generators.push_back({2, 4, 120.0, 6.0, true});

  auto refs = detail::reference_buses(inst, -1);
  CHECK(refs[0] == 0);
  CHECK(refs[1] == 0);
  CHECK(refs[2] == 0);
  CHECK(refs[3] == 4); // lowest-id generator bus of the second island
  CHECK(refs[4] == 4);
  CHECK(refs[5] == 4);

  auto set = make_set(inst, {make_scenario(inst, 1, 1, 1)});
  MILPModel model = build_extensive_form(inst, set);
  MILPSolution sol = solve_milp(model, {.gap_target = 1e-9});
  REQUIRE(sol.status == MILPStatus::GapReached);
  CHECK(check_solution_feasibility(inst, set, model, sol.x, 1e-6).empty());
  CHECK(sol.x[model.registry.theta(0, 0)] == 0.0);
  CHECK(sol.x[model.registry.theta(4, 0)] == 0.0);
}

TEST_CASE("node limit is reported with the bound achieved so far") {
  Instance inst = toy_instance();
  inst.stations[0].fixed_cost = 400.0;
  inst.stations[1].fixed_cost = 405.0;
  auto set = make_set(inst, {make_scenario(inst, 1, 1.5, 1)});
  MILPModel model = build_extensive_form(inst, set);
  MILPOptions opts;
  opts.max_nodes = 1;
  opts.gap_target = 1e-12;
  MILPSolution sol = solve_milp(model, opts);
  CHECK(sol.status == MILPStatus::LimitReached);
  CHECK(sol.node_count <= 1);

  SECTION("without heuristics there is no incumbent, only the bound") {
    opts.heuristic_period = 0;
    MILPSolution bare = solve_milp(model, opts);
    CHECK(bare.status == MILPStatus::LimitReached);
    CHECK_FALSE(bare.has_incumbent);
    CHECK(std::isfinite(bare.bound));
    CHECK(bare.gap == kInf);
  }
}
