#include <catch2/catch.hpp>

#include <cmath>

#include "test_helpers.hpp"
#include "v2g/scenario.hpp"

using namespace v2g;
using testutil::toy_instance;

TEST_CASE("renewable assignment honors the degenerate penetration levels") {
  std::vector<Generator> gens(20);
  for (int g = 0; g < 20; ++g) gens[g] = {g, 0, 10.0, 1.0, true};

  auto none = assign_renewables(gens, 0.0, 1);
  CHECK(std::count(none.renewable_flags.begin(), none.renewable_flags.end(), true) == 0);

  auto all = assign_renewables(gens, 1.0, 1);
  CHECK(std::count(all.renewable_flags.begin(), all.renewable_flags.end(), true) == 20);

  gens[3].renewable_eligible = false;
  auto mostly = assign_renewables(gens, 1.0, 1);
  CHECK_FALSE(mostly.renewable_flags[3]);
  CHECK(std::count(mostly.renewable_flags.begin(), mostly.renewable_flags.end(), true) == 19);
}

TEST_CASE("renewable assignment concentrates near the penetration level") {
  std::vector<Generator> gens(10000);
  for (int g = 0; g < 10000; ++g) gens[g] = {g, 0, 10.0, 1.0, true};
  auto a = assign_renewables(gens, 0.3, 12345);
  double frac =
      std::count(a.renewable_flags.begin(), a.renewable_flags.end(), true) / 10000.0;
  CHECK(frac == Approx(0.3).margin(0.02));
}

TEST_CASE("non-renewable capacity is fixed at max in every scenario") {
  Instance inst = toy_instance();
  RenewableAssignment a;
  a.renewable_flags = {false, false};
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    Scenario s = sample_scenario(inst, a, rng);
    CHECK(s.gen_capacities[0] == inst.generators[0].max_capacity);
    CHECK(s.gen_capacities[1] == inst.generators[1].max_capacity);
  }
}

TEST_CASE("bus load draws average three quarters of peak") {
  Instance inst = toy_instance();
  inst.buses[0].peak_load = 100.0;
  RenewableAssignment a;
  a.renewable_flags = {false, false};
  Rng rng(87);
  double sum = 0.0;
  const int n = 10000;
  for (int k = 0; k < n; ++k) {
    Scenario s = sample_scenario(inst, a, rng);
    double load = s.bus_loads[0];
    CHECK(load >= 50.0);
    CHECK(load <= 100.0);
    sum += load;
  }
  CHECK(sum / n == Approx(75.0).margin(1.0));
}

TEST_CASE("renewable capacity factors hit 0, 1/2 and 1 a third of the time each") {
  Instance inst = toy_instance();
  RenewableAssignment a;
  a.renewable_flags = {true, false};
  Rng rng(88);
  int counts[3] = {0, 0, 0};
  const int n = 30000;
  const double max_cap = inst.generators[0].max_capacity;
  for (int k = 0; k < n; ++k) {
    Scenario s = sample_scenario(inst, a, rng);
    double f = s.gen_capacities[0] / max_cap;
    if (f == 0.0) counts[0]++;
    else if (f == 0.5) counts[1]++;
    else if (f == 1.0) counts[2]++;
    else FAIL("capacity factor outside the {0, 0.5, 1} support");
  }
  for (int c : counts) CHECK(double(c) / n == Approx(1.0 / 3.0).margin(0.01));
}

TEST_CASE("scenario sets are deterministic in the seed and normalized") {
  Instance inst = toy_instance();
  auto a = assign_renewables(inst.generators, 0.5, 7);
  ScenarioSet s1 = sample_scenario_set(inst, a, 100, 42);
  ScenarioSet s2 = sample_scenario_set(inst, a, 100, 42);
  REQUIRE(s1.size() == 100);
  for (int i = 0; i < 100; ++i) {
    CHECK(s1.scenarios[i].route_demands == s2.scenarios[i].route_demands);
    CHECK(s1.scenarios[i].bus_loads == s2.scenarios[i].bus_loads);
    CHECK(s1.scenarios[i].gen_capacities == s2.scenarios[i].gen_capacities);
    CHECK(s1.scenarios[i].gen_costs == s2.scenarios[i].gen_costs);
  }
  ScenarioSet other = sample_scenario_set(inst, a, 100, 43);
  CHECK(other.scenarios[0].bus_loads != s1.scenarios[0].bus_loads);

  SECTION("probabilities sum to one exactly under compensated summation") {
    for (int n : {1, 3, 7, 100, 137}) {
      ScenarioSet set = sample_scenario_set(inst, a, n, 9);
      CompensatedSum sum;
      for (const Scenario& s : set.scenarios) sum.add(s.probability);
      CHECK(sum.value() == 1.0);
    }
  }
}

TEST_CASE("single-scenario set has probability one") {
  Instance inst = toy_instance();
  auto a = assign_renewables(inst.generators, 0.0, 1);
  ScenarioSet set = sample_scenario_set(inst, a, 1, 5);
  REQUIRE(set.size() == 1);
  CHECK(set.scenarios[0].probability == 1.0);
}

TEST_CASE("route demand support stays within the rounded half-to-x1.5 band") {
  Instance inst = toy_instance();
  auto a = assign_renewables(inst.generators, 0.3, 3);
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
    ScenarioSet set = sample_scenario_set(inst, a, 200, seed);
    for (const Scenario& s : set.scenarios)
      for (std::size_t j = 0; j < inst.routes.size(); ++j) {
        double avg = inst.routes[j].avg_demand;
        CHECK(s.route_demands[j] >= std::floor(0.5 * avg));
        CHECK(s.route_demands[j] <= std::ceil(1.5 * avg));
        CHECK(s.route_demands[j] == std::floor(s.route_demands[j])); // integral
      }
  }
}

TEST_CASE("sampled streams are empirically uncorrelated") {
  Instance inst = toy_instance();
  RenewableAssignment a;
  a.renewable_flags = {true, false};
  ScenarioSet set = sample_scenario_set(inst, a, 10000, 77);

  auto correlation = [&](auto get_a, auto get_b) {
    double ma = 0, mb = 0;
    const int n = set.size();
    for (const Scenario& s : set.scenarios) {
      ma += get_a(s);
      mb += get_b(s);
    }
    ma /= n;
    mb /= n;
    double cov = 0, va = 0, vb = 0;
    for (const Scenario& s : set.scenarios) {
      double da = get_a(s) - ma, db = get_b(s) - mb;
      cov += da * db;
      va += da * da;
      vb += db * db;
    }
    return cov / std::sqrt(va * vb);
  };

  auto demand0 = [](const Scenario& s) { return s.route_demands[0]; };
  auto demand1 = [](const Scenario& s) { return s.route_demands[1]; };
  auto load0 = [](const Scenario& s) { return s.bus_loads[0]; };
  auto load2 = [](const Scenario& s) { return s.bus_loads[2]; };
  auto cap0 = [](const Scenario& s) { return s.gen_capacities[0]; };

  CHECK(std::abs(correlation(demand0, demand1)) < 0.05);
  CHECK(std::abs(correlation(demand0, load0)) < 0.05);
  CHECK(std::abs(correlation(load0, load2)) < 0.05);
  CHECK(std::abs(correlation(load0, cap0)) < 0.05);
  CHECK(std::abs(correlation(demand1, cap0)) < 0.05);
}

TEST_CASE("demographic battery demand arithmetic") {
  CHECK(total_battery_demand(344850, 0.78, 0.1, 0.1) == 2690);
  CHECK(total_battery_demand(5414712, 0.78, 0.1, 0.1) == 42235);
  // the two-factor reading that drops the exchange fraction
  CHECK(total_battery_demand(5414712, 0.78, 0.1, 1.0) == 422348);
  CHECK(total_battery_demand(0, 0.78, 0.1, 0.1) == 0);
  CHECK_THROWS_AS(total_battery_demand(100, 1.5, 0.1, 0.1), std::invalid_argument);
}

TEST_CASE("route demand allocation follows utilization weights") {
  std::vector<Route> routes(10);
  for (int j = 0; j < 10; ++j) routes[j] = {j, {}, 0.0, 0.0, 1.0};
  auto alloc = allocate_route_demands(2690, routes);
  for (double d : alloc) CHECK(d == Approx(269.0));

  std::vector<Route> one = {{0, {}, 0.0, 0.0, 2.0}};
  CHECK(allocate_route_demands(123, one)[0] == Approx(123.0));

  std::vector<Route> mixed = {{0, {}, 0, 0, 1.0}, {1, {}, 0, 0, 0.0}, {2, {}, 0, 0, 3.0}};
  auto m = allocate_route_demands(100, mixed);
  CHECK(m[0] == Approx(25.0));
  CHECK(m[1] == 0.0);
  CHECK(m[2] == Approx(75.0));

  std::vector<Route> zeros = {{0, {}, 0, 0, 0.0}, {1, {}, 0, 0, 0.0}};
  CHECK_THROWS_AS(allocate_route_demands(10, zeros), std::invalid_argument);
}
