#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "v2g/common.hpp"
#include "v2g/instance.hpp"
#include "v2g/rng.hpp"

namespace v2g {

struct RenewableAssignment {
  double penetration = 0.0;
  std::vector<bool> renewable_flags; // one per generator
  std::uint64_t seed = 0;
};

struct Scenario {
  int id = 0;
  std::vector<double> route_demands;   // batteries per route, integral values
  std::vector<double> bus_loads;       // MW per bus
  std::vector<double> gen_capacities;  // MW per generator
  std::vector<double> gen_costs;       // cost per MW per generator
  double probability = 0.0;
};

struct ScenarioSet {
  std::vector<Scenario> scenarios;
  RenewableAssignment assignment;
  std::uint64_t seed = 0;

  int size() const { return static_cast<int>(scenarios.size()); }
};

struct SamplingOptions {
  // Probabilities of the 0 / 0.5 / 1.0 capacity factors for renewables.
  std::array<double, 3> factor_probs = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  // Multiplicative uniform [0.9, 1.1] jitter on generation costs.
  bool cost_jitter = false;
};

// Each eligible generator is independently flagged renewable with probability
// equal to the penetration level.
inline RenewableAssignment assign_renewables(const std::vector<Generator>& generators,
                                             double penetration, std::uint64_t rng_seed) {
  if (penetration < 0.0 || penetration > 1.0)
    throw std::invalid_argument("assign_renewables: penetration outside [0, 1]");
  RenewableAssignment a;
  a.penetration = penetration;
  a.seed = rng_seed;
  a.renewable_flags.resize(generators.size(), false);
  Rng rng(rng_seed);
  for (std::size_t g = 0; g < generators.size(); ++g) {
    bool flag = rng.bernoulli(penetration); // one draw per generator, eligible or not
    a.renewable_flags[g] = generators[g].renewable_eligible && flag;
  }
  return a;
}

// One scenario draw. Canonical draw order: route demands, bus loads, renewable
// capacity factors, then cost jitter (when enabled). All draws independent.
inline Scenario sample_scenario(const Instance& inst, const RenewableAssignment& assignment,
                                Rng& rng, const SamplingOptions& opts = {}) {
  if (assignment.renewable_flags.size() != inst.generators.size())
    throw std::invalid_argument("sample_scenario: assignment does not match generators");
  Scenario s;
  s.route_demands.reserve(inst.routes.size());
  for (const Route& r : inst.routes) {
    double d = rng.uniform(0.5, 1.5) * r.avg_demand;
    s.route_demands.push_back(static_cast<double>(round_half_up(d)));
  }
  s.bus_loads.reserve(inst.buses.size());
  for (const Bus& b : inst.buses) s.bus_loads.push_back(rng.uniform(0.5, 1.0) * b.peak_load);
  s.gen_capacities.reserve(inst.generators.size());
  const auto& p = opts.factor_probs;
  for (std::size_t g = 0; g < inst.generators.size(); ++g) {
    const Generator& gen = inst.generators[g];
    if (assignment.renewable_flags[g]) {
      double u = rng.next_double();
      double factor = u < p[0] ? 0.0 : (u < p[0] + p[1] ? 0.5 : 1.0);
      s.gen_capacities.push_back(factor * gen.max_capacity);
    } else {
      s.gen_capacities.push_back(gen.max_capacity); // fixed across scenarios
    }
  }
  s.gen_costs.reserve(inst.generators.size());
  for (const Generator& gen : inst.generators) {
    double jitter = opts.cost_jitter ? rng.uniform(0.9, 1.1) : 1.0;
    s.gen_costs.push_back(gen.unit_cost * jitter);
  }
  return s;
}

// n independent scenarios with probability 1/n each. Scenario i draws from the
// substream derived from (seed, i), so output is identical whether scenarios
// are sampled sequentially or concurrently.
inline ScenarioSet sample_scenario_set(const Instance& inst, const RenewableAssignment& assignment,
                                       int n, std::uint64_t seed,
                                       const SamplingOptions& opts = {}) {
  if (n < 1) throw std::invalid_argument("sample_scenario_set: n must be >= 1");
  ScenarioSet set;
  set.assignment = assignment;
  set.seed = seed;
  set.scenarios.reserve(n);
  for (int i = 0; i < n; ++i) {
    Rng rng(Rng::derive_seed(seed, static_cast<std::uint64_t>(i)));
    Scenario s = sample_scenario(inst, assignment, rng, opts);
    s.id = i;
    s.probability = 1.0 / n;
    set.scenarios.push_back(std::move(s));
  }
  return set;
}

// Expected battery-exchange requests per scenario from demographics.
inline long long total_battery_demand(double population, double vehicle_ratio, double phev_ratio,
                                      double exchange_fraction) {
  if (population < 0 || vehicle_ratio < 0 || phev_ratio < 0 || exchange_fraction < 0 ||
      vehicle_ratio > 1 || phev_ratio > 1 || exchange_fraction > 1)
    throw std::invalid_argument("total_battery_demand: inputs out of range");
  return round_half_up(population * vehicle_ratio * phev_ratio * exchange_fraction);
}

// Split the total across routes proportionally to utilization weights.
inline std::vector<double> allocate_route_demands(double total, const std::vector<Route>& routes) {
  if (total < 0) throw std::invalid_argument("allocate_route_demands: negative total");
  if (routes.empty()) throw std::invalid_argument("allocate_route_demands: no routes");
  double weight_sum = 0.0;
  for (const Route& r : routes) weight_sum += r.weight;
  if (!(weight_sum > 0))
    throw std::invalid_argument("allocate_route_demands: all route weights are zero");
  std::vector<double> demands;
  demands.reserve(routes.size());
  for (const Route& r : routes) demands.push_back(total * r.weight / weight_sum);
  return demands;
}

}  // namespace v2g
