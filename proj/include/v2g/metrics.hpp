#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "v2g/branch_bound.hpp"
#include "v2g/instance.hpp"
#include "v2g/model.hpp"
#include "v2g/scenario.hpp"
#include "v2g/transport.hpp"

namespace v2g {

struct Metrics {
  double load_shed_fraction = 0.0;     // E[sum_u delta] / E[sum_u load]
  double unmet_battery_fraction = 0.0; // E[sum_j q] / E[sum_j d]
  int opened_stations = 0;
  double objective = 0.0;
};

struct ScenarioAggregates {
  double recourse_cost = 0.0; // c.y + h.q + o.beta + g.delta, unweighted
  double total_shed = 0.0;
  double total_unmet = 0.0;
  double total_load = 0.0;
  double total_demand = 0.0;
};

struct SitingSolution {
  MILPStatus status = MILPStatus::NumericalError;
  std::vector<double> x; // open flags per station
  std::vector<double> w; // battery stock per station
  double objective = 0.0;
  double bound = 0.0;
  double gap = 0.0;
  std::int64_t node_count = 0;
  std::int64_t lp_iterations = 0;
  std::vector<ScenarioAggregates> per_scenario;
};

namespace detail {

// Sums one scenario block of a solution vector. The registry may or may not
// carry first-stage columns; `sc` addresses the block, `scenario` the data.
inline ScenarioAggregates aggregate_block(const VarRegistry& reg, const std::vector<double>& v,
                                          int sc, const Instance& inst, const Scenario& scenario,
                                          const std::vector<std::vector<double>>& detours) {
  ScenarioAggregates agg;
  const int I = inst.num_stations(), J = inst.num_routes();
  for (int j = 0; j < J; ++j) {
    agg.total_unmet += v[reg.q(j, sc)];
    agg.total_demand += scenario.route_demands[j];
    agg.recourse_cost += inst.routes[j].unmet_penalty * v[reg.q(j, sc)];
  }
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j)
      if (int col = reg.y(i, j, sc); col >= 0) agg.recourse_cost += detours[i][j] * v[col];
  if (reg.with_grid()) {
    for (int u = 0; u < inst.num_buses(); ++u) {
      agg.total_shed += v[reg.delta(u, sc)];
      agg.total_load += scenario.bus_loads[u];
      agg.recourse_cost += inst.buses[u].shed_penalty * v[reg.delta(u, sc)];
    }
    for (int g = 0; g < inst.num_generators(); ++g)
      agg.recourse_cost += scenario.gen_costs[g] * v[reg.beta(g, sc)];
  }
  return agg;
}

}  // namespace detail

// Pulls the siting decision and per-scenario aggregates out of a solved
// extensive-form model.
inline SitingSolution extract_siting_solution(const MILPModel& model, const MILPSolution& sol,
                                              const Instance& inst, const ScenarioSet& set) {
  SitingSolution out;
  out.status = sol.status;
  out.objective = sol.objective;
  out.bound = sol.bound;
  out.gap = sol.gap;
  out.node_count = sol.node_count;
  out.lp_iterations = sol.lp_iterations;
  if (!sol.has_incumbent) return out;

  const VarRegistry& reg = model.registry;
  for (int i = 0; i < inst.num_stations(); ++i) {
    out.x.push_back(sol.x[reg.x(i)]);
    out.w.push_back(sol.x[reg.w(i)]);
  }
  auto detours = detour_cost_matrix(inst);
  for (int sc = 0; sc < set.size(); ++sc)
    out.per_scenario.push_back(
        detail::aggregate_block(reg, sol.x, sc, inst, set.scenarios[sc], detours));
  return out;
}

// Probability-weighted performance measures. Zero total demand (or load)
// defines the corresponding fraction as 0.
inline Metrics compute_metrics(const SitingSolution& sol, const ScenarioSet& set) {
  Metrics m;
  m.objective = sol.objective;
  for (double xi : sol.x) m.opened_stations += static_cast<int>(std::round(xi));

  double shed = 0, load = 0, unmet = 0, demand = 0;
  for (std::size_t sc = 0; sc < sol.per_scenario.size(); ++sc) {
    double p = set.scenarios[sc].probability;
    shed += p * sol.per_scenario[sc].total_shed;
    load += p * sol.per_scenario[sc].total_load;
    unmet += p * sol.per_scenario[sc].total_unmet;
    demand += p * sol.per_scenario[sc].total_demand;
  }
  m.load_shed_fraction = load > 0 ? shed / load : 0.0;
  m.unmet_battery_fraction = demand > 0 ? unmet / demand : 0.0;
  return m;
}

}  // namespace v2g
