#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "v2g/instance.hpp"
#include "v2g/model.hpp"
#include "v2g/scenario.hpp"
#include "v2g/transport.hpp"

namespace v2g {

namespace detail {

// Grid islands via union-find over the line list.
inline std::vector<int> grid_components(const Instance& inst) {
  std::vector<int> parent(inst.num_buses());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const Line& l : inst.lines) {
    int a = find(l.from_bus), b = find(l.to_bus);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> comp(inst.num_buses());
  for (int u = 0; u < inst.num_buses(); ++u) comp[u] = find(u);
  return comp;
}

// One reference bus per island: the configured bus for its own island,
// otherwise the lowest-id bus with a generator, otherwise the island root.
inline std::vector<int> reference_buses(const Instance& inst, int configured) {
  std::vector<int> comp = grid_components(inst);
  std::vector<bool> has_gen(inst.num_buses(), false);
  for (const Generator& g : inst.generators) has_gen[g.bus] = true;

  std::vector<int> refs; // one entry per island, indexed by island root
  std::vector<int> ref_of_comp(inst.num_buses(), -1);
  for (int u = 0; u < inst.num_buses(); ++u) {
    int c = comp[u];
    int& r = ref_of_comp[c];
    if (r < 0) r = u; // lowest id in island (ids ascend)
    if (has_gen[u] && !has_gen[r]) r = u;
  }
  if (configured >= 0 && configured < inst.num_buses()) ref_of_comp[comp[configured]] = configured;
  std::vector<int> out(inst.num_buses());
  for (int u = 0; u < inst.num_buses(); ++u) out[u] = ref_of_comp[comp[u]];
  return out;
}

inline std::vector<std::pair<int, int>> reachable_pairs(
    const std::vector<std::vector<double>>& detours) {
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < detours.size(); ++i)
    for (std::size_t j = 0; j < detours[i].size(); ++j)
      if (std::isfinite(detours[i][j])) pairs.push_back({static_cast<int>(i), static_cast<int>(j)});
  return pairs;
}

}  // namespace detail

// Extensive-form deterministic equivalent: first-stage siting and stock
// columns followed by one recourse block per scenario, objective weighted by
// the scenario probabilities. Line and generator limits live in the column
// bounds; load shed is bounded by the realized load.
inline MILPModel build_extensive_form(const Instance& inst, const ScenarioSet& set,
                                      const ModelConfig& config = {}) {
  if (set.scenarios.empty())
    throw std::invalid_argument("build_extensive_form: empty scenario set");
  if (config.fixed_siting) {
    if (static_cast<int>(config.fixed_siting->size()) != inst.num_stations())
      throw std::invalid_argument("build_extensive_form: fixed_siting length mismatch");
    for (double v : *config.fixed_siting)
      if (std::abs(v) > 1e-9 && std::abs(v - 1.0) > 1e-9)
        throw std::invalid_argument("build_extensive_form: fixed_siting entries must be 0/1");
  }

  const int I = inst.num_stations(), J = inst.num_routes(), N = inst.num_buses();
  const int L = inst.num_lines(), G = inst.num_generators();
  const int S = set.size();
  const bool grid = !config.transport_only;

  auto detours = detour_cost_matrix(inst);
  MILPModel model;
  model.config = config;
  model.registry = VarRegistry({I, J, N, L, G}, S, detail::reachable_pairs(detours), grid,
                               /*with_first_stage=*/true);
  const VarRegistry& reg = model.registry;
  LPProblem& lp = model.lp;

  std::vector<int> refs;
  if (grid) refs = detail::reference_buses(inst, config.reference_bus);

  // --- columns, in registry order ---
  for (int i = 0; i < I; ++i) {
    double lo = 0.0, hi = 1.0;
    if (config.fixed_siting) lo = hi = std::round((*config.fixed_siting)[i]);
    lp.add_column(lo, hi, inst.stations[i].fixed_cost);
  }
  for (int i = 0; i < I; ++i)
    lp.add_column(0.0, inst.stations[i].max_batteries, inst.stations[i].per_battery_cost);

  for (int sc = 0; sc < S; ++sc) {
    const Scenario& w = set.scenarios[sc];
    const double p = w.probability;
    for (int i = 0; i < I; ++i) lp.add_column(0.0, kInf, 0.0); // t
    for (int i = 0; i < I; ++i) lp.add_column(0.0, kInf, 0.0); // s
    for (int j = 0; j < J; ++j)
      lp.add_column(0.0, kInf, config.ge_mode ? 0.0 : p * inst.routes[j].unmet_penalty); // q
    for (auto [i, j] : reg.y_pairs()) lp.add_column(0.0, kInf, p * detours[i][j]);       // y
    if (grid) {
      for (int l = 0; l < L; ++l)
        lp.add_column(-inst.lines[l].capacity, inst.lines[l].capacity, 0.0); // alpha
      for (int u = 0; u < N; ++u) {
        if (refs[u] == u) lp.add_column(0.0, 0.0, 0.0); // island reference angle
        else lp.add_column(-kInf, kInf, 0.0);           // theta
      }
      for (int u = 0; u < N; ++u)
        lp.add_column(0.0, w.bus_loads[u], p * inst.buses[u].shed_penalty); // delta
      for (int g = 0; g < G; ++g)
        lp.add_column(0.0, w.gen_capacities[g], p * w.gen_costs[g]); // beta
    }
  }

  model.integer_cols.assign(lp.num_cols(), false);
  for (int i = 0; i < I; ++i) model.integer_cols[reg.x(i)] = true;
  if (config.integer_stock)
    for (int i = 0; i < I; ++i) model.integer_cols[reg.w(i)] = true;

  // --- rows ---
  auto add_row = [&](RowKind kind, int entity, int scenario, RowSense sense, double rhs,
                     const std::vector<std::pair<int, double>>& entries) {
    lp.add_row(sense, rhs, entries);
    model.row_info.push_back({kind, entity, scenario});
  };

  for (int i = 0; i < I; ++i) {
    const CandidateStation& st = inst.stations[i];
    add_row(RowKind::StockLower, i, -1, RowSense::GE, 0.0,
            {{reg.w(i), 1.0}, {reg.x(i), -st.min_batteries}});
    add_row(RowKind::StockUpper, i, -1, RowSense::LE, 0.0,
            {{reg.w(i), 1.0}, {reg.x(i), -st.max_batteries}});
  }
  if (config.station_budget) {
    std::vector<std::pair<int, double>> entries;
    for (int i = 0; i < I; ++i) entries.push_back({reg.x(i), 1.0});
    add_row(RowKind::Budget, -1, -1, RowSense::LE, static_cast<double>(*config.station_budget),
            entries);
  }

  // station discharge terms per bus for the balance rows
  std::vector<std::vector<int>> stations_at_bus(N);
  std::vector<std::vector<int>> gens_at_bus(N);
  if (grid) {
    for (int i = 0; i < I; ++i) {
      int b = inst.stations[i].grid_bus;
      if (b >= 0 && b < N) stations_at_bus[b].push_back(i);
    }
    for (int g = 0; g < G; ++g) gens_at_bus[inst.generators[g].bus].push_back(g);
  }

  for (int sc = 0; sc < S; ++sc) {
    const Scenario& w = set.scenarios[sc];
    for (int i = 0; i < I; ++i)
      add_row(RowKind::Avail, i, sc, RowSense::LE, 0.0,
              {{reg.s(i, sc), 1.0}, {reg.t(i, sc), 1.0}, {reg.w(i), -1.0}});

    for (int j = 0; j < J; ++j) {
      std::vector<std::pair<int, double>> entries;
      for (int i = 0; i < I; ++i)
        if (int col = reg.y(i, j, sc); col >= 0) entries.push_back({col, 1.0});
      entries.push_back({reg.q(j, sc), 1.0});
      add_row(RowKind::Demand, j, sc, RowSense::EQ, w.route_demands[j], entries);
    }

    for (int i = 0; i < I; ++i) {
      std::vector<std::pair<int, double>> entries;
      for (int j = 0; j < J; ++j)
        if (int col = reg.y(i, j, sc); col >= 0) entries.push_back({col, 1.0});
      if (entries.empty()) continue; // station reaches no route: no row needed
      entries.push_back({reg.t(i, sc), -1.0});
      add_row(RowKind::Serve, i, sc, RowSense::LE, 0.0, entries);
    }

    if (!grid) continue;

    for (int u = 0; u < N; ++u) {
      std::vector<std::pair<int, double>> entries;
      for (int l = 0; l < L; ++l) {
        if (inst.lines[l].from_bus == u) entries.push_back({reg.alpha(l, sc), 1.0});
        else if (inst.lines[l].to_bus == u) entries.push_back({reg.alpha(l, sc), -1.0});
      }
      entries.push_back({reg.delta(u, sc), -1.0});
      for (int g : gens_at_bus[u]) entries.push_back({reg.beta(g, sc), -1.0});
      for (int i : stations_at_bus[u])
        entries.push_back({reg.s(i, sc), -inst.params.battery_power});
      add_row(RowKind::Balance, u, sc, RowSense::EQ, -w.bus_loads[u], entries);
    }

    for (int l = 0; l < L; ++l) {
      const Line& line = inst.lines[l];
      add_row(RowKind::Flow, l, sc, RowSense::EQ, 0.0,
              {{reg.alpha(l, sc), line.reactance},
               {reg.theta(line.from_bus, sc), -1.0},
               {reg.theta(line.to_bus, sc), 1.0}});
    }
  }

  return model;
}

// Recourse LP for one scenario with (x, w) fixed. Optimal value is the
// second-stage cost h(x, w, xi). The registry has no first-stage columns.
struct SecondStageLP {
  LPProblem lp;
  VarRegistry registry;
  std::vector<RowInfo> row_info;
};

inline SecondStageLP build_second_stage_lp(const Instance& inst, const Scenario& w,
                                           const std::vector<double>& x,
                                           const std::vector<double>& w_stock,
                                           const ModelConfig& config = {}) {
  const int I = inst.num_stations(), J = inst.num_routes(), N = inst.num_buses();
  const int L = inst.num_lines(), G = inst.num_generators();
  const bool grid = !config.transport_only;

  if (static_cast<int>(x.size()) != I || static_cast<int>(w_stock.size()) != I)
    throw std::invalid_argument("build_second_stage_lp: first-stage size mismatch");
  for (int i = 0; i < I; ++i) {
    if (std::abs(x[i]) > 1e-6 && std::abs(x[i] - 1.0) > 1e-6)
      throw std::invalid_argument("build_second_stage_lp: x must be binary-valued");
    double lo = inst.stations[i].min_batteries * x[i];
    double hi = inst.stations[i].max_batteries * x[i];
    if (w_stock[i] < lo - 1e-6 || w_stock[i] > hi + 1e-6)
      throw std::invalid_argument("build_second_stage_lp: w outside the stock bounds for x");
  }

  auto detours = detour_cost_matrix(inst);
  SecondStageLP out;
  out.registry = VarRegistry({I, J, N, L, G}, 1, detail::reachable_pairs(detours), grid,
                             /*with_first_stage=*/false);
  const VarRegistry& reg = out.registry;
  LPProblem& lp = out.lp;

  std::vector<int> refs;
  if (grid) refs = detail::reference_buses(inst, config.reference_bus);

  for (int i = 0; i < I; ++i) lp.add_column(0.0, kInf, 0.0); // t
  for (int i = 0; i < I; ++i) lp.add_column(0.0, kInf, 0.0); // s
  for (int j = 0; j < J; ++j)
    lp.add_column(0.0, kInf, config.ge_mode ? 0.0 : inst.routes[j].unmet_penalty); // q
  for (auto [i, j] : reg.y_pairs()) lp.add_column(0.0, kInf, detours[i][j]);       // y
  if (grid) {
    for (int l = 0; l < L; ++l)
      lp.add_column(-inst.lines[l].capacity, inst.lines[l].capacity, 0.0);
    for (int u = 0; u < N; ++u) {
      if (refs[u] == u) lp.add_column(0.0, 0.0, 0.0);
      else lp.add_column(-kInf, kInf, 0.0);
    }
    for (int u = 0; u < N; ++u) lp.add_column(0.0, w.bus_loads[u], inst.buses[u].shed_penalty);
    for (int g = 0; g < G; ++g) lp.add_column(0.0, w.gen_capacities[g], w.gen_costs[g]);
  }

  auto add_row = [&](RowKind kind, int entity, RowSense sense, double rhs,
                     const std::vector<std::pair<int, double>>& entries) {
    lp.add_row(sense, rhs, entries);
    out.row_info.push_back({kind, entity, 0});
  };

  for (int i = 0; i < I; ++i)
    add_row(RowKind::Avail, i, RowSense::LE, w_stock[i],
            {{reg.s(i, 0), 1.0}, {reg.t(i, 0), 1.0}});

  for (int j = 0; j < J; ++j) {
    std::vector<std::pair<int, double>> entries;
    for (int i = 0; i < I; ++i)
      if (int col = reg.y(i, j, 0); col >= 0) entries.push_back({col, 1.0});
    entries.push_back({reg.q(j, 0), 1.0});
    add_row(RowKind::Demand, j, RowSense::EQ, w.route_demands[j], entries);
  }

  for (int i = 0; i < I; ++i) {
    std::vector<std::pair<int, double>> entries;
    for (int j = 0; j < J; ++j)
      if (int col = reg.y(i, j, 0); col >= 0) entries.push_back({col, 1.0});
    if (entries.empty()) continue;
    entries.push_back({reg.t(i, 0), -1.0});
    add_row(RowKind::Serve, i, RowSense::LE, 0.0, entries);
  }

  if (grid) {
    std::vector<std::vector<int>> gens_at_bus(N);
    for (int g = 0; g < G; ++g) gens_at_bus[inst.generators[g].bus].push_back(g);
    std::vector<std::vector<int>> stations_at_bus(N);
    for (int i = 0; i < I; ++i) {
      int b = inst.stations[i].grid_bus;
      if (b >= 0 && b < N) stations_at_bus[b].push_back(i);
    }

    for (int u = 0; u < N; ++u) {
      std::vector<std::pair<int, double>> entries;
      for (int l = 0; l < L; ++l) {
        if (inst.lines[l].from_bus == u) entries.push_back({reg.alpha(l, 0), 1.0});
        else if (inst.lines[l].to_bus == u) entries.push_back({reg.alpha(l, 0), -1.0});
      }
      entries.push_back({reg.delta(u, 0), -1.0});
      for (int g : gens_at_bus[u]) entries.push_back({reg.beta(g, 0), -1.0});
      for (int i : stations_at_bus[u])
        entries.push_back({reg.s(i, 0), -inst.params.battery_power});
      add_row(RowKind::Balance, u, RowSense::EQ, -w.bus_loads[u], entries);
    }
    for (int l = 0; l < L; ++l) {
      const Line& line = inst.lines[l];
      add_row(RowKind::Flow, l, RowSense::EQ, 0.0,
              {{reg.alpha(l, 0), line.reactance},
               {reg.theta(line.from_bus, 0), -1.0},
               {reg.theta(line.to_bus, 0), 1.0}});
    }
  }

  return out;
}

}  // namespace v2g
