#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "v2g/instance.hpp"
#include "v2g/rng.hpp"
#include "v2g/scenario.hpp"
#include "v2g/transport.hpp"

namespace v2g {

// Topology counts, MW totals and population define each instance family;
// everything else is a knob with an explicit default.
struct RtsKnobs {
  int buses = 25;
  int lines = 38;
  int generator_buses = 11;
  int max_generators_per_bus = 6;
  int load_buses = 24;
  double total_capacity = 2999.0; // MW
  double total_load = 2880.0;     // MW
  int lattice_width = 11;
  int lattice_height = 8;
  double lattice_spacing = 1.0;
  int stations = 28;
  int routes = 10;
  double population = 344850.0;
  double vehicle_ratio = 0.78;
  double phev_ratio = 0.1;
  double exchange_fraction = 0.1;
  bool two_factor_demand = false; // drop the exchange fraction from the formula
  double battery_power = 0.01;    // MW per battery
  double reactance_min = 0.5, reactance_max = 2.0;
  // line ratings default to a comfortably uncongested band of the total load
  double line_capacity_min_frac = 0.6, line_capacity_max_frac = 1.0;
  double gen_cost_min = 5.0, gen_cost_max = 20.0;
  double shed_penalty_factor = 10.0; // g = factor * gen_cost_max
  double station_fixed_cost_min = 50.0, station_fixed_cost_max = 150.0;
  double per_battery_cost = 0.2;
  double min_batteries = 0.0;
  double stock_limit_factor = 1.0; // U_i = factor * total battery demand
  double unmet_penalty = 10.0;     // per battery; far above any default detour
  double detour_unit_cost = 0.05;  // per distance unit
};

struct MiamiKnobs {
  int buses = 200;
  int lines = 275;
  int generator_buses = 40;
  int max_generators_per_bus = 6;
  int load_buses = 200;
  double total_capacity = 8200.0;
  double total_load = 6400.0;
  int lattice_width = 52;
  int lattice_height = 50; // 2600 road nodes
  double lattice_spacing = 1.0;
  int road_edges = 3900;
  int stations = 316;
  int routes = 100;
  double population = 5414712.0;
  double vehicle_ratio = 0.78;
  double phev_ratio = 0.1;
  double exchange_fraction = 0.1;
  bool two_factor_demand = false;
  double battery_power = 0.01;
  double reactance_min = 0.5, reactance_max = 2.0;
  double line_capacity_min_frac = 0.6, line_capacity_max_frac = 1.0;
  double gen_cost_min = 5.0, gen_cost_max = 20.0;
  double shed_penalty_factor = 10.0;
  double station_fixed_cost_min = 50.0, station_fixed_cost_max = 150.0;
  double per_battery_cost = 0.2;
  double min_batteries = 0.0;
  double stock_limit_factor = 0.1; // many candidates; cap each at 10% of total
  double unmet_penalty = 10.0;
  double detour_unit_cost = 0.05;
};

namespace detail {

// Draws `count` values ~ U[0.5, 1.5), scales them to the exact target total;
// the last entry absorbs the rounding residue.
inline std::vector<double> scaled_partition(Rng& rng, int count, double total) {
  std::vector<double> raw(count);
  double sum = 0.0;
  for (double& v : raw) {
    v = rng.uniform(0.5, 1.5);
    sum += v;
  }
  double scale = total / sum;
  double partial = 0.0;
  for (int i = 0; i + 1 < count; ++i) {
    raw[i] *= scale;
    partial += raw[i];
  }
  raw[count - 1] = total - partial;
  return raw;
}

inline std::vector<int> sample_without_replacement(Rng& rng, int population, int k) {
  std::vector<int> ids(population);
  std::iota(ids.begin(), ids.end(), 0);
  for (int i = 0; i < k; ++i) {
    int j = i + static_cast<int>(rng.next_below(population - i));
    std::swap(ids[i], ids[j]);
  }
  ids.resize(k);
  return ids;
}

struct GridShapeKnobs {
  int buses, lines, generator_buses, max_generators_per_bus, load_buses;
  double total_capacity, total_load;
  double width, height;
  double reactance_min, reactance_max;
  double line_capacity_min, line_capacity_max;
  double gen_cost_min, gen_cost_max;
  double shed_penalty;
};

// Random connected power grid with exact capacity and load totals.
// Draw order: bus coordinates, line topology, line data, generator placement,
// capacities, costs, loads.
inline void build_grid(Instance& inst, Rng& rng, const GridShapeKnobs& k) {
  for (int u = 0; u < k.buses; ++u)
    inst.buses.push_back({u, {rng.uniform(0, k.width), rng.uniform(0, k.height)}, 0.0,
                          k.shed_penalty});

  std::set<std::pair<int, int>> used;
  auto add_line = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    if (a == b || used.count({a, b})) return false;
    used.insert({a, b});
    inst.lines.push_back({a, b, rng.uniform(k.reactance_min, k.reactance_max),
                          rng.uniform(k.line_capacity_min, k.line_capacity_max)});
    return true;
  };
  for (int u = 1; u < k.buses; ++u) add_line(static_cast<int>(rng.next_below(u)), u);
  int guard = 0;
  while (static_cast<int>(inst.lines.size()) < k.lines && guard++ < 100000) {
    int a = static_cast<int>(rng.next_below(k.buses));
    int b = static_cast<int>(rng.next_below(k.buses));
    add_line(a, b);
  }
  if (static_cast<int>(inst.lines.size()) != k.lines)
    throw std::runtime_error("build_grid: could not reach the requested line count");

  auto gen_buses = sample_without_replacement(rng, k.buses, k.generator_buses);
  std::sort(gen_buses.begin(), gen_buses.end());
  std::vector<int> gen_bus_of;
  for (int bus : gen_buses) {
    int count = 1 + static_cast<int>(rng.next_below(k.max_generators_per_bus));
    for (int c = 0; c < count; ++c) gen_bus_of.push_back(bus);
  }
  auto caps = scaled_partition(rng, static_cast<int>(gen_bus_of.size()), k.total_capacity);
  for (std::size_t g = 0; g < gen_bus_of.size(); ++g)
    inst.generators.push_back({static_cast<int>(g), gen_bus_of[g], caps[g],
                               rng.uniform(k.gen_cost_min, k.gen_cost_max), true});

  auto load_buses = sample_without_replacement(rng, k.buses, k.load_buses);
  std::sort(load_buses.begin(), load_buses.end());
  auto loads = scaled_partition(rng, k.load_buses, k.total_load);
  for (int i = 0; i < k.load_buses; ++i) inst.buses[load_buses[i]].peak_load = loads[i];
}

// width x height lattice with the given spacing; all edges kept when
// target_edges < 0, otherwise a spanning tree plus random lattice edges.
inline void build_lattice(Instance& inst, Rng& rng, int width, int height, double spacing,
                          int target_edges) {
  auto id = [&](int r, int c) { return r * width + c; };
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c)
      inst.transport.nodes.push_back({c * spacing, r * spacing});

  std::vector<std::pair<int, int>> all_edges;
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      if (c + 1 < width) all_edges.push_back({id(r, c), id(r, c + 1)});
      if (r + 1 < height) all_edges.push_back({id(r, c), id(r + 1, c)});
    }
  if (target_edges < 0 || target_edges >= static_cast<int>(all_edges.size())) {
    for (auto [a, b] : all_edges) inst.transport.edges.push_back({a, b, spacing});
    return;
  }

  // spanning tree of the lattice first (row snake plus column drops)
  std::set<std::pair<int, int>> chosen;
  for (int c = 0; c + 1 < width; ++c) chosen.insert({id(0, c), id(0, c + 1)});
  for (int r = 0; r + 1 < height; ++r)
    for (int c = 0; c < width; ++c) chosen.insert({id(r, c), id(r + 1, c)});
  if (static_cast<int>(chosen.size()) > target_edges)
    throw std::invalid_argument("build_lattice: target below spanning size");

  std::vector<std::pair<int, int>> rest;
  for (auto e : all_edges)
    if (!chosen.count(e)) rest.push_back(e);
  for (std::size_t i = rest.size(); i > 1; --i)
    std::swap(rest[i - 1], rest[rng.next_below(i)]);
  for (std::size_t i = 0; static_cast<int>(chosen.size()) < target_edges; ++i)
    chosen.insert(rest[i]);

  for (auto [a, b] : chosen) inst.transport.edges.push_back({a, b, spacing});
}

// Stations at distinct road nodes mapped to their nearest bus; routes are
// shortest paths between random distinct endpoints, demand split by weight.
template <typename Knobs>
inline void build_stations_and_routes(Instance& inst, Rng& rng, const Knobs& k) {
  const int nodes = static_cast<int>(inst.transport.nodes.size());
  auto station_nodes = sample_without_replacement(rng, nodes, k.stations);
  std::sort(station_nodes.begin(), station_nodes.end());

  double total_demand = static_cast<double>(total_battery_demand(
      k.population, k.vehicle_ratio, k.phev_ratio,
      k.two_factor_demand ? 1.0 : k.exchange_fraction));

  for (int i = 0; i < k.stations; ++i) {
    CandidateStation st;
    st.id = i;
    st.transport_node = station_nodes[i];
    st.grid_bus = map_station_to_bus(inst.transport.nodes[st.transport_node], inst.buses);
    st.fixed_cost = rng.uniform(k.station_fixed_cost_min, k.station_fixed_cost_max);
    st.per_battery_cost = k.per_battery_cost;
    st.min_batteries = k.min_batteries;
    st.max_batteries = k.stock_limit_factor * total_demand;
    inst.stations.push_back(st);
  }

  for (int j = 0; j < k.routes; ++j) {
    int origin = static_cast<int>(rng.next_below(nodes));
    int dest = static_cast<int>(rng.next_below(nodes));
    if (dest == origin) dest = (dest + 1) % nodes;
    Route route;
    route.id = j;
    route.node_path = shortest_path_nodes(inst.transport, origin, dest);
    route.unmet_penalty = k.unmet_penalty;
    route.weight = 1.0;
    inst.routes.push_back(route);
  }
  auto demands = allocate_route_demands(total_demand, inst.routes);
  for (int j = 0; j < k.routes; ++j) inst.routes[j].avg_demand = demands[j];

  inst.params.battery_power = k.battery_power;
  inst.params.population = k.population;
  inst.params.vehicle_ratio = k.vehicle_ratio;
  inst.params.phev_ratio = k.phev_ratio;
  inst.params.exchange_fraction = k.exchange_fraction;
  inst.params.detour_unit_cost = k.detour_unit_cost;
}

}  // namespace detail

// Synthetic city in the RTS-79 shape: 25 buses / 38 lines, generation on 11
// buses with up to 6 units each, 2999 MW of capacity against 2880 MW of peak
// load, an 8x11 road lattice, 28 candidate stations and 10 routes.
inline Instance generate_rts_like_instance(std::uint64_t seed, const RtsKnobs& k = {}) {
  Instance inst;
  Rng rng(Rng::derive_seed(seed, 0xA11CE));
  detail::GridShapeKnobs grid{
      k.buses, k.lines, k.generator_buses, k.max_generators_per_bus, k.load_buses,
      k.total_capacity, k.total_load,
      (k.lattice_width - 1) * k.lattice_spacing, (k.lattice_height - 1) * k.lattice_spacing,
      k.reactance_min, k.reactance_max,
      k.line_capacity_min_frac * k.total_load, k.line_capacity_max_frac * k.total_load,
      k.gen_cost_min, k.gen_cost_max,
      k.shed_penalty_factor * k.gen_cost_max};
  detail::build_grid(inst, rng, grid);
  detail::build_lattice(inst, rng, k.lattice_width, k.lattice_height, k.lattice_spacing, -1);
  detail::build_stations_and_routes(inst, rng, k);
  return inst;
}

// Statistics-matched surrogate of the Miami case: 200 buses / 275 lines,
// 8200 MW of capacity against 6400 MW of load, a ~2600-node road network with
// ~3900 roads, 316 candidate stations and 100 routes. Synthetic stand-in for
// datasets that are not public.
inline Instance generate_miami_like_instance(std::uint64_t seed, const MiamiKnobs& k = {}) {
  Instance inst;
  Rng rng(Rng::derive_seed(seed, 0x31A31));
  detail::GridShapeKnobs grid{
      k.buses, k.lines, k.generator_buses, k.max_generators_per_bus, k.load_buses,
      k.total_capacity, k.total_load,
      (k.lattice_width - 1) * k.lattice_spacing, (k.lattice_height - 1) * k.lattice_spacing,
      k.reactance_min, k.reactance_max,
      k.line_capacity_min_frac * k.total_load, k.line_capacity_max_frac * k.total_load,
      k.gen_cost_min, k.gen_cost_max,
      k.shed_penalty_factor * k.gen_cost_max};
  detail::build_grid(inst, rng, grid);
  detail::build_lattice(inst, rng, k.lattice_width, k.lattice_height, k.lattice_spacing,
                        k.road_edges);
  detail::build_stations_and_routes(inst, rng, k);
  return inst;
}

}  // namespace v2g
