#pragma once

#include <cstdint>
#include <vector>

#include "v2g/common.hpp"

namespace v2g {

struct Bus {
  int id = 0;
  Point2 coords;
  double peak_load = 0.0;    // MW, base for the per-scenario load draw
  double shed_penalty = 0.0; // cost per MW shed
};

struct Line {
  int from_bus = 0;
  int to_bus = 0;
  double reactance = 0.0; // per unit, > 0
  double capacity = 0.0;  // MW, flow limit in either direction
};

struct Generator {
  int id = 0;
  int bus = 0;
  double max_capacity = 0.0; // MW, base for the per-scenario capacity
  double unit_cost = 0.0;    // cost per MW generated
  bool renewable_eligible = true;
};

// Undirected road graph; nodes carry planar coordinates so they can be
// mapped to the nearest grid bus.
struct TransportEdge {
  int from = 0;
  int to = 0;
  double length = 0.0;
};

struct TransportNetwork {
  std::vector<Point2> nodes;
  std::vector<TransportEdge> edges;
};

struct Route {
  int id = 0;
  std::vector<int> node_path; // shortest origin-destination path
  double avg_demand = 0.0;    // expected batteries per scenario
  double unmet_penalty = 0.0; // cost per unserved battery
  double weight = 1.0;        // utilization weight for demand allocation
};

struct CandidateStation {
  int id = 0;
  int transport_node = 0;
  int grid_bus = 0;          // m(i)
  double fixed_cost = 0.0;   // f_i
  double per_battery_cost = 0.0; // r_i
  double min_batteries = 0.0;    // L_i
  double max_batteries = 0.0;    // U_i
};

struct InstanceParams {
  double battery_power = 0.01; // MW per battery discharged to the grid
  double population = 0.0;
  double vehicle_ratio = 0.78;
  double phev_ratio = 0.1;
  double exchange_fraction = 0.1;
  double detour_unit_cost = 1.0; // cost per distance unit of detour
};

struct Instance {
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<Generator> generators;
  TransportNetwork transport;
  std::vector<Route> routes;
  std::vector<CandidateStation> stations;
  InstanceParams params;

  int num_buses() const { return static_cast<int>(buses.size()); }
  int num_lines() const { return static_cast<int>(lines.size()); }
  int num_generators() const { return static_cast<int>(generators.size()); }
  int num_routes() const { return static_cast<int>(routes.size()); }
  int num_stations() const { return static_cast<int>(stations.size()); }
};

}  // namespace v2g
