#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "v2g/instance.hpp"

namespace v2g {

struct Violation {
  std::string locator; // path-like, e.g. "lines[3].to_bus"
  std::string message;
};

using ValidationReport = std::vector<Violation>;

inline bool is_valid(const ValidationReport& report) { return report.empty(); }

// Structural validation. Never throws: every violated invariant is reported
// with a locator so callers can fix inputs in one pass.
inline ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;
  auto add = [&](std::string locator, std::string message) {
    report.push_back({std::move(locator), std::move(message)});
  };
  auto idx = [](const char* field, std::size_t i) {
    return std::string(field) + "[" + std::to_string(i) + "]";
  };

  const int nb = inst.num_buses();
  const int nn = static_cast<int>(inst.transport.nodes.size());

  // Buses: ids dense from 0, nonnegative data.
  {
    std::set<int> ids;
    for (std::size_t i = 0; i < inst.buses.size(); ++i) {
      const Bus& b = inst.buses[i];
      if (!ids.insert(b.id).second)
        add(idx("buses", i) + ".id", "duplicate bus id " + std::to_string(b.id));
      if (b.peak_load < 0) add(idx("buses", i) + ".peak_load", "negative peak load");
      if (b.shed_penalty < 0) add(idx("buses", i) + ".shed_penalty", "negative shed penalty");
    }
    for (int want = 0; want < nb; ++want)
      if (!ids.count(want))
        add("buses", "bus ids not dense from 0: missing id " + std::to_string(want));
  }

  auto bus_ok = [&](int id) { return id >= 0 && id < nb; };
  auto node_ok = [&](int id) { return id >= 0 && id < nn; };

  for (std::size_t i = 0; i < inst.lines.size(); ++i) {
    const Line& l = inst.lines[i];
    if (!bus_ok(l.from_bus))
      add(idx("lines", i) + ".from_bus", "unknown bus id " + std::to_string(l.from_bus));
    if (!bus_ok(l.to_bus))
      add(idx("lines", i) + ".to_bus", "unknown bus id " + std::to_string(l.to_bus));
    if (l.from_bus == l.to_bus) add(idx("lines", i), "self-loop line");
    if (!(l.reactance > 0)) add(idx("lines", i) + ".reactance", "reactance must be > 0");
    if (!(l.capacity > 0)) add(idx("lines", i) + ".capacity", "capacity must be > 0");
  }

  {
    std::set<int> ids;
    for (std::size_t i = 0; i < inst.generators.size(); ++i) {
      const Generator& g = inst.generators[i];
      if (!ids.insert(g.id).second)
        add(idx("generators", i) + ".id", "duplicate generator id");
      if (!bus_ok(g.bus))
        add(idx("generators", i) + ".bus", "unknown bus id " + std::to_string(g.bus));
      if (g.max_capacity < 0) add(idx("generators", i) + ".max_capacity", "negative capacity");
      if (g.unit_cost < 0) add(idx("generators", i) + ".unit_cost", "negative unit cost");
    }
  }

  for (std::size_t i = 0; i < inst.transport.edges.size(); ++i) {
    const TransportEdge& e = inst.transport.edges[i];
    if (!node_ok(e.from))
      add(idx("transport.edges", i) + ".from", "unknown node id " + std::to_string(e.from));
    if (!node_ok(e.to))
      add(idx("transport.edges", i) + ".to", "unknown node id " + std::to_string(e.to));
    if (e.length < 0) add(idx("transport.edges", i) + ".length", "negative edge length");
  }

  // Adjacency lookup for route path checks.
  std::set<std::pair<int, int>> adj;
  for (const TransportEdge& e : inst.transport.edges) {
    adj.insert({e.from, e.to});
    adj.insert({e.to, e.from});
  }

  for (std::size_t i = 0; i < inst.routes.size(); ++i) {
    const Route& r = inst.routes[i];
    if (r.node_path.empty()) add(idx("routes", i) + ".node_path", "empty path");
    std::set<int> seen;
    for (std::size_t k = 0; k < r.node_path.size(); ++k) {
      int n = r.node_path[k];
      if (!node_ok(n)) {
        add(idx("routes", i) + ".node_path[" + std::to_string(k) + "]",
            "unknown node id " + std::to_string(n));
        continue;
      }
      if (!seen.insert(n).second)
        add(idx("routes", i) + ".node_path", "path revisits node " + std::to_string(n));
      if (k > 0 && node_ok(r.node_path[k - 1]) && !adj.count({r.node_path[k - 1], n}))
        add(idx("routes", i) + ".node_path",
            "no edge between consecutive nodes " + std::to_string(r.node_path[k - 1]) +
                " and " + std::to_string(n));
    }
    if (r.avg_demand < 0) add(idx("routes", i) + ".avg_demand", "negative demand");
    if (r.unmet_penalty < 0) add(idx("routes", i) + ".unmet_penalty", "negative penalty");
    if (r.weight < 0) add(idx("routes", i) + ".weight", "negative weight");
  }

  for (std::size_t i = 0; i < inst.stations.size(); ++i) {
    const CandidateStation& s = inst.stations[i];
    if (!node_ok(s.transport_node))
      add(idx("stations", i) + ".transport_node",
          "unknown node id " + std::to_string(s.transport_node));
    if (!bus_ok(s.grid_bus))
      add(idx("stations", i) + ".grid_bus", "unknown bus id " + std::to_string(s.grid_bus));
    if (s.min_batteries < 0) add(idx("stations", i) + ".min_batteries", "negative lower bound");
    if (s.min_batteries > s.max_batteries)
      add(idx("stations", i), "min_batteries " + std::to_string(s.min_batteries) +
                                  " exceeds max_batteries " + std::to_string(s.max_batteries));
    if (s.fixed_cost < 0) add(idx("stations", i) + ".fixed_cost", "negative cost");
    if (s.per_battery_cost < 0) add(idx("stations", i) + ".per_battery_cost", "negative cost");
  }

  if (!(inst.params.battery_power > 0))
    add("params.battery_power", "battery power must be > 0");
  if (inst.params.population < 0) add("params.population", "negative population");
  for (auto [value, name] : {std::pair<double, const char*>{inst.params.vehicle_ratio, "vehicle_ratio"},
                             {inst.params.phev_ratio, "phev_ratio"},
                             {inst.params.exchange_fraction, "exchange_fraction"}}) {
    if (value < 0 || value > 1)
      add(std::string("params.") + name, "ratio outside [0, 1]");
  }
  if (inst.params.detour_unit_cost < 0) add("params.detour_unit_cost", "negative cost");

  return report;
}

}  // namespace v2g
