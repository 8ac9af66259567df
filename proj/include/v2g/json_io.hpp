#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "v2g/instance.hpp"
#include "v2g/metrics.hpp"
#include "v2g/scenario.hpp"

namespace v2g {

using json = nlohmann::json;

// --- instance ---------------------------------------------------------------
// Top-level keys: buses, lines, generators, transport, routes, stations,
// params. Field names follow the domain types; this schema is the contract
// for files produced and consumed by the CLI.

inline json instance_to_json(const Instance& inst) {
  json j;
  j["buses"] = json::array();
  for (const Bus& b : inst.buses)
    j["buses"].push_back({{"id", b.id},
                          {"coords", {b.coords.x, b.coords.y}},
                          {"peak_load", b.peak_load},
                          {"shed_penalty", b.shed_penalty}});
  j["lines"] = json::array();
  for (const Line& l : inst.lines)
    j["lines"].push_back({{"from_bus", l.from_bus},
                          {"to_bus", l.to_bus},
                          {"reactance", l.reactance},
                          {"capacity", l.capacity}});
  j["generators"] = json::array();
  for (const Generator& g : inst.generators)
    j["generators"].push_back({{"id", g.id},
                               {"bus", g.bus},
                               {"max_capacity", g.max_capacity},
                               {"unit_cost", g.unit_cost},
                               {"renewable_eligible", g.renewable_eligible}});
  json nodes = json::array();
  for (const Point2& p : inst.transport.nodes) nodes.push_back({p.x, p.y});
  json edges = json::array();
  for (const TransportEdge& e : inst.transport.edges) edges.push_back({e.from, e.to, e.length});
  j["transport"] = {{"nodes", nodes}, {"edges", edges}};
  j["routes"] = json::array();
  for (const Route& r : inst.routes)
    j["routes"].push_back({{"id", r.id},
                           {"node_path", r.node_path},
                           {"avg_demand", r.avg_demand},
                           {"unmet_penalty", r.unmet_penalty},
                           {"weight", r.weight}});
  j["stations"] = json::array();
  for (const CandidateStation& s : inst.stations)
    j["stations"].push_back({{"id", s.id},
                             {"transport_node", s.transport_node},
                             {"grid_bus", s.grid_bus},
                             {"fixed_cost", s.fixed_cost},
                             {"per_battery_cost", s.per_battery_cost},
                             {"min_batteries", s.min_batteries},
                             {"max_batteries", s.max_batteries}});
  j["params"] = {{"battery_power", inst.params.battery_power},
                 {"population", inst.params.population},
                 {"vehicle_ratio", inst.params.vehicle_ratio},
                 {"phev_ratio", inst.params.phev_ratio},
                 {"exchange_fraction", inst.params.exchange_fraction},
                 {"detour_unit_cost", inst.params.detour_unit_cost}};
  return j;
}

inline Instance instance_from_json(const json& j) {
  Instance inst;
  for (const json& b : j.at("buses")) {
    Bus bus;
    bus.id = b.at("id").get<int>();
    bus.coords = {b.at("coords").at(0).get<double>(), b.at("coords").at(1).get<double>()};
    bus.peak_load = b.at("peak_load").get<double>();
    bus.shed_penalty = b.at("shed_penalty").get<double>();
    inst.buses.push_back(bus);
  }
  for (const json& l : j.at("lines"))
    inst.lines.push_back({l.at("from_bus").get<int>(), l.at("to_bus").get<int>(),
                          l.at("reactance").get<double>(), l.at("capacity").get<double>()});
  for (const json& g : j.at("generators"))
    inst.generators.push_back({g.at("id").get<int>(), g.at("bus").get<int>(),
                               g.at("max_capacity").get<double>(),
                               g.at("unit_cost").get<double>(),
                               g.at("renewable_eligible").get<bool>()});
  for (const json& n : j.at("transport").at("nodes"))
    inst.transport.nodes.push_back({n.at(0).get<double>(), n.at(1).get<double>()});
  for (const json& e : j.at("transport").at("edges"))
    inst.transport.edges.push_back(
        {e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
  for (const json& r : j.at("routes")) {
    Route route;
    route.id = r.at("id").get<int>();
    route.node_path = r.at("node_path").get<std::vector<int>>();
    route.avg_demand = r.at("avg_demand").get<double>();
    route.unmet_penalty = r.at("unmet_penalty").get<double>();
    route.weight = r.at("weight").get<double>();
    inst.routes.push_back(route);
  }
  for (const json& s : j.at("stations")) {
    CandidateStation st;
    st.id = s.at("id").get<int>();
    st.transport_node = s.at("transport_node").get<int>();
    st.grid_bus = s.at("grid_bus").get<int>();
    st.fixed_cost = s.at("fixed_cost").get<double>();
    st.per_battery_cost = s.at("per_battery_cost").get<double>();
    st.min_batteries = s.at("min_batteries").get<double>();
    st.max_batteries = s.at("max_batteries").get<double>();
    inst.stations.push_back(st);
  }
  const json& p = j.at("params");
  inst.params.battery_power = p.at("battery_power").get<double>();
  inst.params.population = p.at("population").get<double>();
  inst.params.vehicle_ratio = p.at("vehicle_ratio").get<double>();
  inst.params.phev_ratio = p.at("phev_ratio").get<double>();
  inst.params.exchange_fraction = p.at("exchange_fraction").get<double>();
  inst.params.detour_unit_cost = p.at("detour_unit_cost").get<double>();
  return inst;
}

// --- scenarios ---------------------------------------------------------------

inline json scenario_set_to_json(const ScenarioSet& set) {
  json j;
  j["assignment"] = {{"penetration", set.assignment.penetration},
                     {"renewable_flags", set.assignment.renewable_flags},
                     {"seed", set.assignment.seed}};
  j["seed"] = set.seed;
  j["scenarios"] = json::array();
  for (const Scenario& s : set.scenarios)
    j["scenarios"].push_back({{"id", s.id},
                              {"route_demands", s.route_demands},
                              {"bus_loads", s.bus_loads},
                              {"gen_capacities", s.gen_capacities},
                              {"gen_costs", s.gen_costs},
                              {"probability", s.probability}});
  return j;
}

inline ScenarioSet scenario_set_from_json(const json& j) {
  ScenarioSet set;
  const json& a = j.at("assignment");
  set.assignment.penetration = a.at("penetration").get<double>();
  set.assignment.renewable_flags = a.at("renewable_flags").get<std::vector<bool>>();
  set.assignment.seed = a.at("seed").get<std::uint64_t>();
  set.seed = j.at("seed").get<std::uint64_t>();
  for (const json& s : j.at("scenarios")) {
    Scenario sc;
    sc.id = s.at("id").get<int>();
    sc.route_demands = s.at("route_demands").get<std::vector<double>>();
    sc.bus_loads = s.at("bus_loads").get<std::vector<double>>();
    sc.gen_capacities = s.at("gen_capacities").get<std::vector<double>>();
    sc.gen_costs = s.at("gen_costs").get<std::vector<double>>();
    sc.probability = s.at("probability").get<double>();
    set.scenarios.push_back(sc);
  }
  return set;
}

// --- solutions ---------------------------------------------------------------

inline json siting_solution_to_json(const SitingSolution& sol) {
  json j;
  j["status"] = to_string(sol.status);
  j["objective"] = sol.objective;
  j["bound"] = sol.bound;
  j["gap"] = sol.gap;
  j["node_count"] = sol.node_count;
  j["lp_iterations"] = sol.lp_iterations;
  j["x"] = sol.x;
  j["w"] = sol.w;
  json per = json::array();
  for (const ScenarioAggregates& a : sol.per_scenario)
    per.push_back({{"recourse_cost", a.recourse_cost},
                   {"total_shed", a.total_shed},
                   {"total_unmet", a.total_unmet},
                   {"total_load", a.total_load},
                   {"total_demand", a.total_demand}});
  j["per_scenario"] = per;
  return j;
}

inline json metrics_to_json(const Metrics& m) {
  return {{"load_shed_fraction", m.load_shed_fraction},
          {"unmet_battery_fraction", m.unmet_battery_fraction},
          {"opened_stations", m.opened_stations},
          {"objective", m.objective}};
}

// --- files -------------------------------------------------------------------

// Write-then-rename so readers never observe a partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << content;
  }
  std::filesystem::rename(tmp, path);
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  json j;
  is >> j;
  return j;
}

}  // namespace v2g
