#pragma once

#include <algorithm>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "v2g/instance.hpp"

namespace v2g {

// Single-source shortest path lengths on the undirected road graph.
// Unreachable nodes keep kInf.
inline std::vector<double> shortest_path_lengths(const TransportNetwork& net, int source) {
  const int n = static_cast<int>(net.nodes.size());
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const TransportEdge& e : net.edges) {
    adj[e.from].push_back({e.to, e.length});
    adj[e.to].push_back({e.from, e.length});
  }
  std::vector<double> dist(n, kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (auto [v, len] : adj[u]) {
      double nd = d + len;
      if (nd < dist[v]) {
        dist[v] = nd;
        heap.push({nd, v});
      }
    }
  }
  return dist;
}

// Extra distance driven to swap at `station` instead of following the route:
// sp(origin, station) + sp(station, destination) - sp(origin, destination),
// times the per-distance cost. nullopt = station unreachable from the route;
// no assignment variable is created for such pairs.
inline std::optional<double> detour_cost(const Route& route, const CandidateStation& station,
                                         const TransportNetwork& net, double unit_cost) {
  if (route.node_path.empty()) throw std::invalid_argument("detour_cost: empty route");
  const int origin = route.node_path.front();
  const int destination = route.node_path.back();
  auto from_origin = shortest_path_lengths(net, origin);
  auto from_destination = shortest_path_lengths(net, destination);
  const int s = station.transport_node;
  if (!std::isfinite(from_origin[s]) || !std::isfinite(from_destination[s]))
    return std::nullopt;
  double detour = from_origin[s] + from_destination[s] - from_origin[destination];
  return unit_cost * std::max(0.0, detour);
}

// Detour costs for every (station, route) pair; costs[i][j] is kInf for
// unreachable pairs. Two Dijkstra runs per route.
inline std::vector<std::vector<double>> detour_cost_matrix(const Instance& inst) {
  const int ni = inst.num_stations();
  const int nj = inst.num_routes();
  std::vector<std::vector<double>> costs(ni, std::vector<double>(nj, kInf));
  for (int j = 0; j < nj; ++j) {
    const Route& route = inst.routes[j];
    if (route.node_path.empty()) continue;
    auto from_origin = shortest_path_lengths(inst.transport, route.node_path.front());
    auto from_destination = shortest_path_lengths(inst.transport, route.node_path.back());
    double direct = from_origin[route.node_path.back()];
    for (int i = 0; i < ni; ++i) {
      int s = inst.stations[i].transport_node;
      if (!std::isfinite(from_origin[s]) || !std::isfinite(from_destination[s])) continue;
      double detour = std::max(0.0, from_origin[s] + from_destination[s] - direct);
      costs[i][j] = inst.params.detour_unit_cost * detour;
    }
  }
  return costs;
}

// Shortest path as a node sequence (Dijkstra with lowest-id tie breaking, so
// the same endpoints always give the same path). Empty when unreachable.
inline std::vector<int> shortest_path_nodes(const TransportNetwork& net, int from, int to) {
  const int n = static_cast<int>(net.nodes.size());
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const TransportEdge& e : net.edges) {
    adj[e.from].push_back({e.to, e.length});
    adj[e.to].push_back({e.from, e.length});
  }
  std::vector<double> dist(n, kInf);
  std::vector<int> prev(n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[from] = 0.0;
  heap.push({0.0, from});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (auto [v, len] : adj[u]) {
      double nd = d + len;
      if (nd < dist[v] || (nd == dist[v] && prev[v] >= 0 && u < prev[v])) {
        dist[v] = nd;
        prev[v] = u;
        heap.push({nd, v});
      }
    }
  }
  if (!std::isfinite(dist[to])) return {};
  std::vector<int> path{to};
  for (int u = to; u != from;) {
    u = prev[u];
    path.push_back(u);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

// Nearest bus by Euclidean distance; ties broken by lowest bus id so the
// result is independent of the order buses are listed in.
inline int map_station_to_bus(const Point2& station_point, const std::vector<Bus>& buses) {
  if (buses.empty()) throw std::invalid_argument("map_station_to_bus: no buses");
  int best_id = -1;
  double best_dist = kInf;
  for (const Bus& b : buses) {
    double d = distance(station_point, b.coords);
    if (d < best_dist || (d == best_dist && b.id < best_id)) {
      best_dist = d;
      best_id = b.id;
    }
  }
  return best_id;
}

}  // namespace v2g
