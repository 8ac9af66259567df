#include <catch2/catch.hpp>

#include <algorithm>
#include <deque>

#include "test_helpers.hpp"
#include "v2g/rng.hpp"
#include "v2g/transport.hpp"
#include "v2g/validate.hpp"

using namespace v2g;
using testutil::toy_instance;

namespace {

// width x height unit lattice, row-major node ids
TransportNetwork unit_lattice(int width, int height) {
  TransportNetwork net;
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) net.nodes.push_back({double(c), double(r)});
  auto id = [&](int r, int c) { return r * width + c; };
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      if (c + 1 < width) net.edges.push_back({id(r, c), id(r, c + 1), 1.0});
      if (r + 1 < height) net.edges.push_back({id(r, c), id(r + 1, c), 1.0});
    }
  return net;
}

// independent oracle: breadth-first search on the unit lattice
int bfs_distance(const TransportNetwork& net, int from, int to) {
  std::vector<int> dist(net.nodes.size(), -1);
  std::vector<std::vector<int>> adj(net.nodes.size());
  for (const auto& e : net.edges) {
    adj[e.from].push_back(e.to);
    adj[e.to].push_back(e.from);
  }
  std::deque<int> queue{from};
  dist[from] = 0;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : adj[u])
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
  }
  return dist[to];
}

}  // namespace

TEST_CASE("well-formed toy instance validates cleanly") {
  CHECK(validate_instance(toy_instance()).empty());
}

TEST_CASE("dangling line reference is reported with a locator") {
  Instance inst = toy_instance();
  inst.lines[1].to_bus = 99;
  auto report = validate_instance(inst);
  REQUIRE(report.size() == 1);
  CHECK(report[0].locator == "lines[1].to_bus");
}

TEST_CASE("inverted station battery bounds are reported") {
  Instance inst = toy_instance();
  inst.stations[0].min_batteries = 10.0;
  inst.stations[0].max_batteries = 5.0;
  auto report = validate_instance(inst);
  REQUIRE(report.size() == 1);
  CHECK(report[0].locator == "stations[0]");
}

TEST_CASE("detour cost is zero for a station on the route") {
  Instance inst = toy_instance();
  // station 0 sits at node 0, the origin of route 0
  auto cost = detour_cost(inst.routes[0], inst.stations[0], inst.transport,
                          inst.params.detour_unit_cost);
  REQUIRE(cost.has_value());
  CHECK(*cost == Approx(0.0).margin(1e-12));
}

TEST_CASE("one-step lattice detour costs two edge lengths") {
  TransportNetwork net = unit_lattice(5, 3);
  Route route;
  route.id = 0;
  route.node_path = {0, 1, 2, 3, 4}; // along the bottom row
  CandidateStation st;
  st.transport_node = 5 + 2; // directly above node 2
  auto cost = detour_cost(route, st, net, 3.0);
  REQUIRE(cost.has_value());
  CHECK(*cost == Approx(2.0 * 3.0)); // one step off, one step back, times unit cost

  SECTION("matches the breadth-first oracle for every lattice node") {
    int direct = bfs_distance(net, 0, 4);
    for (int node = 0; node < 15; ++node) {
      CandidateStation s2;
      s2.transport_node = node;
      auto c = detour_cost(route, s2, net, 1.0);
      REQUIRE(c.has_value());
      int oracle = bfs_distance(net, 0, node) + bfs_distance(net, node, 4) - direct;
      CHECK(*c == Approx(double(oracle)).margin(1e-12));
    }
  }
}

TEST_CASE("stations in a disconnected component are unreachable") {
  TransportNetwork net = unit_lattice(3, 2);
  net.nodes.push_back({10.0, 10.0}); // isolated node 6
  Route route;
  route.node_path = {0, 1, 2};
  CandidateStation st;
  st.transport_node = 6;
  CHECK_FALSE(detour_cost(route, st, net, 1.0).has_value());
}

TEST_CASE("detour cost is nonnegative across random lattice stations and routes") {
  TransportNetwork net = unit_lattice(6, 6);
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    int a = static_cast<int>(rng.next_below(36));
    int b = static_cast<int>(rng.next_below(36));
    if (a == b) continue;
    Route route;
    route.node_path = {a, b}; // only endpoints matter for the detour
    CandidateStation st;
    st.transport_node = static_cast<int>(rng.next_below(36));
    auto c = detour_cost(route, st, net, 1.0);
    REQUIRE(c.has_value());
    CHECK(*c >= 0.0);
  }
}

TEST_CASE("nearest-bus mapping matches a linear scan and ignores list order") {
  Rng rng(4242);
  std::vector<Bus> buses;
  for (int i = 0; i < 25; ++i)
    buses.push_back({i, {rng.uniform(0, 10), rng.uniform(0, 10)}, 0.0, 0.0});

  for (int trial = 0; trial < 50; ++trial) {
    Point2 p{rng.uniform(0, 10), rng.uniform(0, 10)};
    int got = map_station_to_bus(p, buses);

    int best = -1;
    double best_d = kInf;
    for (const Bus& b : buses) {
      double d = distance(p, b.coords);
      if (d < best_d) {
        best_d = d;
        best = b.id;
      }
    }
    CHECK(got == best);

    std::vector<Bus> shuffled = buses;
    for (std::size_t i = shuffled.size(); i > 1; --i)
      std::swap(shuffled[i - 1], shuffled[rng.next_below(i)]);
    CHECK(map_station_to_bus(p, shuffled) == got);
  }
}

TEST_CASE("nearest-bus mapping is exact at a bus and breaks ties by lowest id") {
  std::vector<Bus> buses = {
      {0, {5.0, 5.0}, 0, 0}, {1, {0.0, 0.0}, 0, 0}, {2, {2.0, 0.0}, 0, 0},
      {3, {9.0, 9.0}, 0, 0}, {4, {1.0, 7.0}, 0, 0}, {5, {4.0, 0.0}, 0, 0},
      {6, {7.0, 1.0}, 0, 0}, {7, {6.0, 0.0}, 0, 0},
  };
  CHECK(map_station_to_bus({1.0, 7.0}, buses) == 4);
  // point at (3, 0) is exactly 1.0 from bus 2 and bus 5
  CHECK(map_station_to_bus({3.0, 0.0}, buses) == 2);
  CHECK_THROWS_AS(map_station_to_bus({0, 0}, {}), std::invalid_argument);
}
