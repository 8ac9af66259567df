#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "v2g/build.hpp"
#include "v2g/instance.hpp"
#include "v2g/model.hpp"
#include "v2g/scenario.hpp"

namespace v2g {

struct FeasViolation {
  std::string constraint; // e.g. "serve", "flow", "binary"
  int entity = -1;
  int scenario = -1;
  double residual = 0.0;

  std::string describe() const {
    std::string s = constraint;
    if (entity >= 0) s += "[" + std::to_string(entity) + "]";
    if (scenario >= 0) s += "@s" + std::to_string(scenario);
    return s + " residual " + std::to_string(residual);
  }
};

// Re-evaluates the model equations directly from instance and scenario data
// (not from the assembled matrix) and reports everything exceeding tol.
inline std::vector<FeasViolation> check_solution_feasibility(const Instance& inst,
                                                             const ScenarioSet& set,
                                                             const MILPModel& model,
                                                             const std::vector<double>& v,
                                                             double tol = 1e-6) {
  std::vector<FeasViolation> out;
  const VarRegistry& reg = model.registry;
  if (static_cast<int>(v.size()) != reg.num_cols()) {
    out.push_back({"dimension", -1, -1,
                   static_cast<double>(v.size()) - reg.num_cols()});
    return out;
  }
  auto report = [&](const char* c, int entity, int sc, double residual) {
    if (residual > tol) out.push_back({c, entity, sc, residual});
  };

  const int I = inst.num_stations(), J = inst.num_routes(), N = inst.num_buses();
  const int L = inst.num_lines(), G = inst.num_generators();
  const int S = set.size();
  const bool grid = reg.with_grid();
  const double a = inst.params.battery_power;

  for (int i = 0; i < I; ++i) {
    double x = v[reg.x(i)], w = v[reg.w(i)];
    report("binary", i, -1, std::min(std::abs(x), std::abs(x - 1.0)));
    report("stock_lower", i, -1, inst.stations[i].min_batteries * x - w);
    report("stock_upper", i, -1, w - inst.stations[i].max_batteries * x);
    report("nonneg_w", i, -1, -w);
  }
  if (model.config.station_budget) {
    double sum = 0.0;
    for (int i = 0; i < I; ++i) sum += v[reg.x(i)];
    report("budget", -1, -1, sum - *model.config.station_budget);
  }
  if (model.config.fixed_siting) {
    for (int i = 0; i < I; ++i)
      report("fixed_siting", i, -1, std::abs(v[reg.x(i)] - (*model.config.fixed_siting)[i]));
  }

  std::vector<int> refs;
  if (grid) refs = detail::reference_buses(inst, model.config.reference_bus);

  for (int sc = 0; sc < S; ++sc) {
    const Scenario& w = set.scenarios[sc];
    for (int i = 0; i < I; ++i) {
      double t = v[reg.t(i, sc)], s = v[reg.s(i, sc)];
      report("nonneg_t", i, sc, -t);
      report("nonneg_s", i, sc, -s);
      report("avail", i, sc, s + t - v[reg.w(i)]);
      double served = 0.0;
      bool any = false;
      for (int j = 0; j < J; ++j)
        if (int col = reg.y(i, j, sc); col >= 0) {
          served += v[col];
          any = true;
        }
      if (any) report("serve", i, sc, served - t);
    }
    for (int j = 0; j < J; ++j) {
      double q = v[reg.q(j, sc)];
      report("nonneg_q", j, sc, -q);
      double total = q;
      for (int i = 0; i < I; ++i)
        if (int col = reg.y(i, j, sc); col >= 0) {
          report("nonneg_y", i * J + j, sc, -v[col]);
          total += v[col];
        }
      report("demand", j, sc, std::abs(total - w.route_demands[j]));
    }
    if (!grid) continue;

    for (int l = 0; l < L; ++l) {
      const Line& line = inst.lines[l];
      double alpha = v[reg.alpha(l, sc)];
      report("line_capacity", l, sc, std::abs(alpha) - line.capacity);
      double theta_u = v[reg.theta(line.from_bus, sc)];
      double theta_v = v[reg.theta(line.to_bus, sc)];
      report("flow", l, sc, std::abs(line.reactance * alpha - theta_u + theta_v));
    }
    for (int g = 0; g < G; ++g) {
      double beta = v[reg.beta(g, sc)];
      report("nonneg_beta", g, sc, -beta);
      report("generation_capacity", g, sc, beta - w.gen_capacities[g]);
    }
    for (int u = 0; u < N; ++u) {
      double delta = v[reg.delta(u, sc)];
      report("nonneg_delta", u, sc, -delta);
      report("shed_bound", u, sc, delta - w.bus_loads[u]);
      if (refs[u] == u) report("theta_ref", u, sc, std::abs(v[reg.theta(u, sc)]));

      double net_out = 0.0;
      for (int l = 0; l < L; ++l) {
        if (inst.lines[l].from_bus == u) net_out += v[reg.alpha(l, sc)];
        else if (inst.lines[l].to_bus == u) net_out -= v[reg.alpha(l, sc)];
      }
      double injection = -w.bus_loads[u] + delta;
      for (int g = 0; g < G; ++g)
        if (inst.generators[g].bus == u) injection += v[reg.beta(g, sc)];
      for (int i = 0; i < I; ++i)
        if (inst.stations[i].grid_bus == u) injection += a * v[reg.s(i, sc)];
      report("balance", u, sc, std::abs(net_out - injection));
    }
  }
  return out;
}

}  // namespace v2g
