#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "v2g/branch_bound.hpp"
#include "v2g/build.hpp"
#include "v2g/metrics.hpp"
#include "v2g/scenario.hpp"
#include "v2g/simplex.hpp"

namespace v2g {

// One family of experiment cases swept over renewable penetration levels.
// GE case: unmet-PHEV penalty zeroed; the base case allows no stations and
// the variants scale the load-shedding penalty to stimulate station opening.
// V2G case: full model; the base case fixes the transport-optimal siting and
// the variants cap the number of opened stations.
struct ExperimentPlan {
  enum class CaseKind { GE, V2G };
  CaseKind kind = CaseKind::V2G;
  bool include_base = true;                          // GE-1 / V2G-1
  std::vector<double> shed_multipliers = {2, 5, 10, 20}; // GE-2..5
  std::vector<int> budgets = {6, 8, 10, 12};             // V2G-2..5
  std::vector<double> levels = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                0.6, 0.7, 0.8, 0.9, 1.0};
  int scenario_count = 100;
  std::vector<std::uint64_t> seeds = {1};
  double gap_target = 0.01;
  std::int64_t max_nodes = 100'000;
  std::int64_t max_lp_iterations = 1'000'000;
  SamplingOptions sampling;
  int jobs = 1;
};

struct SweepCell {
  std::string case_name; // "GE-1", "V2G-3", ...
  double level = 0.0;
  std::uint64_t seed = 0;
  Metrics metrics;
  double gap = 0.0;
  std::int64_t nodes = 0;
  std::int64_t wall_ms = 0;
  MILPStatus status = MILPStatus::NumericalError;
  std::string error; // nonempty when the cell failed; sweep continues
};

struct SweepResult {
  std::vector<SweepCell> cells; // one per (case, level, seed), in plan order
};

inline const char* sweep_csv_header() {
  return "case,level,seed,load_shed_frac,unmet_frac,opened,objective,gap,nodes,wall_ms";
}

inline void write_sweep_csv(const SweepResult& result, std::ostream& os) {
  os << sweep_csv_header() << "\n";
  char buf[256];
  for (const SweepCell& c : result.cells) {
    if (!c.error.empty()) {
      os << c.case_name << "," << c.level << "," << c.seed << ",error,,,,,," << c.error << "\n";
      continue;
    }
    std::snprintf(buf, sizeof buf, "%s,%.1f,%llu,%.17g,%.17g,%d,%.17g,%.17g,%lld,%lld",
                  c.case_name.c_str(), c.level, static_cast<unsigned long long>(c.seed),
                  c.metrics.load_shed_fraction, c.metrics.unmet_battery_fraction,
                  c.metrics.opened_stations, c.metrics.objective, c.gap,
                  static_cast<long long>(c.nodes), static_cast<long long>(c.wall_ms));
    os << buf << "\n";
  }
}

// Siting that best serves the battery demand alone: the model with every grid
// cost and constraint removed (stock, availability, demand and service
// structure only). Used as the fixed siting of the V2G base case.
struct TransportSiting {
  std::vector<double> x;
  int opened = 0;
  double objective = 0.0;
  MILPStatus status = MILPStatus::NumericalError;
};

inline TransportSiting find_transport_optimal_siting(const Instance& inst,
                                                     const ScenarioSet& set,
                                                     double gap_target = 0.01) {
  ModelConfig cfg;
  cfg.transport_only = true;
  MILPModel model = build_extensive_form(inst, set, cfg);
  MILPOptions opts;
  opts.gap_target = gap_target;
  MILPSolution sol = solve_milp(model, opts);

  TransportSiting out;
  out.status = sol.status;
  out.objective = sol.objective;
  if (!sol.has_incumbent) return out;
  for (int i = 0; i < inst.num_stations(); ++i) {
    double xi = std::round(sol.x[model.registry.x(i)]);
    out.x.push_back(xi);
    out.opened += static_cast<int>(xi);
  }
  return out;
}

namespace detail {

// First stage forced to all-closed: the extensive form separates by scenario,
// so solve one recourse LP per scenario instead of the coupled model.
inline SitingSolution solve_all_closed(const Instance& inst, const ScenarioSet& set,
                                       const ModelConfig& cfg, const SimplexOptions& sopts) {
  SitingSolution out;
  out.status = MILPStatus::GapReached;
  out.x.assign(inst.num_stations(), 0.0);
  out.w.assign(inst.num_stations(), 0.0);
  auto detours = detour_cost_matrix(inst);
  double expected = 0.0;
  for (const Scenario& sc : set.scenarios) {
    SecondStageLP ss = build_second_stage_lp(inst, sc, out.x, out.w, cfg);
    LPSolution sol = solve_lp(ss.lp, sopts);
    if (sol.status != LPStatus::Optimal) {
      out.status = sol.status == LPStatus::Infeasible ? MILPStatus::Infeasible
                                                      : MILPStatus::NumericalError;
      return out;
    }
    out.lp_iterations += sol.iterations;
    out.per_scenario.push_back(
        detail::aggregate_block(ss.registry, sol.x, 0, inst, sc, detours));
    expected += sc.probability * sol.objective;
  }
  out.objective = expected;
  out.bound = expected;
  out.gap = 0.0;
  return out;
}

}  // namespace detail

struct SweepCellSpec {
  std::string case_name;
  ModelConfig config;
  double shed_multiplier = 1.0;
  double level = 0.0;
  std::uint64_t seed = 0;
};

// Full sweep: for every (case, level, seed) assign renewables, sample the
// scenario set, build and solve the case's model, and measure. Cell failures
// are recorded in the cell and the sweep continues.
inline SweepResult run_penetration_sweep(const Instance& inst, const ExperimentPlan& plan) {
  if (plan.seeds.empty())
    throw std::invalid_argument("run_penetration_sweep: at least one seed required");
  if (plan.scenario_count < 1)
    throw std::invalid_argument("run_penetration_sweep: scenario_count must be >= 1");
  std::vector<SweepCellSpec> specs;

  // resolve case configurations up front
  std::vector<std::pair<std::string, ModelConfig>> cases;
  std::vector<double> multipliers;
  if (plan.kind == ExperimentPlan::CaseKind::GE) {
    int idx = 1;
    if (plan.include_base) {
      ModelConfig cfg;
      cfg.ge_mode = true;
      cfg.station_budget = 0;
      cases.push_back({"GE-" + std::to_string(idx++), cfg});
      multipliers.push_back(1.0);
    }
    for (double m : plan.shed_multipliers) {
      ModelConfig cfg;
      cfg.ge_mode = true;
      cases.push_back({"GE-" + std::to_string(idx++), cfg});
      multipliers.push_back(m);
    }
  } else {
    int idx = 1;
    if (plan.include_base) {
      // fixed transport-optimal siting, computed once from a level-free set
      auto assignment = assign_renewables(inst.generators, 0.0, Rng::derive_seed(plan.seeds[0], 0xF1));
      ScenarioSet base_set = sample_scenario_set(inst, assignment, plan.scenario_count,
                                                 Rng::derive_seed(plan.seeds[0], 0xF2),
                                                 plan.sampling);
      TransportSiting siting = find_transport_optimal_siting(inst, base_set, plan.gap_target);
      ModelConfig cfg;
      cfg.fixed_siting = siting.x;
      cases.push_back({"V2G-" + std::to_string(idx++), cfg});
      multipliers.push_back(1.0);
    }
    for (int budget : plan.budgets) {
      ModelConfig cfg;
      cfg.station_budget = budget;
      cases.push_back({"V2G-" + std::to_string(idx++), cfg});
      multipliers.push_back(1.0);
    }
  }

  for (std::size_t c = 0; c < cases.size(); ++c)
    for (double level : plan.levels)
      for (std::uint64_t seed : plan.seeds)
        specs.push_back({cases[c].first, cases[c].second, multipliers[c], level, seed});

  SweepResult result;
  result.cells.resize(specs.size());

  auto run_cell = [&](std::size_t idx) {
    const SweepCellSpec& spec = specs[idx];
    SweepCell& cell = result.cells[idx];
    cell.case_name = spec.case_name;
    cell.level = spec.level;
    cell.seed = spec.seed;
    auto start = std::chrono::steady_clock::now();
    try {
      Instance local = inst;
      if (spec.shed_multiplier != 1.0)
        for (Bus& b : local.buses) b.shed_penalty *= spec.shed_multiplier;

      int level_index = static_cast<int>(std::lround(spec.level * 100));
      auto assignment = assign_renewables(
          local.generators, spec.level,
          Rng::derive_seed(spec.seed, 0x1000 + static_cast<std::uint64_t>(level_index)));
      ScenarioSet set = sample_scenario_set(
          local, assignment, plan.scenario_count,
          Rng::derive_seed(spec.seed, 0x2000 + static_cast<std::uint64_t>(level_index)),
          plan.sampling);

      bool all_closed =
          (spec.config.station_budget && *spec.config.station_budget == 0);
      if (spec.config.fixed_siting) {
        bool any = false;
        for (double v : *spec.config.fixed_siting) any = any || v > 0.5;
        all_closed = all_closed || !any;
      }

      SitingSolution sol;
      if (all_closed) {
        sol = detail::solve_all_closed(local, set, spec.config, {});
      } else {
        MILPModel model = build_extensive_form(local, set, spec.config);
        MILPOptions opts;
        opts.gap_target = plan.gap_target;
        opts.max_nodes = plan.max_nodes;
        opts.max_lp_iterations = plan.max_lp_iterations;
        MILPSolution milp = solve_milp(model, opts);
        sol = extract_siting_solution(model, milp, local, set);
      }
      if (sol.status != MILPStatus::GapReached && sol.status != MILPStatus::LimitReached) {
        cell.error = to_string(sol.status);
      } else {
        cell.metrics = compute_metrics(sol, set);
        cell.gap = sol.gap;
        cell.nodes = sol.node_count;
        cell.status = sol.status;
      }
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
    cell.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  };

  int jobs = std::max(1, plan.jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < specs.size(); ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&]() {
        for (std::size_t i = next.fetch_add(1); i < specs.size(); i = next.fetch_add(1))
          run_cell(i);
      });
    for (auto& th : pool) th.join();
  }
  return result;
}

}  // namespace v2g
