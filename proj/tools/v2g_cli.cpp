// Command-line front end: instance generation, scenario sampling, solving,
// sweeps, MPS export and report aggregation, all seeded explicitly so every
// artifact can be reproduced from its manifest.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "v2g/v2g.hpp"

namespace fs = std::filesystem;
using namespace v2g;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSolverLimit = 1;
constexpr int kExitInputError = 2;

fs::path resolve_out(const std::string& out) {
  fs::path p(out);
  if (p.is_absolute()) return p;
  if (const char* dir = std::getenv("V2G_OUT_DIR")) return fs::path(dir) / p;
  return p;
}

struct ManifestWriter {
  json config = json::object();
  std::vector<std::string> artifacts;
  std::vector<std::uint64_t> seeds;
  std::string command;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void write(const fs::path& next_to) const {
    json m;
    m["tool_version"] = kVersion;
    m["command"] = command;
    m["config"] = config;
    m["seeds"] = seeds;
    m["artifacts"] = artifacts;
    m["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    fs::path path = next_to;
    path += ".manifest.json";
    write_json_file(path, m);
  }
};

Instance load_instance_checked(const std::string& path) {
  Instance inst = instance_from_json(read_json_file(path));
  auto report = validate_instance(inst);
  if (!report.empty()) {
    std::ostringstream os;
    os << "invalid instance " << path << ":";
    for (const auto& v : report) os << "\n  " << v.locator << ": " << v.message;
    throw std::runtime_error(os.str());
  }
  return inst;
}

ScenarioSet load_scenarios_checked(const std::string& path, const Instance& inst) {
  ScenarioSet set = scenario_set_from_json(read_json_file(path));
  if (set.assignment.renewable_flags.size() != inst.generators.size())
    throw std::runtime_error("scenario file does not match the instance: renewable_flags size");
  for (const Scenario& s : set.scenarios) {
    if (s.route_demands.size() != inst.routes.size() ||
        s.bus_loads.size() != inst.buses.size() ||
        s.gen_capacities.size() != inst.generators.size() ||
        s.gen_costs.size() != inst.generators.size())
      throw std::runtime_error("scenario " + std::to_string(s.id) +
                               " does not match the instance dimensions");
  }
  return set;
}

std::vector<double> load_siting_vector(const std::string& path, int stations) {
  json j = read_json_file(path);
  json arr = j.is_array() ? j : j.at("x");
  std::vector<double> x = arr.get<std::vector<double>>();
  if (static_cast<int>(x.size()) != stations)
    throw std::runtime_error("fixed siting length " + std::to_string(x.size()) +
                             " does not match station count " + std::to_string(stations));
  return x;
}

std::string join_argv(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

// values keyed by mangled MPS column name or registry name (see export-mps)
std::vector<double> read_external_solution(const std::string& path, const MILPModel& model) {
  std::map<std::string, int> by_name;
  for (int j = 0; j < model.lp.num_cols(); ++j) {
    by_name[detail::mps_col_name(j)] = j;
    by_name[model.registry.name(j)] = j;
  }
  std::vector<double> v(model.lp.num_cols(), 0.0);
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open solution file " + path);
  std::string name;
  double value;
  while (is >> name >> value) {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw std::runtime_error("unknown column name " + name);
    v[it->second] = value;
  }
  return v;
}

ExperimentPlan plan_from_json(const json& j) {
  ExperimentPlan plan;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "GE") plan.kind = ExperimentPlan::CaseKind::GE;
  else if (kind == "V2G") plan.kind = ExperimentPlan::CaseKind::V2G;
  else throw std::runtime_error("plan kind must be GE or V2G");
  if (j.contains("include_base")) plan.include_base = j.at("include_base").get<bool>();
  if (j.contains("shed_multipliers"))
    plan.shed_multipliers = j.at("shed_multipliers").get<std::vector<double>>();
  if (j.contains("budgets")) plan.budgets = j.at("budgets").get<std::vector<int>>();
  if (j.contains("levels")) plan.levels = j.at("levels").get<std::vector<double>>();
  if (j.contains("scenario_count")) plan.scenario_count = j.at("scenario_count").get<int>();
  if (j.contains("seeds")) plan.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  if (j.contains("gap")) plan.gap_target = j.at("gap").get<double>();
  if (j.contains("jobs")) plan.jobs = j.at("jobs").get<int>();
  for (double level : plan.levels) {
    double scaled = level * 10.0;
    if (level < 0 || level > 1 || std::abs(scaled - std::round(scaled)) > 1e-9)
      throw std::runtime_error("plan levels must lie on the 0.0,0.1,...,1.0 grid");
  }
  for (int b : plan.budgets)
    if (b < 0) throw std::runtime_error("plan budgets must be nonnegative");
  return plan;
}

json plan_to_json(const ExperimentPlan& plan) {
  return {{"kind", plan.kind == ExperimentPlan::CaseKind::GE ? "GE" : "V2G"},
          {"include_base", plan.include_base},
          {"shed_multipliers", plan.shed_multipliers},
          {"budgets", plan.budgets},
          {"levels", plan.levels},
          {"scenario_count", plan.scenario_count},
          {"seeds", plan.seeds},
          {"gap", plan.gap_target},
          {"jobs", plan.jobs}};
}

// --- report aggregation -------------------------------------------------------

struct ReportRow {
  std::string case_name;
  double level;
  double shed = 0, unmet = 0, opened = 0, objective = 0;
  int count = 0;
};

int run_report(const std::string& sweep_dir, const std::string& out) {
  fs::path results = fs::path(sweep_dir) / "results.csv";
  std::ifstream is(results);
  if (!is) throw std::runtime_error("cannot open " + results.string());

  std::map<std::pair<std::string, double>, ReportRow> rows;
  std::string line;
  std::getline(is, line); // header
  while (std::getline(is, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string tok; std::getline(ls, tok, ',');) f.push_back(tok);
    if (f.size() < 10 || f[3] == "error") continue;
    ReportRow& r = rows[{f[0], std::stod(f[1])}];
    r.case_name = f[0];
    r.level = std::stod(f[1]);
    r.shed += std::stod(f[3]);
    r.unmet += std::stod(f[4]);
    r.opened += std::stod(f[5]);
    r.objective += std::stod(f[6]);
    r.count++;
  }

  fs::path out_path = resolve_out(out);
  std::ostringstream os;
  os << "case,level,load_shed_frac,unmet_frac,opened,objective,replications\n";
  char buf[256];
  for (auto& [key, r] : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.1f,%.17g,%.17g,%.17g,%.17g,%d", r.case_name.c_str(),
                  r.level, r.shed / r.count, r.unmet / r.count, r.opened / r.count,
                  r.objective / r.count, r.count);
    os << buf << "\n";
  }
  write_file_atomic(out_path, os.str());

  // one plot-data file per figure axis: level rows, one column per case
  std::vector<std::string> cases;
  std::vector<double> levels;
  for (auto& [key, r] : rows) {
    if (std::find(cases.begin(), cases.end(), key.first) == cases.end())
      cases.push_back(key.first);
    if (std::find(levels.begin(), levels.end(), key.second) == levels.end())
      levels.push_back(key.second);
  }
  std::sort(cases.begin(), cases.end());
  std::sort(levels.begin(), levels.end());

  auto emit_plot = [&](const std::string& name, auto metric) {
    std::ostringstream ps;
    ps << "level";
    for (const auto& c : cases) ps << "," << c;
    ps << "\n";
    for (double level : levels) {
      ps << level * 100; // percent axis
      for (const auto& c : cases) {
        auto it = rows.find({c, level});
        ps << ",";
        if (it != rows.end() && it->second.count > 0)
          ps << metric(it->second) / it->second.count;
      }
      ps << "\n";
    }
    write_file_atomic(out_path.parent_path() / name, ps.str());
  };
  emit_plot("plot_load_shed.csv", [](const ReportRow& r) { return r.shed; });
  emit_plot("plot_unmet.csv", [](const ReportRow& r) { return r.unmet; });
  emit_plot("plot_opened.csv", [](const ReportRow& r) { return r.opened; });
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage stochastic siting of PHEV battery-exchange stations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string instance_path, scenarios_path, out, plan_path, sweep_dir, fixed_siting_path;
  std::string solution_file, solver = "internal", kind;
  std::uint64_t seed = 1;
  int n_scenarios = 100;
  double penetration = 0.0, gap = 0.01;
  std::optional<int> budget;
  bool ge_mode = false, integer_stock = false, cost_jitter = false;
  int reference_bus = -1, jobs = 1;

  // knobs shared by both instance families; defaults shown in --help
  RtsKnobs rts_knobs;
  MiamiKnobs miami_knobs;
  bool two_factor_demand = false;
  double battery_power = rts_knobs.battery_power;
  double unmet_penalty = rts_knobs.unmet_penalty;
  double detour_unit_cost = rts_knobs.detour_unit_cost;
  double shed_penalty_factor = rts_knobs.shed_penalty_factor;
  double stock_limit_factor = -1.0; // family default unless set
  double per_battery_cost = rts_knobs.per_battery_cost;
  double fixed_cost_min = rts_knobs.station_fixed_cost_min;
  double fixed_cost_max = rts_knobs.station_fixed_cost_max;
  double line_cap_min_frac = rts_knobs.line_capacity_min_frac;
  double line_cap_max_frac = rts_knobs.line_capacity_max_frac;
  double gen_cost_min = rts_knobs.gen_cost_min;
  double gen_cost_max = rts_knobs.gen_cost_max;

  auto* gen_instance = app.add_subcommand("gen-instance", "Generate a synthetic instance");
  gen_instance->add_option("kind", kind, "Instance family: rts or miami")
      ->required()
      ->check(CLI::IsMember({"rts", "miami"}));
  gen_instance->add_option("--seed", seed, "Generation seed")->capture_default_str();
  gen_instance->add_flag("--two-factor-demand", two_factor_demand,
                         "Battery demand = population x vehicle ratio x phev ratio "
                         "(drops the exchange fraction)");
  gen_instance->add_option("--battery-power", battery_power, "MW per battery (a)")
      ->capture_default_str();
  gen_instance->add_option("--unmet-penalty", unmet_penalty, "Cost per unserved battery (h)")
      ->capture_default_str();
  gen_instance->add_option("--detour-unit-cost", detour_unit_cost,
                           "Cost per unit of detour distance (c scale)")
      ->capture_default_str();
  gen_instance->add_option("--shed-penalty-factor", shed_penalty_factor,
                           "Shed penalty g = factor x max generation cost")
      ->capture_default_str();
  gen_instance->add_option("--stock-limit-factor", stock_limit_factor,
                           "Station stock cap U = factor x total battery demand "
                           "(default 1.0 rts, 0.1 miami)");
  gen_instance->add_option("--per-battery-cost", per_battery_cost, "Storage cost per battery (r)")
      ->capture_default_str();
  gen_instance->add_option("--fixed-cost-min", fixed_cost_min, "Station fixed cost range low (f)")
      ->capture_default_str();
  gen_instance->add_option("--fixed-cost-max", fixed_cost_max, "Station fixed cost range high (f)")
      ->capture_default_str();
  gen_instance->add_option("--line-cap-min-frac", line_cap_min_frac,
                           "Line rating range low, as a fraction of total load")
      ->capture_default_str();
  gen_instance->add_option("--line-cap-max-frac", line_cap_max_frac,
                           "Line rating range high, as a fraction of total load")
      ->capture_default_str();
  gen_instance->add_option("--gen-cost-min", gen_cost_min, "Generation cost range low (o)")
      ->capture_default_str();
  gen_instance->add_option("--gen-cost-max", gen_cost_max, "Generation cost range high (o)")
      ->capture_default_str();
  gen_instance->add_option("--out", out, "Output instance JSON")->required();

  auto* gen_scenarios = app.add_subcommand("gen-scenarios", "Sample a scenario set");
  gen_scenarios->add_option("--instance", instance_path, "Instance JSON")->required();
  gen_scenarios->add_option("--penetration", penetration, "Renewable penetration in [0,1]")
      ->required();
  gen_scenarios->add_option("--n", n_scenarios, "Number of scenarios")->capture_default_str();
  gen_scenarios->add_option("--seed", seed, "Sampling seed")->capture_default_str();
  gen_scenarios->add_flag("--cost-jitter", cost_jitter,
                          "Apply uniform [0.9,1.1] jitter to generation costs");
  std::vector<double> factor_probs = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  gen_scenarios
      ->add_option("--factor-probs", factor_probs,
                   "Probabilities of the 0 / 0.5 / 1.0 renewable capacity factors")
      ->expected(3);
  gen_scenarios->add_option("--out", out, "Output scenario JSON")->required();

  auto* solve = app.add_subcommand("solve", "Solve the extensive-form model");
  solve->add_option("--instance", instance_path, "Instance JSON")->required();
  solve->add_option("--scenarios", scenarios_path, "Scenario JSON")->required();
  solve->add_option("--budget", budget, "Maximum number of opened stations");
  solve->add_option("--fixed-siting", fixed_siting_path,
                    "JSON file fixing the open flags (array or {\"x\": [...]})");
  solve->add_flag("--ge", ge_mode, "Generation-expansion mode: zero unmet-PHEV penalties");
  solve->add_flag("--integer-stock", integer_stock, "Make battery stocks integer variables");
  solve->add_option("--reference-bus", reference_bus, "Slack bus for the phase angles");
  solve->add_option("--gap", gap, "Relative optimality gap target")->capture_default_str();
  std::int64_t max_nodes = 100'000, max_iterations = 1'000'000;
  solve->add_option("--max-nodes", max_nodes, "Branch-and-bound node limit")
      ->capture_default_str();
  solve->add_option("--max-iterations", max_iterations, "Total simplex iteration limit")
      ->capture_default_str();
  solve->add_option("--solver", solver, "internal, or external to verify a solution file")
      ->check(CLI::IsMember({"internal", "external"}));
  solve->add_option("--solution-file", solution_file,
                    "column_name value lines (with --solver external)");
  solve->add_option("--out", out, "Output solution JSON")->required();

  auto* sweep = app.add_subcommand("sweep", "Run a penetration sweep from a plan file");
  sweep->add_option("--instance", instance_path, "Instance JSON")->required();
  sweep->add_option("--plan", plan_path, "Experiment plan JSON")->required();
  sweep->add_option("--jobs", jobs, "Parallel cells")->capture_default_str();
  sweep->add_option("--out-dir", out, "Output directory")->required();

  auto* export_mps_cmd = app.add_subcommand("export-mps", "Write the model as fixed-format MPS");
  export_mps_cmd->add_option("--instance", instance_path, "Instance JSON")->required();
  export_mps_cmd->add_option("--scenarios", scenarios_path, "Scenario JSON")->required();
  export_mps_cmd->add_option("--budget", budget, "Maximum number of opened stations");
  export_mps_cmd->add_flag("--ge", ge_mode, "Generation-expansion mode");
  export_mps_cmd->add_option("--fixed-siting", fixed_siting_path, "Fixed siting JSON");
  export_mps_cmd->add_option("--out", out, "Output MPS path (names table at <out>.names)")
      ->required();

  auto* report = app.add_subcommand("report", "Aggregate a sweep directory into plot data");
  report->add_option("--sweep", sweep_dir, "Sweep output directory")->required();
  report->add_option("--out", out, "Aggregated CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  ManifestWriter manifest;
  manifest.command = join_argv(argc, argv);
  manifest.seeds = {seed};

  try {
    if (gen_instance->parsed()) {
      auto apply = [&](auto& k) {
        k.two_factor_demand = two_factor_demand;
        k.battery_power = battery_power;
        k.unmet_penalty = unmet_penalty;
        k.detour_unit_cost = detour_unit_cost;
        k.shed_penalty_factor = shed_penalty_factor;
        if (stock_limit_factor >= 0) k.stock_limit_factor = stock_limit_factor;
        k.per_battery_cost = per_battery_cost;
        k.station_fixed_cost_min = fixed_cost_min;
        k.station_fixed_cost_max = fixed_cost_max;
        k.line_capacity_min_frac = line_cap_min_frac;
        k.line_capacity_max_frac = line_cap_max_frac;
        k.gen_cost_min = gen_cost_min;
        k.gen_cost_max = gen_cost_max;
      };
      Instance inst;
      if (kind == "rts") {
        apply(rts_knobs);
        inst = generate_rts_like_instance(seed, rts_knobs);
      } else {
        apply(miami_knobs);
        inst = generate_miami_like_instance(seed, miami_knobs);
      }
      fs::path path = resolve_out(out);
      write_json_file(path, instance_to_json(inst));
      manifest.config = {{"kind", kind},
                         {"seed", seed},
                         {"two_factor_demand", two_factor_demand},
                         {"battery_power", battery_power},
                         {"unmet_penalty", unmet_penalty},
                         {"detour_unit_cost", detour_unit_cost},
                         {"shed_penalty_factor", shed_penalty_factor}};
      manifest.artifacts = {path.string()};
      manifest.write(path);
      std::cout << "wrote " << path.string() << "\n";
      return kExitOk;
    }

    if (gen_scenarios->parsed()) {
      Instance inst = load_instance_checked(instance_path);
      if (penetration < 0 || penetration > 1)
        throw std::runtime_error("--penetration must lie in [0, 1]");
      SamplingOptions sopts;
      sopts.cost_jitter = cost_jitter;
      double prob_sum = factor_probs[0] + factor_probs[1] + factor_probs[2];
      if (factor_probs[0] < 0 || factor_probs[1] < 0 || factor_probs[2] < 0 ||
          std::abs(prob_sum - 1.0) > 1e-9)
        throw std::runtime_error("--factor-probs must be nonnegative and sum to 1");
      sopts.factor_probs = {factor_probs[0], factor_probs[1], factor_probs[2]};
      auto assignment =
          assign_renewables(inst.generators, penetration, Rng::derive_seed(seed, 0xA55));
      ScenarioSet set = sample_scenario_set(inst, assignment, n_scenarios, seed, sopts);
      fs::path path = resolve_out(out);
      write_json_file(path, scenario_set_to_json(set));
      manifest.config = {{"instance", instance_path},
                         {"penetration", penetration},
                         {"n", n_scenarios},
                         {"seed", seed},
                         {"cost_jitter", cost_jitter}};
      manifest.artifacts = {path.string()};
      manifest.write(path);
      std::cout << "wrote " << path.string() << "\n";
      return kExitOk;
    }

    if (solve->parsed()) {
      Instance inst = load_instance_checked(instance_path);
      ScenarioSet set = load_scenarios_checked(scenarios_path, inst);
      ModelConfig cfg;
      cfg.ge_mode = ge_mode;
      cfg.station_budget = budget;
      cfg.integer_stock = integer_stock;
      cfg.reference_bus = reference_bus;
      if (!fixed_siting_path.empty())
        cfg.fixed_siting = load_siting_vector(fixed_siting_path, inst.num_stations());

      MILPModel model = build_extensive_form(inst, set, cfg);
      manifest.config = {{"instance", instance_path}, {"scenarios", scenarios_path},
                         {"ge", ge_mode},             {"gap", gap},
                         {"solver", solver},          {"integer_stock", integer_stock}};
      if (budget) manifest.config["budget"] = *budget;

      fs::path path = resolve_out(out);
      if (solver == "external") {
        if (solution_file.empty())
          throw std::runtime_error("--solver external requires --solution-file");
        std::vector<double> v = read_external_solution(solution_file, model);
        auto violations = check_solution_feasibility(inst, set, model, v, 1e-6);
        json j;
        j["objective"] = model.lp.objective_value(v);
        j["feasible"] = violations.empty();
        json viol = json::array();
        for (const auto& fv : violations) viol.push_back(fv.describe());
        j["violations"] = viol;
        write_json_file(path, j);
        manifest.artifacts = {path.string()};
        manifest.write(path);
        std::cout << (violations.empty() ? "solution feasible" : "solution INFEASIBLE")
                  << ", objective " << model.lp.objective_value(v) << "\n";
        return violations.empty() ? kExitOk : kExitSolverLimit;
      }

      MILPOptions opts;
      opts.gap_target = gap;
      opts.max_nodes = max_nodes;
      opts.max_lp_iterations = max_iterations;
      MILPSolution milp = solve_milp(model, opts);
      SitingSolution sol = extract_siting_solution(model, milp, inst, set);
      json j = siting_solution_to_json(sol);
      if (milp.has_incumbent) j["metrics"] = metrics_to_json(compute_metrics(sol, set));
      write_json_file(path, j);
      manifest.artifacts = {path.string()};
      manifest.write(path);

      if (milp.status == MILPStatus::GapReached) {
        std::cout << "objective " << milp.objective << " gap " << milp.gap << " nodes "
                  << milp.node_count << "\n";
        return kExitOk;
      }
      std::cerr << "solver stopped: " << to_string(milp.status) << ", achieved gap " << milp.gap
                << "\n";
      return kExitSolverLimit;
    }

    if (sweep->parsed()) {
      Instance inst = load_instance_checked(instance_path);
      ExperimentPlan plan = plan_from_json(read_json_file(plan_path));
      if (sweep->count("--jobs")) plan.jobs = jobs;
      fs::path dir = resolve_out(out);
      fs::create_directories(dir);

      SweepResult result = run_penetration_sweep(inst, plan);
      std::ostringstream os;
      write_sweep_csv(result, os);
      write_file_atomic(dir / "results.csv", os.str());

      manifest.config = {{"instance", instance_path}, {"plan", plan_to_json(plan)}};
      manifest.seeds = plan.seeds;
      manifest.artifacts = {(dir / "results.csv").string()};
      manifest.write(dir / "sweep");
      std::cout << "wrote " << (dir / "results.csv").string() << "\n";

      for (const SweepCell& c : result.cells)
        if (!c.error.empty())
          std::cerr << "cell " << c.case_name << " level " << c.level << " seed " << c.seed
                    << " failed: " << c.error << "\n";
      return kExitOk;
    }

    if (export_mps_cmd->parsed()) {
      Instance inst = load_instance_checked(instance_path);
      ScenarioSet set = load_scenarios_checked(scenarios_path, inst);
      ModelConfig cfg;
      cfg.ge_mode = ge_mode;
      cfg.station_budget = budget;
      if (!fixed_siting_path.empty())
        cfg.fixed_siting = load_siting_vector(fixed_siting_path, inst.num_stations());
      MILPModel model = build_extensive_form(inst, set, cfg);

      fs::path path = resolve_out(out);
      write_file_atomic(path, export_mps(model));
      std::ostringstream names;
      write_mps_names(model, names);
      fs::path names_path = path;
      names_path += ".names";
      write_file_atomic(names_path, names.str());

      manifest.config = {{"instance", instance_path}, {"scenarios", scenarios_path}};
      manifest.artifacts = {path.string(), names_path.string()};
      manifest.write(path);
      std::cout << "wrote " << path.string() << " and " << names_path.string() << "\n";
      return kExitOk;
    }

    if (report->parsed()) {
      int rc = run_report(sweep_dir, out);
      std::cout << "wrote " << resolve_out(out).string() << "\n";
      return rc;
    }
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::runtime_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
