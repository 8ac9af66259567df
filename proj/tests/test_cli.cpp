#include <catch2/catch.hpp>

#include <cstdlib>
#include <iomanip>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "test_helpers.hpp"
#include "v2g/branch_bound.hpp"
#include "v2g/build.hpp"
#include "v2g/json_io.hpp"
#include "v2g/mps.hpp"
#include "v2g/version.hpp"

using namespace v2g;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int exit_code;
  std::string output;
};

CliRun run_cli(const std::string& args, const fs::path& dir) {
  fs::path log = dir / "cli_log.txt";
  std::string cmd = std::string(V2G_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  int rc = std::system(cmd.c_str());
  std::ifstream is(log);
  std::stringstream ss;
  ss << is.rdbuf();
  return {WEXITSTATUS(rc), ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("v2g_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_toy_fixture(const fs::path& dir) {
  Instance inst = testutil::toy_instance();
  fs::path path = dir / "toy.json";
  write_json_file(path, instance_to_json(inst));
  return path;
}

}  // namespace

TEST_CASE("cli solve on the bundled toy meets the gap contract") {
  fs::path dir = fresh_dir("solve");
  fs::path inst = write_toy_fixture(dir);

  auto gen = run_cli("gen-scenarios --instance " + inst.string() +
                         " --penetration 0.5 --n 10 --seed 3 --out " + (dir / "scen.json").string(),
                     dir);
  REQUIRE(gen.exit_code == 0);

  auto solve = run_cli("solve --instance " + inst.string() + " --scenarios " +
                           (dir / "scen.json").string() + " --gap 0.01 --out " +
                           (dir / "sol.json").string(),
                       dir);
  REQUIRE(solve.exit_code == 0);

  json sol = read_json_file(dir / "sol.json");
  CHECK(sol.at("status").get<std::string>() == "GapReached");
  CHECK(sol.at("gap").get<double>() <= 0.01);
  CHECK(sol.contains("metrics"));

  SECTION("a run manifest sits next to every artifact") {
    CHECK(fs::exists(dir / "scen.json.manifest.json"));
    CHECK(fs::exists(dir / "sol.json.manifest.json"));
    json manifest = read_json_file(dir / "sol.json.manifest.json");
    CHECK(manifest.at("tool_version").get<std::string>() == std::string(kVersion));
    CHECK(manifest.at("config").at("gap").get<double>() == 0.01);
  }
}

TEST_CASE("cli scenario generation is byte-identical across runs") {
  fs::path dir = fresh_dir("determinism");
  fs::path inst = write_toy_fixture(dir);

  std::string base = "gen-scenarios --instance " + inst.string() +
                     " --penetration 0.3 --n 25 --seed 7 --out ";
  REQUIRE(run_cli(base + (dir / "a.json").string(), dir).exit_code == 0);
  REQUIRE(run_cli(base + (dir / "b.json").string(), dir).exit_code == 0);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  CHECK(slurp(dir / "a.json").size() > 100);
}

TEST_CASE("cli solve artifacts are byte-identical across runs") {
  fs::path dir = fresh_dir("solve_det");
  fs::path inst = write_toy_fixture(dir);
  REQUIRE(run_cli("gen-scenarios --instance " + inst.string() +
                      " --penetration 0.4 --n 8 --seed 11 --out " + (dir / "s.json").string(),
                  dir)
              .exit_code == 0);
  std::string solve = "solve --instance " + inst.string() + " --scenarios " +
                      (dir / "s.json").string() + " --gap 0.001 --out ";
  REQUIRE(run_cli(solve + (dir / "sol1.json").string(), dir).exit_code == 0);
  REQUIRE(run_cli(solve + (dir / "sol2.json").string(), dir).exit_code == 0);
  CHECK(slurp(dir / "sol1.json") == slurp(dir / "sol2.json"));
}

TEST_CASE("cli reports unreached gaps with exit code 1") {
  fs::path dir = fresh_dir("limits");
  fs::path inst = write_toy_fixture(dir);
  REQUIRE(run_cli("gen-scenarios --instance " + inst.string() +
                      " --penetration 0.5 --n 6 --seed 2 --out " + (dir / "s.json").string(),
                  dir)
              .exit_code == 0);
  auto r = run_cli("solve --instance " + inst.string() + " --scenarios " +
                       (dir / "s.json").string() +
                       " --gap 1e-12 --max-iterations 30 --out " + (dir / "sol.json").string(),
                   dir);
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("achieved gap") != std::string::npos);
}

TEST_CASE("cli rejects malformed input with exit code 2") {
  fs::path dir = fresh_dir("badinput");
  std::ofstream(dir / "broken.json") << "{ not json";
  auto r = run_cli("gen-scenarios --instance " + (dir / "broken.json").string() +
                       " --penetration 0.5 --n 5 --seed 1 --out " + (dir / "x.json").string(),
                   dir);
  CHECK(r.exit_code == 2);

  SECTION("structurally invalid instances are also rejected") {
    Instance inst = testutil::toy_instance();
    inst.lines[0].to_bus = 99;
    write_json_file(dir / "invalid.json", instance_to_json(inst));
    auto r2 = run_cli("gen-scenarios --instance " + (dir / "invalid.json").string() +
                          " --penetration 0.5 --n 5 --seed 1 --out " + (dir / "x.json").string(),
                      dir);
    CHECK(r2.exit_code == 2);
    CHECK(r2.output.find("lines[0].to_bus") != std::string::npos);
  }
}

TEST_CASE("cli sweep emits one csv row per cell and report aggregates it") {
  fs::path dir = fresh_dir("sweep");
  fs::path inst = write_toy_fixture(dir);

  json plan = {{"kind", "GE"},
               {"include_base", true},
               {"shed_multipliers", json::array()},
               {"levels", {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}},
               {"scenario_count", 6},
               {"seeds", {5}},
               {"gap", 0.01}};
  write_json_file(dir / "plan.json", plan);

  auto sweep = run_cli("sweep --instance " + inst.string() + " --plan " +
                           (dir / "plan.json").string() + " --out-dir " + (dir / "out").string(),
                       dir);
  REQUIRE(sweep.exit_code == 0);

  std::ifstream csv(dir / "out" / "results.csv");
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header == "case,level,seed,load_shed_frac,unmet_frac,opened,objective,gap,nodes,wall_ms");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) rows++;
  CHECK(rows == 11);

  auto report = run_cli("report --sweep " + (dir / "out").string() + " --out " +
                            (dir / "out" / "summary.csv").string(),
                        dir);
  REQUIRE(report.exit_code == 0);
  std::ifstream agg(dir / "out" / "summary.csv");
  std::getline(agg, header);
  CHECK(header == "case,level,load_shed_frac,unmet_frac,opened,objective,replications");
  rows = 0;
  for (std::string line; std::getline(agg, line);) rows++;
  CHECK(rows == 11);
  CHECK(fs::exists(dir / "out" / "plot_load_shed.csv"));
  CHECK(fs::exists(dir / "out" / "plot_unmet.csv"));
  CHECK(fs::exists(dir / "out" / "plot_opened.csv"));

  std::string plot = slurp(dir / "out" / "plot_load_shed.csv");
  CHECK(plot.find("level,GE-1") == 0);
}

TEST_CASE("cli resolves relative outputs against V2G_OUT_DIR") {
  fs::path dir = fresh_dir("envdir");
  fs::path sub = dir / "artifacts";
  fs::create_directories(sub);
  std::string cmd = "V2G_OUT_DIR=" + sub.string() + " " + V2G_CLI_PATH +
                    " gen-instance rts --seed 4 --out inst.json > /dev/null 2>&1";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(fs::exists(sub / "inst.json"));
  CHECK(fs::exists(sub / "inst.json.manifest.json"));
}

TEST_CASE("cli gen-instance knobs reach the generated instance") {
  fs::path dir = fresh_dir("knobs");
  auto r = run_cli("gen-instance rts --seed 4 --unmet-penalty 25 --battery-power 0.02 --out " +
                       (dir / "i.json").string(),
                   dir);
  REQUIRE(r.exit_code == 0);
  Instance inst = instance_from_json(read_json_file(dir / "i.json"));
  CHECK(inst.params.battery_power == 0.02);
  for (const auto& route : inst.routes) CHECK(route.unmet_penalty == 25.0);
}

TEST_CASE("cli export-mps writes a parseable file with a names table") {
  fs::path dir = fresh_dir("mps");
  fs::path inst = write_toy_fixture(dir);
  REQUIRE(run_cli("gen-scenarios --instance " + inst.string() +
                      " --penetration 0.0 --n 3 --seed 2 --out " + (dir / "s.json").string(),
                  dir)
              .exit_code == 0);
  auto r = run_cli("export-mps --instance " + inst.string() + " --scenarios " +
                       (dir / "s.json").string() + " --budget 1 --out " + (dir / "m.mps").string(),
                   dir);
  REQUIRE(r.exit_code == 0);
  REQUIRE(fs::exists(dir / "m.mps"));
  REQUIRE(fs::exists(dir / "m.mps.names"));

  std::ifstream is(dir / "m.mps");
  MpsModel parsed = read_mps(is);
  CHECK(parsed.lp.num_cols() > 0);
  CHECK(parsed.integer_cols[0]); // x columns lead the registry order

  std::string names = slurp(dir / "m.mps.names");
  CHECK(names.find("C0000001 x[0]") == 0);
  CHECK(names.find("budget") != std::string::npos);
}

TEST_CASE("cli verifies external solutions through the feasibility checker") {
  fs::path dir = fresh_dir("external");
  fs::path inst = write_toy_fixture(dir);
  REQUIRE(run_cli("gen-scenarios --instance " + inst.string() +
                      " --penetration 0.0 --n 2 --seed 9 --out " + (dir / "s.json").string(),
                  dir)
              .exit_code == 0);
  REQUIRE(run_cli("solve --instance " + inst.string() + " --scenarios " +
                      (dir / "s.json").string() + " --gap 0.001 --out " + (dir / "sol.json").string(),
                  dir)
              .exit_code == 0);

  // reconstruct a full column-value file from the solve output
  Instance instance = instance_from_json(read_json_file(inst));
  ScenarioSet set = scenario_set_from_json(read_json_file(dir / "s.json"));
  MILPModel model = build_extensive_form(instance, set);
  json sol = read_json_file(dir / "sol.json");
  MILPOptions opts;
  opts.gap_target = 0.001;
  MILPSolution milp = solve_milp(model, opts);
  {
    std::ofstream os(dir / "ext.sol");
    os << std::setprecision(17);
    for (int j = 0; j < model.lp.num_cols(); ++j)
      if (milp.x[j] != 0.0) os << model.registry.name(j) << " " << milp.x[j] << "\n";
  }
  auto ok = run_cli("solve --solver external --solution-file " + (dir / "ext.sol").string() +
                        " --instance " + inst.string() + " --scenarios " +
                        (dir / "s.json").string() + " --out " + (dir / "check.json").string(),
                    dir);
  CHECK(ok.exit_code == 0);
  json check = read_json_file(dir / "check.json");
  CHECK(check.at("feasible").get<bool>());

  // corrupt one value: violations must be reported and the exit code flips
  {
    std::ofstream os(dir / "bad.sol");
    os << "w[0] -5\n";
  }
  auto bad = run_cli("solve --solver external --solution-file " + (dir / "bad.sol").string() +
                         " --instance " + inst.string() + " --scenarios " +
                         (dir / "s.json").string() + " --out " + (dir / "check2.json").string(),
                     dir);
  CHECK(bad.exit_code == 1);
  json check2 = read_json_file(dir / "check2.json");
  CHECK_FALSE(check2.at("feasible").get<bool>());
}
