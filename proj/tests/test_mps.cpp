#include <catch2/catch.hpp>

#include <cmath>
#include <sstream>

#include "test_helpers.hpp"
#include "v2g/build.hpp"
#include "v2g/mps.hpp"

using namespace v2g;
using testutil::make_scenario;
using testutil::make_set;
using testutil::toy_instance;

namespace {

void require_same_model(const LPProblem& a, const std::vector<bool>& ia, const LPProblem& b,
                        const std::vector<bool>& ib) {
  REQUIRE(a.num_cols() == b.num_cols());
  REQUIRE(a.num_rows() == b.num_rows());
  for (int j = 0; j < a.num_cols(); ++j) {
    CHECK(a.col_lower[j] == b.col_lower[j]);
    CHECK(a.col_upper[j] == b.col_upper[j]);
    CHECK(a.objective[j] == b.objective[j]);
    CHECK(ia[j] == ib[j]);
  }
  for (int i = 0; i < a.num_rows(); ++i) {
    CHECK(a.sense[i] == b.sense[i]);
    CHECK(a.rhs[i] == b.rhs[i]);
    // compare rows as dense vectors (entry order may differ)
    std::vector<double> ra(a.num_cols(), 0.0), rb(b.num_cols(), 0.0);
    for (std::size_t k = a.row_start[i]; k < a.row_start[i + 1]; ++k)
      ra[a.row_col[k]] += a.row_val[k];
    for (std::size_t k = b.row_start[i]; k < b.row_start[i + 1]; ++k)
      rb[b.row_col[k]] += b.row_val[k];
    CHECK(ra == rb);
  }
}

}  // namespace

TEST_CASE("one-variable lp matches the frozen golden file byte for byte") {
  LPProblem lp;
  int x = lp.add_column(0.0, kInf, 1.0);
  lp.add_row(RowSense::GE, 3.0, {{x, 1.0}});

  std::ostringstream os;
  write_mps(lp, {false}, os, "LP1");

  const std::string golden =
      "NAME          LP1\n"
      "ROWS\n"
      " N  OBJ\n"
      " G  R0000001\n"
      "COLUMNS\n"
      "    C0000001  OBJ       1\n"
      "    C0000001  R0000001  1\n"
      "RHS\n"
      "    RHS       R0000001  3\n"
      "RANGES\n"
      "BOUNDS\n"
      "ENDATA\n";
  CHECK(os.str() == golden);
}

TEST_CASE("extensive form round-trips through the mps writer and reader") {
  Instance inst = toy_instance();
  auto set = make_set(inst, {make_scenario(inst, 1, 1, 1), make_scenario(inst, 0.7, 1.3, 0.5)});
  ModelConfig cfg;
  cfg.station_budget = 1;
  MILPModel model = build_extensive_form(inst, set, cfg);

  std::string text = export_mps(model, "TOY");
  std::istringstream is(text);
  MpsModel parsed = read_mps(is);

  CHECK(parsed.name == "TOY");
  require_same_model(model.lp, model.integer_cols, parsed.lp, parsed.integer_cols);

  SECTION("column order is the registry order") {
    for (int j = 0; j < model.lp.num_cols(); ++j)
      CHECK(parsed.col_names[j] == detail::mps_col_name(j));
  }
}

TEST_CASE("binary columns sit between INTORG and INTEND markers") {
  Instance inst = toy_instance();
  auto set = make_set(inst, {make_scenario(inst, 1, 1, 1)});
  MILPModel model = build_extensive_form(inst, set);
  std::string text = export_mps(model);

  auto intorg = text.find("'INTORG'");
  auto intend = text.find("'INTEND'");
  REQUIRE(intorg != std::string::npos);
  REQUIRE(intend != std::string::npos);
  CHECK(intorg < intend);

  // x columns are C0000001..C0000002; both must appear between the markers
  auto x1 = text.find("C0000001");
  auto x2 = text.rfind("C0000002  OBJ");
  if (x2 == std::string::npos) x2 = text.find("C0000002");
  CHECK(intorg < x1);
  CHECK(x1 < intend);

  // and binaries are declared BV in BOUNDS
  CHECK(text.find(" BV BND       C0000001") != std::string::npos);
}

TEST_CASE("mps reader applies bounds and ranges") {
  std::istringstream is(
      "NAME          T\n"
      "ROWS\n"
      " N  COST\n"
      " L  CAP\n"
      "COLUMNS\n"
      "    A         COST      2.5       CAP       1\n"
      "    B         CAP       1\n"
      "RHS\n"
      "    RHS       CAP       8\n"
      "RANGES\n"
      "    RNG       CAP       3\n"
      "BOUNDS\n"
      " MI BND       A\n"
      " UP BND       A         4\n"
      " FX BND       B         2\n"
      "ENDATA\n");
  MpsModel m = read_mps(is);
  REQUIRE(m.lp.num_cols() == 2);
  CHECK(m.lp.objective[0] == 2.5);
  CHECK(m.lp.col_lower[0] == -kInf);
  CHECK(m.lp.col_upper[0] == 4.0);
  CHECK(m.lp.col_lower[1] == 2.0);
  CHECK(m.lp.col_upper[1] == 2.0);
  // the ranged L row becomes 5 <= a.x <= 8
  REQUIRE(m.lp.num_rows() == 2);
  CHECK(m.lp.sense[0] == RowSense::GE);
  CHECK(m.lp.rhs[0] == 5.0);
  CHECK(m.lp.sense[1] == RowSense::LE);
  CHECK(m.lp.rhs[1] == 8.0);
}

TEST_CASE("values round-trip at full precision") {
  LPProblem lp;
  int x = lp.add_column(0.0, 1.0 / 3.0, 0.1);
  lp.add_row(RowSense::EQ, 1e-9, {{x, 1.0 / 7.0}});
  std::ostringstream os;
  write_mps(lp, {false}, os);
  std::istringstream is(os.str());
  MpsModel m = read_mps(is);
  CHECK(m.lp.col_upper[0] == 1.0 / 3.0);
  CHECK(m.lp.objective[0] == 0.1);
  CHECK(m.lp.rhs[0] == 1e-9);
  CHECK(m.lp.row_val[0] == 1.0 / 7.0);
}
