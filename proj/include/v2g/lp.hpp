#pragma once

#include <cassert>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "v2g/common.hpp"

namespace v2g {

enum class RowSense { LE, EQ, GE };

// Sparse minimization LP: bounds may be +-inf, rows are stored CSR.
struct LPProblem {
  std::vector<double> col_lower;
  std::vector<double> col_upper;
  std::vector<double> objective;

  std::vector<std::size_t> row_start; // size num_rows()+1
  std::vector<int> row_col;
  std::vector<double> row_val;
  std::vector<RowSense> sense;
  std::vector<double> rhs;

  LPProblem() { row_start.push_back(0); }

  int num_cols() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rhs.size()); }

  int add_column(double lower, double upper, double obj) {
    col_lower.push_back(lower);
    col_upper.push_back(upper);
    objective.push_back(obj);
    return num_cols() - 1;
  }

  int add_row(RowSense s, double b, const std::vector<std::pair<int, double>>& entries) {
    for (auto [col, coef] : entries) {
      assert(col >= 0 && col < num_cols());
      row_col.push_back(col);
      row_val.push_back(coef);
    }
    row_start.push_back(row_col.size());
    sense.push_back(s);
    rhs.push_back(b);
    return num_rows() - 1;
  }

  // Activity a_i . x of one row.
  double row_activity(int row, const std::vector<double>& x) const {
    double a = 0.0;
    for (std::size_t k = row_start[row]; k < row_start[row + 1]; ++k)
      a += row_val[k] * x[row_col[k]];
    return a;
  }

  double objective_value(const std::vector<double>& x) const {
    double v = 0.0;
    for (int j = 0; j < num_cols(); ++j) v += objective[j] * x[j];
    return v;
  }
};

enum class LPStatus { Optimal, Infeasible, Unbounded, IterationLimit, NumericalError };

inline const char* to_string(LPStatus s) {
  switch (s) {
    case LPStatus::Optimal: return "Optimal";
    case LPStatus::Infeasible: return "Infeasible";
    case LPStatus::Unbounded: return "Unbounded";
    case LPStatus::IterationLimit: return "IterationLimit";
    case LPStatus::NumericalError: return "NumericalError";
  }
  return "?";
}

struct LPSolution {
  LPStatus status = LPStatus::NumericalError;
  std::vector<double> x;             // structural values
  double objective = 0.0;
  std::vector<double> duals;         // one per row
  std::vector<double> reduced_costs; // one per structural column
  std::int64_t iterations = 0;
};

}  // namespace v2g
