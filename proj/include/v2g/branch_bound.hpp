#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include "v2g/model.hpp"
#include "v2g/simplex.hpp"

namespace v2g {

enum class MILPStatus { GapReached, LimitReached, Infeasible, Unbounded, NumericalError };

inline const char* to_string(MILPStatus s) {
  switch (s) {
    case MILPStatus::GapReached: return "GapReached";
    case MILPStatus::LimitReached: return "LimitReached";
    case MILPStatus::Infeasible: return "Infeasible";
    case MILPStatus::Unbounded: return "Unbounded";
    case MILPStatus::NumericalError: return "NumericalError";
  }
  return "?";
}

struct BBEvent {
  std::int64_t nodes = 0;
  double bound = -kInf;
  double incumbent = kInf; // +inf until one exists
};

struct MILPOptions {
  double gap_target = 0.01;
  std::int64_t max_nodes = 100'000;
  std::int64_t max_lp_iterations = 1'000'000;
  double int_tol = 1e-6;
  // Rounding heuristics (nearest and ceiling) fix the integer columns at
  // rounded relaxation values and solve the remaining LP; run at the root and
  // every heuristic_period nodes. 0 disables them.
  int heuristic_period = 16;
  SimplexOptions simplex;
  std::function<void(const BBEvent&)> observer; // fired after every node
};

struct MILPSolution {
  MILPStatus status = MILPStatus::NumericalError;
  bool has_incumbent = false;
  double objective = kInf; // incumbent value
  double bound = -kInf;
  double gap = kInf;       // (objective - bound) / max(1, |objective|)
  std::vector<double> x;   // incumbent column values, integer columns snapped
  std::int64_t node_count = 0;
  std::int64_t lp_iterations = 0;
};

inline double relative_gap(double incumbent, double bound) {
  if (!std::isfinite(incumbent) || !std::isfinite(bound)) return kInf;
  return (incumbent - bound) / std::max(1.0, std::abs(incumbent));
}

// Best-bound branch and bound over the LP relaxation. Branching picks the
// integer column whose value is furthest from integral (ties: lowest column);
// node selection pops the smallest parent bound (ties: oldest node). Nodes
// re-solve the LP from scratch, which keeps runs bit-reproducible.
inline MILPSolution solve_milp(const MILPModel& model, const MILPOptions& opts = {}) {
  struct Node {
    double bound;
    std::int64_t id;
    std::vector<std::pair<int, double>> floor_bounds; // col -> new upper
    std::vector<std::pair<int, double>> ceil_bounds;  // col -> new lower
  };
  struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
      if (a.bound != b.bound) return a.bound > b.bound; // min-heap on bound
      return a.id > b.id;
    }
  };

  std::vector<int> int_cols;
  for (int j = 0; j < model.lp.num_cols(); ++j)
    if (model.integer_cols[j]) int_cols.push_back(j);

  MILPSolution out;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  open.push({-kInf, 0, {}, {}});
  std::int64_t next_id = 1;

  LPProblem lp = model.lp; // bounds are rewritten per node
  const std::vector<double>& base_lower = model.lp.col_lower;
  const std::vector<double>& base_upper = model.lp.col_upper;

  auto emit = [&]() {
    if (opts.observer)
      opts.observer({out.node_count, out.bound, out.has_incumbent ? out.objective : kInf});
  };

  auto offer_incumbent = [&](const LPSolution& sol) {
    if (out.has_incumbent && sol.objective >= out.objective - 1e-9) return;
    out.has_incumbent = true;
    out.objective = sol.objective;
    out.x = sol.x;
    for (int col : int_cols) out.x[col] = std::round(out.x[col]);
  };

  // Fix every integer column at a rounding of the relaxation and solve the
  // remaining LP; with recourse-complete models this lands on a feasible
  // integer point almost always. Ceiling first (better for fixed-charge
  // structure), nearest second unless it fixes the same point or the gap
  // against the node relaxation is already closed.
  auto run_heuristics = [&](const LPSolution& relax) {
    std::vector<double> prev_fix;
    for (bool ceiling : {true, false}) {
      std::vector<double> fix(int_cols.size());
      for (std::size_t k = 0; k < int_cols.size(); ++k) {
        int col = int_cols[k];
        double v = ceiling ? std::ceil(relax.x[col] - opts.int_tol) : std::round(relax.x[col]);
        fix[k] = std::min(std::max(v, base_lower[col]), base_upper[col]);
      }
      if (fix == prev_fix) continue;
      if (out.has_incumbent && relative_gap(out.objective, relax.objective) <= opts.gap_target)
        break;
      prev_fix = fix;

      lp.col_lower = base_lower;
      lp.col_upper = base_upper;
      for (std::size_t k = 0; k < int_cols.size(); ++k)
        lp.col_lower[int_cols[k]] = lp.col_upper[int_cols[k]] = fix[k];
      SimplexOptions sopts = opts.simplex;
      sopts.max_iterations = std::max<std::int64_t>(1, opts.max_lp_iterations - out.lp_iterations);
      LPSolution h = solve_lp(lp, sopts);
      out.lp_iterations += h.iterations;
      if (h.status == LPStatus::Optimal) offer_incumbent(h);
    }
  };

  while (true) {
    if (open.empty()) {
      if (!out.has_incumbent) {
        out.status = MILPStatus::Infeasible;
        return out;
      }
      out.bound = out.objective; // tree exhausted: incumbent is optimal
      out.gap = 0.0;
      out.status = MILPStatus::GapReached;
      emit();
      return out;
    }

    out.bound = std::max(out.bound, open.top().bound);
    if (out.has_incumbent) {
      out.gap = relative_gap(out.objective, std::isfinite(out.bound) ? out.bound : out.objective);
      if (out.gap <= opts.gap_target) {
        out.status = MILPStatus::GapReached;
        emit();
        return out;
      }
    }
    if (out.node_count >= opts.max_nodes || out.lp_iterations >= opts.max_lp_iterations) {
      out.status = MILPStatus::LimitReached;
      return out;
    }

    Node node = open.top();
    open.pop();
    if (out.has_incumbent && node.bound >= out.objective - 1e-9) continue; // pruned

    lp.col_lower = base_lower;
    lp.col_upper = base_upper;
    for (auto [col, ub] : node.floor_bounds) lp.col_upper[col] = ub;
    for (auto [col, lb] : node.ceil_bounds) lp.col_lower[col] = lb;

    SimplexOptions sopts = opts.simplex;
    sopts.max_iterations = opts.max_lp_iterations - out.lp_iterations;
    LPSolution sol = solve_lp(lp, sopts);
    out.lp_iterations += sol.iterations;
    out.node_count++;

    if (sol.status == LPStatus::IterationLimit) {
      out.status = MILPStatus::LimitReached;
      emit();
      return out;
    }
    if (sol.status == LPStatus::Unbounded) {
      out.status = MILPStatus::Unbounded;
      return out;
    }
    if (sol.status == LPStatus::NumericalError) {
      out.status = MILPStatus::NumericalError;
      return out;
    }
    if (sol.status == LPStatus::Infeasible) {
      emit();
      continue;
    }

    if (out.has_incumbent && sol.objective >= out.objective - 1e-9) {
      emit();
      continue; // bound-dominated
    }

    // most fractional integer column, ties by lowest index
    int branch_col = -1;
    double best_dist = opts.int_tol;
    for (int col : int_cols) {
      double v = sol.x[col];
      double dist = std::abs(v - std::round(v));
      if (dist > best_dist) {
        best_dist = dist;
        branch_col = col;
      }
    }

    if (branch_col < 0) {
      // integral: new incumbent (strict improvement was checked above)
      offer_incumbent(sol);
      emit();
      continue;
    }

    if (opts.heuristic_period > 0 &&
        (out.node_count == 1 || out.node_count % opts.heuristic_period == 0))
      run_heuristics(sol);

    double v = sol.x[branch_col];
    Node down{sol.objective, next_id++, node.floor_bounds, node.ceil_bounds};
    down.floor_bounds.push_back({branch_col, std::floor(v)});
    Node up{sol.objective, next_id++, node.floor_bounds, node.ceil_bounds};
    up.ceil_bounds.push_back({branch_col, std::ceil(v)});
    open.push(std::move(down));
    open.push(std::move(up));
    emit();
  }
}

}  // namespace v2g
