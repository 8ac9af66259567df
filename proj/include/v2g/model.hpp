#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "v2g/lp.hpp"

namespace v2g {

enum class VarKind { X, W, T, S, Q, Y, Alpha, Theta, Delta, Beta };

struct VarInfo {
  VarKind kind;
  int entity = -1;   // station / route / line / bus / generator id
  int entity2 = -1;  // route id for Y
  int scenario = -1; // -1 for first-stage columns
};

// Column layout: first stage x, w, then one block per scenario holding
// t, s, q, y (reachable pairs only), alpha, theta, delta, beta. The mapping
// (kind, ids, scenario) <-> column is a bijection; first-stage columns come
// before every scenario block.
class VarRegistry {
 public:
  struct Dims {
    int stations = 0;  // I
    int routes = 0;    // J
    int buses = 0;     // N
    int lines = 0;     // L
    int generators = 0;// G
  };

  VarRegistry() = default;
  VarRegistry(Dims dims, int scenarios, std::vector<std::pair<int, int>> y_pairs,
              bool with_grid, bool with_first_stage)
      : dims_(dims),
        scenarios_(scenarios),
        y_pairs_(std::move(y_pairs)),
        with_grid_(with_grid),
        with_first_stage_(with_first_stage) {
    pair_offset_.assign(static_cast<std::size_t>(dims_.stations) * dims_.routes, -1);
    for (std::size_t p = 0; p < y_pairs_.size(); ++p) {
      auto [i, j] = y_pairs_[p];
      pair_offset_[static_cast<std::size_t>(i) * dims_.routes + j] = static_cast<int>(p);
    }
    first_stage_cols_ = with_first_stage_ ? 2 * dims_.stations : 0;
    block_ = 2 * dims_.stations + dims_.routes + static_cast<int>(y_pairs_.size());
    if (with_grid_) block_ += dims_.lines + 2 * dims_.buses + dims_.generators;
  }

  const Dims& dims() const { return dims_; }
  int num_scenarios() const { return scenarios_; }
  bool with_grid() const { return with_grid_; }
  bool with_first_stage() const { return with_first_stage_; }
  int num_cols() const { return first_stage_cols_ + scenarios_ * block_; }
  int scenario_block_size() const { return block_; }
  const std::vector<std::pair<int, int>>& y_pairs() const { return y_pairs_; }

  int x(int i) const { return i; }
  int w(int i) const { return dims_.stations + i; }
  int t(int i, int s) const { return base(s) + i; }
  int s(int i, int sc) const { return base(sc) + dims_.stations + i; }
  int q(int j, int s) const { return base(s) + 2 * dims_.stations + j; }
  // -1 when station i cannot serve route j (no variable exists)
  int y(int i, int j, int s) const {
    int p = pair_offset_[static_cast<std::size_t>(i) * dims_.routes + j];
    return p < 0 ? -1 : base(s) + 2 * dims_.stations + dims_.routes + p;
  }
  int y_pair(int p, int s) const { return base(s) + 2 * dims_.stations + dims_.routes + p; }
  int alpha(int l, int s) const { return grid_base(s) + l; }
  int theta(int u, int s) const { return grid_base(s) + dims_.lines + u; }
  int delta(int u, int s) const { return grid_base(s) + dims_.lines + dims_.buses + u; }
  int beta(int g, int s) const { return grid_base(s) + dims_.lines + 2 * dims_.buses + g; }

  VarInfo info(int col) const {
    if (with_first_stage_ && col < first_stage_cols_) {
      if (col < dims_.stations) return {VarKind::X, col, -1, -1};
      return {VarKind::W, col - dims_.stations, -1, -1};
    }
    int rel = col - first_stage_cols_;
    int sc = rel / block_;
    int off = rel % block_;
    if (off < dims_.stations) return {VarKind::T, off, -1, sc};
    off -= dims_.stations;
    if (off < dims_.stations) return {VarKind::S, off, -1, sc};
    off -= dims_.stations;
    if (off < dims_.routes) return {VarKind::Q, off, -1, sc};
    off -= dims_.routes;
    if (off < static_cast<int>(y_pairs_.size()))
      return {VarKind::Y, y_pairs_[off].first, y_pairs_[off].second, sc};
    off -= static_cast<int>(y_pairs_.size());
    if (off < dims_.lines) return {VarKind::Alpha, off, -1, sc};
    off -= dims_.lines;
    if (off < dims_.buses) return {VarKind::Theta, off, -1, sc};
    off -= dims_.buses;
    if (off < dims_.buses) return {VarKind::Delta, off, -1, sc};
    off -= dims_.buses;
    return {VarKind::Beta, off, -1, sc};
  }

  std::string name(int col) const {
    VarInfo v = info(col);
    std::string s;
    switch (v.kind) {
      case VarKind::X: return "x[" + std::to_string(v.entity) + "]";
      case VarKind::W: return "w[" + std::to_string(v.entity) + "]";
      case VarKind::T: s = "t[" + std::to_string(v.entity) + "]"; break;
      case VarKind::S: s = "s[" + std::to_string(v.entity) + "]"; break;
      case VarKind::Q: s = "q[" + std::to_string(v.entity) + "]"; break;
      case VarKind::Y:
        s = "y[" + std::to_string(v.entity) + "," + std::to_string(v.entity2) + "]";
        break;
      case VarKind::Alpha: s = "alpha[" + std::to_string(v.entity) + "]"; break;
      case VarKind::Theta: s = "theta[" + std::to_string(v.entity) + "]"; break;
      case VarKind::Delta: s = "delta[" + std::to_string(v.entity) + "]"; break;
      case VarKind::Beta: s = "beta[" + std::to_string(v.entity) + "]"; break;
    }
    return s + "@s" + std::to_string(v.scenario);
  }

 private:
  int base(int s) const { return first_stage_cols_ + s * block_; }
  int grid_base(int s) const {
    return base(s) + 2 * dims_.stations + dims_.routes + static_cast<int>(y_pairs_.size());
  }

  Dims dims_;
  int scenarios_ = 0;
  std::vector<std::pair<int, int>> y_pairs_;
  std::vector<int> pair_offset_;
  bool with_grid_ = true;
  bool with_first_stage_ = true;
  int first_stage_cols_ = 0;
  int block_ = 0;
};

enum class RowKind {
  StockLower,  // w_i - L_i x_i >= 0
  StockUpper,  // w_i - U_i x_i <= 0
  Budget,      // sum x_i <= K
  Avail,       // s_i + t_i - w_i <= 0
  Demand,      // sum_i y_ij + q_j = d_j
  Serve,       // sum_j y_ij - t_i <= 0
  Balance,     // net outflow = -load + shed + generation + battery discharge
  Flow         // b_uv alpha - theta_u + theta_v = 0
};

struct RowInfo {
  RowKind kind;
  int entity = -1;
  int scenario = -1;
};

inline std::string row_name(const RowInfo& r) {
  std::string s;
  switch (r.kind) {
    case RowKind::StockLower: return "stock_lb[" + std::to_string(r.entity) + "]";
    case RowKind::StockUpper: return "stock_ub[" + std::to_string(r.entity) + "]";
    case RowKind::Budget: return "budget";
    case RowKind::Avail: s = "avail[" + std::to_string(r.entity) + "]"; break;
    case RowKind::Demand: s = "demand[" + std::to_string(r.entity) + "]"; break;
    case RowKind::Serve: s = "serve[" + std::to_string(r.entity) + "]"; break;
    case RowKind::Balance: s = "balance[" + std::to_string(r.entity) + "]"; break;
    case RowKind::Flow: s = "flow[" + std::to_string(r.entity) + "]"; break;
  }
  return s + "@s" + std::to_string(r.scenario);
}

struct ModelConfig {
  bool ge_mode = false;                 // zero the unmet-PHEV penalties
  std::optional<int> station_budget;    // sum x_i <= K
  std::optional<std::vector<double>> fixed_siting; // clamp x to 0/1 values
  int reference_bus = -1;               // -1: lowest-id generator bus per island
  bool integer_stock = false;           // make w integral (small instances)
  bool transport_only = false;          // drop the power grid entirely
};

struct MILPModel {
  LPProblem lp;
  std::vector<bool> integer_cols;
  VarRegistry registry;
  std::vector<RowInfo> row_info;
  ModelConfig config;
};

}  // namespace v2g
