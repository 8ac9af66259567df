#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace v2g {

// Sparse vector scattered over a dense workspace. `indices` lists every slot
// that may hold a nonzero (membership tracked explicitly, so no duplicates);
// clear() only touches listed slots.
struct SparseVec {
  std::vector<double> values;
  std::vector<char> listed;
  std::vector<int> indices;

  void resize(int n) {
    values.assign(n, 0.0);
    listed.assign(n, 0);
    indices.clear();
  }
  void clear() {
    for (int i : indices) {
      values[i] = 0.0;
      listed[i] = 0;
    }
    indices.clear();
  }
  void touch(int i) {
    if (!listed[i]) {
      listed[i] = 1;
      indices.push_back(i);
    }
  }
  void set(int i, double v) {
    touch(i);
    values[i] = v;
  }
  void add(int i, double v) {
    touch(i);
    values[i] += v;
  }
  void swap(SparseVec& o) {
    values.swap(o.values);
    listed.swap(o.listed);
    indices.swap(o.indices);
  }
};

// Left-looking sparse LU with partial pivoting (Gilbert-Peierls scheme):
// columns are processed in natural order, the pivot row is the largest
// magnitude among unpivoted rows (ties: lowest row id). Solves accept sparse
// right-hand sides and walk only the reachable part of the factors.
class SparseFactor {
 public:
  bool factor(int m, const std::vector<int>& col_start, const std::vector<int>& rows,
              const std::vector<double>& vals, double pivot_tol = 1e-11) {
    m_ = m;
    lcol_.assign(m + 1, 0);
    ucol_.assign(m + 1, 0);
    lrow_.clear();
    lval_.clear();
    urow_.clear();
    uval_.clear();
    udiag_.assign(m, 0.0);
    pinv_.assign(m, -1);
    porder_.assign(m, -1);

    std::vector<double> x(m, 0.0);
    std::vector<int> visited(m, -1);
    std::vector<int> pattern;
    pattern.reserve(64);

    for (int k = 0; k < m_; ++k) {
      // pattern of L^{-1} A(:,k): DFS from the column's rows through the
      // columns of L belonging to already-pivoted rows
      pattern.clear();
      for (int p = col_start[k]; p < col_start[k + 1]; ++p) {
        int start = rows[p];
        if (visited[start] == k) continue;
        dfs_stack_.clear();
        dfs_entry_.clear();
        dfs_stack_.push_back(start);
        dfs_entry_.push_back(-1);
        while (!dfs_stack_.empty()) {
          std::size_t depth = dfs_stack_.size() - 1;
          int r = dfs_stack_[depth];
          if (visited[r] != k) {
            visited[r] = k;
            dfs_entry_[depth] = pinv_[r] >= 0 ? lcol_[pinv_[r]] : 0;
          }
          int child = -1;
          if (pinv_[r] >= 0) {
            int pend = lcol_[pinv_[r] + 1];
            int q = dfs_entry_[depth];
            while (q < pend) {
              int cand = lrow_[q];
              ++q;
              if (visited[cand] != k) {
                child = cand;
                break;
              }
            }
            dfs_entry_[depth] = q;
          }
          if (child >= 0) {
            dfs_stack_.push_back(child);
            dfs_entry_.push_back(-1);
          } else {
            pattern.push_back(r);
            dfs_stack_.pop_back();
            dfs_entry_.pop_back();
          }
        }
      }

      for (int p = col_start[k]; p < col_start[k + 1]; ++p) x[rows[p]] = vals[p];
      for (auto it = pattern.rbegin(); it != pattern.rend(); ++it) {
        int r = *it;
        if (pinv_[r] < 0) continue;
        double xr = x[r];
        if (xr == 0.0) continue;
        int col = pinv_[r];
        for (int q = lcol_[col]; q < lcol_[col + 1]; ++q) x[lrow_[q]] -= lval_[q] * xr;
      }

      int pivot_row = -1;
      double pivot_mag = pivot_tol;
      for (int r : pattern)
        if (pinv_[r] < 0) {
          double mag = std::abs(x[r]);
          if (mag > pivot_mag || (pivot_row >= 0 && mag == pivot_mag && r < pivot_row)) {
            pivot_mag = mag;
            pivot_row = r;
          }
        }
      if (pivot_row < 0) {
        for (int r : pattern) x[r] = 0.0;
        return false; // structurally or numerically singular
      }
      double pivot = x[pivot_row];
      pinv_[pivot_row] = k;
      porder_[k] = pivot_row;
      udiag_[k] = pivot;

      for (int r : pattern) {
        double v = x[r];
        x[r] = 0.0;
        if (v == 0.0 || r == pivot_row) continue;
        if (pinv_[r] >= 0 && pinv_[r] < k) {
          urow_.push_back(pinv_[r]);
          uval_.push_back(v);
        } else if (pinv_[r] < 0) {
          lrow_.push_back(r); // original row id, remapped below
          lval_.push_back(v / pivot);
        }
      }
      lcol_[k + 1] = static_cast<int>(lrow_.size());
      ucol_[k + 1] = static_cast<int>(urow_.size());
    }

    for (int& r : lrow_) r = pinv_[r]; // pivot-position space from here on
    work_.resize(m_);
    reach_.reserve(m_);
    stamp_visited_.assign(m_, 0);
    stamp_ = 0;
    transposes_built_ = false;
    return true;
  }

  int size() const { return m_; }
  std::int64_t factor_nnz() const {
    return static_cast<std::int64_t>(lrow_.size() + urow_.size()) + m_;
  }

  // b := B^{-1} b (B as factored). Input indexed by original rows, output by
  // basis position.
  void solve(SparseVec& b) {
    permute(b, pinv_);
    tri_solve(lcol_, lrow_, lval_, nullptr, /*forward=*/true, b);
    tri_solve(ucol_, urow_, uval_, &udiag_, /*forward=*/false, b);
  }

  // b := B^{-T} b. Input indexed by basis position, output by original row.
  void solve_transpose(SparseVec& b) {
    ensure_transposes();
    tri_solve(utcol_, utrow_, utval_, &udiag_, /*forward=*/true, b);
    tri_solve(ltcol_, ltrow_, ltval_, nullptr, /*forward=*/false, b);
    permute(b, porder_);
  }

  void solve_dense(std::vector<double>& b) const {
    std::vector<double> x(m_, 0.0);
    for (int i = 0; i < m_; ++i) x[pinv_[i]] = b[i];
    for (int j = 0; j < m_; ++j) {
      double xj = x[j];
      if (xj == 0.0) continue;
      for (int p = lcol_[j]; p < lcol_[j + 1]; ++p) x[lrow_[p]] -= lval_[p] * xj;
    }
    for (int j = m_ - 1; j >= 0; --j) {
      double xj = x[j] / udiag_[j];
      x[j] = xj;
      if (xj == 0.0) continue;
      for (int p = ucol_[j]; p < ucol_[j + 1]; ++p) x[urow_[p]] -= uval_[p] * xj;
    }
    b.swap(x);
  }

  void solve_transpose_dense(std::vector<double>& b) const {
    // row-oriented solves: U^T forward, then L^T backward, then un-permute
    for (int j = 0; j < m_; ++j) {
      double s = b[j];
      for (int p = ucol_[j]; p < ucol_[j + 1]; ++p) s -= uval_[p] * b[urow_[p]];
      b[j] = s / udiag_[j];
    }
    for (int j = m_ - 1; j >= 0; --j) {
      double s = b[j];
      for (int p = lcol_[j]; p < lcol_[j + 1]; ++p) s -= lval_[p] * b[lrow_[p]];
      b[j] = s;
    }
    std::vector<double> y(m_, 0.0);
    for (int i = 0; i < m_; ++i) y[i] = b[pinv_[i]];
    b.swap(y);
  }

 private:
  void ensure_transposes() {
    if (transposes_built_) return;
    transpose(lcol_, lrow_, lval_, ltcol_, ltrow_, ltval_);
    transpose(ucol_, urow_, uval_, utcol_, utrow_, utval_);
    transposes_built_ = true;
  }

  void transpose(const std::vector<int>& col, const std::vector<int>& row,
                 const std::vector<double>& val, std::vector<int>& tcol, std::vector<int>& trow,
                 std::vector<double>& tval) const {
    tcol.assign(m_ + 1, 0);
    trow.assign(row.size(), 0);
    tval.assign(val.size(), 0.0);
    for (int r : row) tcol[r + 1]++;
    for (int i = 0; i < m_; ++i) tcol[i + 1] += tcol[i];
    std::vector<int> fill(tcol.begin(), tcol.end() - 1);
    for (int j = 0; j < m_; ++j)
      for (int p = col[j]; p < col[j + 1]; ++p) {
        int dst = fill[row[p]]++;
        trow[dst] = j;
        tval[dst] = val[p];
      }
  }

  void permute(SparseVec& b, const std::vector<int>& map) {
    work_.clear();
    for (int i : b.indices) {
      double v = b.values[i];
      if (v != 0.0) work_.set(map[i], v);
    }
    b.clear();
    b.swap(work_);
  }

  // Triangular solve with a sparse right-hand side: DFS reach over the column
  // graph, then numeric substitution in topological order. Works for both
  // lower and upper factors because each stored column only points away from
  // its diagonal in solve order. Dense right-hand sides skip the DFS and
  // sweep the factor once in pivot order instead.
  void tri_solve(const std::vector<int>& col, const std::vector<int>& row,
                 const std::vector<double>& val, const std::vector<double>* diag, bool forward,
                 SparseVec& b) {
    if (static_cast<int>(b.indices.size()) * 32 > m_) {
      tri_solve_dense_sweep(col, row, val, diag, forward, b);
      return;
    }
    reach_.clear();
    ++stamp_;
    for (int i : b.indices) {
      if (b.values[i] == 0.0 || stamp_visited_[i] == stamp_) continue;
      dfs_stack_.clear();
      dfs_entry_.clear();
      dfs_stack_.push_back(i);
      dfs_entry_.push_back(col[i]);
      stamp_visited_[i] = stamp_;
      while (!dfs_stack_.empty()) {
        std::size_t depth = dfs_stack_.size() - 1;
        int j = dfs_stack_[depth];
        int child = -1;
        int q = dfs_entry_[depth];
        int pend = col[j + 1];
        while (q < pend) {
          int cand = row[q];
          ++q;
          if (stamp_visited_[cand] != stamp_) {
            child = cand;
            break;
          }
        }
        dfs_entry_[depth] = q;
        if (child >= 0) {
          stamp_visited_[child] = stamp_;
          dfs_stack_.push_back(child);
          dfs_entry_.push_back(col[child]);
        } else {
          reach_.push_back(j);
          dfs_stack_.pop_back();
          dfs_entry_.pop_back();
        }
      }
    }
    for (auto it = reach_.rbegin(); it != reach_.rend(); ++it) {
      int j = *it;
      double xj = b.values[j];
      if (diag) {
        xj /= (*diag)[j];
        b.set(j, xj);
      }
      if (xj == 0.0) continue;
      for (int p = col[j]; p < col[j + 1]; ++p) b.add(row[p], -val[p] * xj);
    }
  }

  void tri_solve_dense_sweep(const std::vector<int>& col, const std::vector<int>& row,
                             const std::vector<double>& val, const std::vector<double>* diag,
                             bool forward, SparseVec& b) {
    auto step = [&](int j) {
      double xj = b.values[j];
      if (diag && xj != 0.0) {
        xj /= (*diag)[j];
        b.values[j] = xj;
      }
      if (xj == 0.0) return;
      if (!b.listed[j]) {
        b.listed[j] = 1;
        b.indices.push_back(j);
      }
      for (int p = col[j]; p < col[j + 1]; ++p) {
        int r = row[p];
        b.values[r] -= val[p] * xj; // membership fixed up when r is processed
      }
    };
    if (forward)
      for (int j = 0; j < m_; ++j) step(j);
    else
      for (int j = m_ - 1; j >= 0; --j) step(j);
  }

  int m_ = 0;
  std::vector<int> lcol_, lrow_, ucol_, urow_;
  std::vector<double> lval_, uval_, udiag_;
  std::vector<int> pinv_, porder_;
  bool transposes_built_ = false;
  std::vector<int> ltcol_, ltrow_, utcol_, utrow_;
  std::vector<double> ltval_, utval_;

  SparseVec work_;
  std::vector<int> reach_, dfs_stack_, dfs_entry_;
  std::vector<int> stamp_visited_;
  int stamp_ = 0;
};

}  // namespace v2g
