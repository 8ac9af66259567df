#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "v2g/lp.hpp"
#include "v2g/sparse_lu.hpp"

namespace v2g {

struct SimplexOptions {
  double feas_tol = 1e-7;
  double dual_tol = 1e-7;
  double pivot_tol = 1e-9;
  std::int64_t max_iterations = 1'000'000;
  int refactor_period = 64;
  // Consecutive degenerate pivots before switching to Bland's rule.
  int degeneracy_streak = 50;
};

namespace detail {

// Bounded-variable primal simplex, two phases. Artificial columns carry the
// phase-1 infeasibility; once an artificial leaves the basis its bounds are
// fixed to [0,0] so it can never re-enter. The basis is kept as a sparse LU
// factorization plus product-form eta updates, refactorized periodically.
// Reduced costs are maintained incrementally from the pivot row, so an
// iteration only touches the rows and columns the pivot actually reaches.
// Pricing is Dantzig with a Bland fallback under degeneracy.
class BoundedSimplex {
 public:
  BoundedSimplex(const LPProblem& lp, const SimplexOptions& opts) : lp_(lp), opts_(opts) {}

  LPSolution solve() {
    init();
    LPSolution out;

    LPStatus st = run_phase(/*phase1=*/true);
    if (st != LPStatus::Optimal) return finish(out, st);
    if (infeasibility_sum() > feas_scale_) return finish(out, LPStatus::Infeasible);
    seal_artificials();

    st = run_phase(/*phase1=*/false);
    return finish(out, st);
  }

 private:
  // Superbasic: nonbasic at an interior value (used for columns whose bounds
  // straddle zero, so flows and angles start at rest instead of at a bound).
  enum class VStat : std::uint8_t { Basic, AtLower, AtUpper, Superbasic };

  struct Eta {
    int pivot_pos;
    double pivot_val;
    std::vector<std::pair<int, double>> entries; // excludes the pivot position
  };

  const LPProblem& lp_;
  SimplexOptions opts_;

  int n0_ = 0;    // structural columns
  int m_ = 0;     // rows
  int ntot_ = 0;  // structural + slack + artificial

  // CSC of the structural block (the row-wise view lives in lp_).
  std::vector<int> cstart_;
  std::vector<int> crow_;
  std::vector<double> cval_;
  std::vector<double> art_sign_;

  std::vector<double> lower_, upper_, xval_;
  std::vector<VStat> vstat_;
  std::vector<int> basis_;   // column basic in each row position
  std::vector<char> banned_; // columns skipped after a failed pivot

  SparseFactor factor_;
  std::vector<Eta> etas_;
  SparseVec ftran_vec_, btran_vec_;
  std::vector<double> dense_work_;

  std::vector<double> z_;          // reduced costs, maintained incrementally
  std::vector<double> phase_cost_; // per column, current phase
  std::vector<int> candidates_;    // columns whose z recently looked eligible
  std::vector<char> in_candidates_;
  std::vector<double> devex_w_;    // Devex reference weights, reset each refactorization
  SparseVec alpha_;                // pivot row, materialized per iteration

  std::int64_t iterations_ = 0;
  int pivots_since_refactor_ = 0;
  int degen_count_ = 0;
  bool bland_ = false;
  double feas_scale_ = 1e-7;  // classification threshold for phase-1 leftovers
  double early_feas_ = 1e-10; // phase-1 early exit once artificials hit ~zero

  int slack_col(int row) const { return n0_ + row; }
  int art_col(int row) const { return n0_ + m_ + row; }
  bool is_artificial(int col) const { return col >= n0_ + m_; }
  bool is_fixed(int col) const { return lower_[col] == upper_[col]; }

  void init() {
    n0_ = lp_.num_cols();
    m_ = lp_.num_rows();
    ntot_ = n0_ + 2 * m_;

    // transpose rows to CSC
    cstart_.assign(n0_ + 1, 0);
    for (int c : lp_.row_col) cstart_[c + 1]++;
    for (int j = 0; j < n0_; ++j) cstart_[j + 1] += cstart_[j];
    crow_.resize(lp_.row_col.size());
    cval_.resize(lp_.row_col.size());
    std::vector<int> fill(cstart_.begin(), cstart_.end() - 1);
    for (int i = 0; i < m_; ++i)
      for (std::size_t k = lp_.row_start[i]; k < lp_.row_start[i + 1]; ++k) {
        int j = lp_.row_col[k];
        crow_[fill[j]] = i;
        cval_[fill[j]] = lp_.row_val[k];
        fill[j]++;
      }

    lower_.assign(ntot_, 0.0);
    upper_.assign(ntot_, 0.0);
    xval_.assign(ntot_, 0.0);
    vstat_.assign(ntot_, VStat::AtLower);
    banned_.assign(ntot_, 0);
    art_sign_.assign(m_, 1.0);
    basis_.assign(m_, -1);

    double bmax = 0.0;
    for (double b : lp_.rhs) bmax = std::max(bmax, std::abs(b));
    feas_scale_ = opts_.feas_tol * 10.0 * (1.0 + bmax);
    early_feas_ = 1e-10 * (1.0 + bmax);

    for (int j = 0; j < n0_; ++j) {
      lower_[j] = lp_.col_lower[j];
      upper_[j] = lp_.col_upper[j];
      if (lower_[j] < 0.0 && upper_[j] > 0.0) {
        vstat_[j] = VStat::Superbasic; // start at rest, not at a bound
        xval_[j] = 0.0;
      } else if (std::isfinite(lower_[j]) &&
                 (!std::isfinite(upper_[j]) || std::abs(lower_[j]) <= std::abs(upper_[j]))) {
        vstat_[j] = VStat::AtLower;
        xval_[j] = lower_[j];
      } else {
        vstat_[j] = VStat::AtUpper;
        xval_[j] = upper_[j];
      }
    }

    // row residuals at the initial nonbasic point
    std::vector<double> resid(lp_.rhs);
    for (int j = 0; j < n0_; ++j) {
      if (xval_[j] == 0.0) continue;
      for (int k = cstart_[j]; k < cstart_[j + 1]; ++k) resid[crow_[k]] -= cval_[k] * xval_[j];
    }

    // crash: structural singleton columns that can absorb their row's
    // residual within bounds; cheapest absorption wins
    std::vector<int> singleton_of_row(m_, -1);
    for (int i = 0; i < m_; ++i) {
      double r = resid[i];
      int best = -1;
      double best_cost = kInf;
      for (std::size_t k = lp_.row_start[i]; k < lp_.row_start[i + 1]; ++k) {
        int j = lp_.row_col[k];
        if (cstart_[j + 1] - cstart_[j] != 1) continue;
        double coef = cval_[cstart_[j]];
        if (std::abs(coef) <= opts_.pivot_tol) continue;
        double needed = xval_[j] + r / coef;
        if (needed < lower_[j] || needed > upper_[j]) continue;
        double cost = std::abs(lp_.objective[j] * needed);
        if (cost < best_cost - 1e-12 || (cost < best_cost + 1e-12 && (best < 0 || j < best))) {
          best = j;
          best_cost = cost;
        }
      }
      singleton_of_row[i] = best;
    }

    for (int i = 0; i < m_; ++i) {
      int sc = slack_col(i), ac = art_col(i);
      switch (lp_.sense[i]) {
        case RowSense::LE: lower_[sc] = 0.0;   upper_[sc] = kInf; break;
        case RowSense::GE: lower_[sc] = -kInf; upper_[sc] = 0.0;  break;
        case RowSense::EQ: lower_[sc] = 0.0;   upper_[sc] = 0.0;  break;
      }
      lower_[ac] = upper_[ac] = 0.0;
      vstat_[ac] = VStat::AtLower;

      double r = resid[i];
      if (r >= lower_[sc] && r <= upper_[sc]) {
        basis_[i] = sc;
        vstat_[sc] = VStat::Basic;
        xval_[sc] = r;
        continue;
      }
      vstat_[sc] = (lp_.sense[i] == RowSense::GE) ? VStat::AtUpper : VStat::AtLower;
      xval_[sc] = 0.0;

      if (int j = singleton_of_row[i]; j >= 0 && vstat_[j] != VStat::Basic) {
        basis_[i] = j;
        xval_[j] += r / cval_[cstart_[j]];
        vstat_[j] = VStat::Basic;
        continue;
      }
      art_sign_[i] = (r >= 0.0) ? 1.0 : -1.0;
      lower_[ac] = 0.0;
      upper_[ac] = kInf;
      basis_[i] = ac;
      vstat_[ac] = VStat::Basic;
      xval_[ac] = std::abs(r);
    }

    ftran_vec_.resize(m_);
    btran_vec_.resize(m_);
    alpha_.resize(ntot_);
    phase_cost_.assign(ntot_, 0.0);
    z_.assign(ntot_, 0.0);
    devex_w_.assign(ntot_, 1.0);
    in_candidates_.assign(ntot_, 0);
    candidates_.clear();
  }

  void set_phase_costs(bool phase1) {
    std::fill(phase_cost_.begin(), phase_cost_.end(), 0.0);
    if (phase1) {
      for (int i = 0; i < m_; ++i) phase_cost_[art_col(i)] = 1.0;
    } else {
      for (int j = 0; j < n0_; ++j) phase_cost_[j] = lp_.objective[j];
    }
  }

  double infeasibility_sum() const {
    double s = 0.0;
    for (int i = 0; i < m_; ++i) s += xval_[art_col(i)];
    return s;
  }

  void seal_artificials() {
    for (int i = 0; i < m_; ++i) {
      int ac = art_col(i);
      lower_[ac] = upper_[ac] = 0.0;
      if (vstat_[ac] == VStat::Basic)
        xval_[ac] = 0.0; // within feasibility tolerance by the phase-1 optimum
      else
        vstat_[ac] = VStat::AtLower;
    }
  }

  // --- basis linear algebra --------------------------------------------------

  bool refactorize() {
    etas_.clear();
    pivots_since_refactor_ = 0;
    if (m_ > 0) {
      std::vector<int> bcol(m_ + 1, 0);
      std::vector<int> brow;
      std::vector<double> bval;
      brow.reserve(m_ * 2);
      bval.reserve(m_ * 2);
      for (int i = 0; i < m_; ++i) {
        int col = basis_[i];
        if (col < n0_) {
          for (int k = cstart_[col]; k < cstart_[col + 1]; ++k) {
            brow.push_back(crow_[k]);
            bval.push_back(cval_[k]);
          }
        } else if (col < n0_ + m_) {
          brow.push_back(col - n0_);
          bval.push_back(1.0);
        } else {
          brow.push_back(col - n0_ - m_);
          bval.push_back(art_sign_[col - n0_ - m_]);
        }
        bcol[i + 1] = static_cast<int>(brow.size());
      }
      if (!factor_.factor(m_, bcol, brow, bval)) return false;
    }
    recompute_basic_values();
    rebuild_reduced_costs();
    return true;
  }

  // only valid right after refactorize (no etas)
  void recompute_basic_values() {
    if (m_ == 0) return;
    dense_work_.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) dense_work_[i] = lp_.rhs[i];
    for (int j = 0; j < ntot_; ++j) {
      if (vstat_[j] == VStat::Basic || xval_[j] == 0.0) continue;
      if (j < n0_) {
        for (int k = cstart_[j]; k < cstart_[j + 1]; ++k)
          dense_work_[crow_[k]] -= cval_[k] * xval_[j];
      } else if (j < n0_ + m_) {
        dense_work_[j - n0_] -= xval_[j];
      } else {
        dense_work_[j - n0_ - m_] -= art_sign_[j - n0_ - m_] * xval_[j];
      }
    }
    factor_.solve_dense(dense_work_);
    for (int i = 0; i < m_; ++i) xval_[basis_[i]] = dense_work_[i];
  }

  void rebuild_reduced_costs() {
    if (m_ == 0) {
      for (int j = 0; j < ntot_; ++j) z_[j] = phase_cost_[j];
      rebuild_candidates();
      return;
    }
    dense_work_.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) dense_work_[i] = phase_cost_[basis_[i]];
    factor_.solve_transpose_dense(dense_work_); // y = B^-T c_B
    for (int j = 0; j < n0_; ++j) {
      double zj = phase_cost_[j];
      for (int k = cstart_[j]; k < cstart_[j + 1]; ++k) zj -= dense_work_[crow_[k]] * cval_[k];
      z_[j] = zj;
    }
    for (int i = 0; i < m_; ++i) {
      z_[slack_col(i)] = phase_cost_[slack_col(i)] - dense_work_[i];
      z_[art_col(i)] = phase_cost_[art_col(i)] - dense_work_[i] * art_sign_[i];
    }
    std::fill(devex_w_.begin(), devex_w_.end(), 1.0); // new reference framework
    rebuild_candidates();
  }

  void scatter_column(int col, SparseVec& v) const {
    if (col < n0_) {
      for (int k = cstart_[col]; k < cstart_[col + 1]; ++k) v.set(crow_[k], cval_[k]);
    } else if (col < n0_ + m_) {
      v.set(col - n0_, 1.0);
    } else {
      v.set(col - n0_ - m_, art_sign_[col - n0_ - m_]);
    }
  }

  // v := B^{-1} v through the factorization and the etas
  void ftran(SparseVec& v) {
    if (m_ == 0) return;
    factor_.solve(v);
    for (const Eta& e : etas_) {
      double t = v.values[e.pivot_pos];
      if (t == 0.0) continue;
      t /= e.pivot_val;
      v.set(e.pivot_pos, t);
      for (auto [i, val] : e.entries) v.add(i, -val * t);
    }
  }

  // u := B^{-T} u: peel etas in reverse, then factor transpose solve
  void btran(SparseVec& u) {
    if (m_ == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = 0.0;
      for (auto [i, val] : it->entries) s += u.values[i] * val;
      double up = u.values[it->pivot_pos];
      double nv = (up - s) / it->pivot_val;
      if (nv != 0.0 || up != 0.0) u.set(it->pivot_pos, nv);
    }
    factor_.solve_transpose(u);
  }

  // --- pricing ----------------------------------------------------------------

  struct Entering {
    int col = -1;
    int dir = 0;
    double score = 0.0;
  };

  int eligible_direction(int j) const {
    if (vstat_[j] == VStat::Basic || banned_[j] || is_fixed(j)) return 0;
    double zj = z_[j];
    if (vstat_[j] == VStat::AtLower && zj < -opts_.dual_tol) return +1;
    if (vstat_[j] == VStat::AtUpper && zj > opts_.dual_tol) return -1;
    if (vstat_[j] == VStat::Superbasic && std::abs(zj) > opts_.dual_tol) return zj < 0 ? +1 : -1;
    return 0;
  }

  void offer_candidate(int j) {
    if (!in_candidates_[j] && eligible_direction(j) != 0) {
      in_candidates_[j] = 1;
      candidates_.push_back(j);
    }
  }

  void rebuild_candidates() {
    for (int j : candidates_) in_candidates_[j] = 0;
    candidates_.clear();
    const int limit = n0_ + m_;
    for (int j = 0; j < limit; ++j) offer_candidate(j);
  }

  // Devex pricing (score z^2 / reference weight) over the candidate list;
  // falls back to a full rescan before declaring optimality. Bland mode scans
  // everything for the lowest eligible index.
  Entering price() {
    if (bland_) {
      Entering best;
      const int limit = n0_ + m_;
      for (int j = 0; j < limit; ++j)
        if (int dir = eligible_direction(j); dir != 0) return {j, dir, std::abs(z_[j])};
      return best;
    }
    for (int attempt = 0; attempt < 2; ++attempt) {
      Entering best;
      std::size_t keep = 0;
      for (std::size_t idx = 0; idx < candidates_.size(); ++idx) {
        int j = candidates_[idx];
        int dir = eligible_direction(j);
        if (dir == 0) {
          in_candidates_[j] = 0; // lazily dropped
          continue;
        }
        candidates_[keep++] = j;
        double score = z_[j] * z_[j] / devex_w_[j];
        if (score > best.score || (score == best.score && best.col >= 0 && j < best.col))
          best = {j, dir, score};
      }
      candidates_.resize(keep);
      if (best.col >= 0) return best;
      rebuild_candidates(); // empty list: confirm optimality with a full scan
    }
    return {};
  }

  // exact reduced cost of one column from the ftran result
  double confirm_reduced_cost(int col, const SparseVec& v) const {
    double zj = phase_cost_[col];
    for (int k : v.indices) {
      double vk = v.values[k];
      if (vk != 0.0) zj -= phase_cost_[basis_[k]] * vk;
    }
    return zj;
  }

  // --- main loop ----------------------------------------------------------------

  LPStatus run_phase(bool phase1) {
    set_phase_costs(phase1);
    if (!refactorize()) return LPStatus::NumericalError;
    std::fill(banned_.begin(), banned_.end(), 0);
    degen_count_ = 0;
    bland_ = false;
    int refactor_retries = 0;

    while (true) {
      if (phase1 && infeasibility_sum() <= early_feas_) return LPStatus::Optimal;
      if (iterations_ >= opts_.max_iterations) return LPStatus::IterationLimit;

      Entering ent = price();
      if (ent.col < 0) {
        if (std::count(banned_.begin(), banned_.end(), char(1)) > 0 && refactor_retries < 3) {
          std::fill(banned_.begin(), banned_.end(), 0);
          refactor_retries++;
          if (!refactorize()) return LPStatus::NumericalError;
          continue;
        }
        return LPStatus::Optimal;
      }

      ftran_vec_.clear();
      scatter_column(ent.col, ftran_vec_);
      ftran(ftran_vec_);

      // stale incremental value: correct it and price again
      double z_true = confirm_reduced_cost(ent.col, ftran_vec_);
      if (std::abs(z_true - z_[ent.col]) > 0.5 * std::abs(z_[ent.col]) + opts_.dual_tol * 0.5) {
        z_[ent.col] = z_true;
        bool still = (vstat_[ent.col] == VStat::AtLower && z_true < -opts_.dual_tol) ||
                     (vstat_[ent.col] == VStat::AtUpper && z_true > opts_.dual_tol) ||
                     (vstat_[ent.col] == VStat::Superbasic && std::abs(z_true) > opts_.dual_tol);
        if (!still) continue;
      }
      z_[ent.col] = z_true;

      // ratio test: entering moves by delta >= 0 in direction dir; its own
      // range in that direction is one candidate limit ("flip")
      double own_limit;
      if (vstat_[ent.col] == VStat::Superbasic)
        own_limit = ent.dir > 0 ? upper_[ent.col] - xval_[ent.col]
                                : xval_[ent.col] - lower_[ent.col];
      else
        own_limit = upper_[ent.col] - lower_[ent.col];
      double best_delta = kInf;
      bool flip = false;
      if (std::isfinite(own_limit)) {
        best_delta = own_limit;
        flip = true;
      }
      int leave_pos = -1;
      double leave_pivot = 0.0;
      int leave_to_upper = 0;
      for (int k : ftran_vec_.indices) {
        double vk = ftran_vec_.values[k];
        double coef = ent.dir * vk;
        if (std::abs(coef) <= opts_.pivot_tol) continue;
        int bk = basis_[k];
        double limit;
        int to_upper;
        if (coef > 0) {
          if (!std::isfinite(lower_[bk])) continue;
          limit = (xval_[bk] - lower_[bk]) / coef;
          to_upper = 0;
        } else {
          if (!std::isfinite(upper_[bk])) continue;
          limit = (xval_[bk] - upper_[bk]) / coef;
          to_upper = 1;
        }
        limit = std::max(0.0, limit);
        bool better = limit < best_delta - 1e-12;
        bool tied = !better && limit <= best_delta + 1e-12 && leave_pos >= 0;
        if (better || (tied && !bland_ && std::abs(vk) > std::abs(leave_pivot)) ||
            (tied && bland_ && basis_[k] < basis_[leave_pos])) {
          best_delta = limit;
          leave_pos = k;
          leave_pivot = vk;
          leave_to_upper = to_upper;
          flip = false;
        }
      }

      if (!std::isfinite(best_delta)) {
        if (phase1) return LPStatus::NumericalError; // phase 1 is bounded below
        return LPStatus::Unbounded;
      }

      iterations_++;

      if (flip || leave_pos < 0) {
        // entering variable reaches its own bound, no basis change
        apply_step(ent, best_delta);
        xval_[ent.col] = (ent.dir > 0) ? upper_[ent.col] : lower_[ent.col];
        vstat_[ent.col] = (ent.dir > 0) ? VStat::AtUpper : VStat::AtLower;
        note_progress(best_delta);
        continue;
      }

      if (std::abs(leave_pivot) < 1e-8 && refactor_retries < 3 && pivots_since_refactor_ > 0) {
        // suspicious pivot: rebuild the factorization and redo this iteration
        refactor_retries++;
        iterations_--;
        if (!refactorize()) return LPStatus::NumericalError;
        continue;
      }
      if (std::abs(leave_pivot) < opts_.pivot_tol) {
        banned_[ent.col] = 1; // numerically unusable column
        iterations_--;
        continue;
      }
      refactor_retries = 0;

      // update the reduced costs from the pivot row before statuses change
      update_reduced_costs(ent, leave_pos, z_true);

      int leaving = basis_[leave_pos];
      apply_step(ent, best_delta);
      xval_[ent.col] = nonbasic_value(ent) + ent.dir * best_delta;
      xval_[leaving] = leave_to_upper ? upper_[leaving] : lower_[leaving];
      vstat_[leaving] = leave_to_upper ? VStat::AtUpper : VStat::AtLower;
      vstat_[ent.col] = VStat::Basic;
      basis_[leave_pos] = ent.col;
      if (is_artificial(leaving)) lower_[leaving] = upper_[leaving] = 0.0;
      offer_candidate(leaving);

      Eta eta;
      eta.pivot_pos = leave_pos;
      eta.pivot_val = leave_pivot;
      for (int k : ftran_vec_.indices) {
        double vk = ftran_vec_.values[k];
        if (k != leave_pos && std::abs(vk) > 1e-12) eta.entries.push_back({k, vk});
      }
      etas_.push_back(std::move(eta));

      std::fill(banned_.begin(), banned_.end(), 0);
      note_progress(best_delta);

      if (++pivots_since_refactor_ >= opts_.refactor_period) {
        if (!refactorize()) return LPStatus::NumericalError;
      }
    }
  }

  // Pivot-row pass: rho = B^{-T} e_r, alpha_j = rho . A_j for the nonbasic
  // columns that intersect rho's rows. Updates every touched reduced cost and
  // the Devex reference weights in one sweep; the leaving column picks up -t
  // directly.
  void update_reduced_costs(const Entering& ent, int leave_pos, double z_entering) {
    double pivot = ftran_vec_.values[leave_pos];
    double t = z_entering / pivot;
    double w_entering = devex_w_[ent.col];
    double devex_scale = w_entering / (pivot * pivot);

    btran_vec_.clear();
    btran_vec_.set(leave_pos, 1.0);
    btran(btran_vec_);

    alpha_.clear();
    for (int i : btran_vec_.indices) {
      double ri = btran_vec_.values[i];
      if (ri == 0.0) continue;
      for (std::size_t k = lp_.row_start[i]; k < lp_.row_start[i + 1]; ++k) {
        int j = lp_.row_col[k];
        if (vstat_[j] != VStat::Basic) alpha_.add(j, ri * lp_.row_val[k]);
      }
      int sc = slack_col(i);
      if (vstat_[sc] != VStat::Basic) alpha_.add(sc, ri);
      int ac = art_col(i);
      if (vstat_[ac] != VStat::Basic && !is_fixed(ac)) alpha_.add(ac, ri * art_sign_[i]);
    }
    for (int j : alpha_.indices) {
      double aj = alpha_.values[j];
      if (aj == 0.0) continue;
      if (t != 0.0) z_[j] -= t * aj;
      devex_w_[j] = std::max(devex_w_[j], aj * aj * devex_scale);
      offer_candidate(j);
    }
    int leaving = basis_[leave_pos];
    z_[leaving] = -t;
    z_[ent.col] = 0.0;
    devex_w_[leaving] = std::max(devex_scale, 1.0);
  }

  double nonbasic_value(const Entering& e) const {
    if (vstat_[e.col] == VStat::AtLower) return lower_[e.col];
    if (vstat_[e.col] == VStat::AtUpper) return upper_[e.col];
    return xval_[e.col]; // superbasic
  }

  void apply_step(const Entering& ent, double delta) {
    if (delta == 0.0) return;
    for (int k : ftran_vec_.indices) {
      double vk = ftran_vec_.values[k];
      if (vk != 0.0) xval_[basis_[k]] -= ent.dir * delta * vk;
    }
  }

  void note_progress(double delta) {
    if (delta <= 1e-11) {
      if (++degen_count_ >= opts_.degeneracy_streak) bland_ = true;
    } else {
      degen_count_ = 0;
      bland_ = false;
    }
  }

  LPSolution finish(LPSolution& out, LPStatus st) {
    out.status = st;
    out.iterations = iterations_;
    out.x.assign(xval_.begin(), xval_.begin() + n0_);
    out.objective = 0.0;
    for (int j = 0; j < n0_; ++j) out.objective += lp_.objective[j] * xval_[j];
    out.duals.assign(m_, 0.0);
    out.reduced_costs.assign(n0_, 0.0);
    if (st == LPStatus::Optimal && m_ > 0) {
      set_phase_costs(false);
      dense_work_.assign(m_, 0.0);
      for (int i = 0; i < m_; ++i) dense_work_[i] = phase_cost_[basis_[i]];
      // duals through the etas: peel in reverse on a dense vector
      for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
        double s = 0.0;
        for (auto [i, val] : it->entries) s += dense_work_[i] * val;
        dense_work_[it->pivot_pos] = (dense_work_[it->pivot_pos] - s) / it->pivot_val;
      }
      factor_.solve_transpose_dense(dense_work_);
      for (int i = 0; i < m_; ++i) out.duals[i] = dense_work_[i];
      for (int j = 0; j < n0_; ++j) {
        double zj = lp_.objective[j];
        for (int k = cstart_[j]; k < cstart_[j + 1]; ++k) zj -= dense_work_[crow_[k]] * cval_[k];
        out.reduced_costs[j] = zj;
      }
    } else if (st == LPStatus::Optimal) {
      for (int j = 0; j < n0_; ++j) out.reduced_costs[j] = lp_.objective[j];
    }
    return out;
  }
};

}  // namespace detail

inline LPSolution solve_lp(const LPProblem& lp, const SimplexOptions& opts = {}) {
  detail::BoundedSimplex s(lp, opts);
  return s.solve();
}

}  // namespace v2g
