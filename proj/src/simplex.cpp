#include "onsu/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace onsu::lp {

namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kPivotTol = 1e-6;  // smaller pivots corrupt the dense inverse
constexpr double kCostTol = 1e-9;

// Column universe: structural vars, then one slack per row, then one
// artificial per row (activated only when the slack start is infeasible).
class Simplex {
public:
    explicit Simplex(const Problem& p, bool force_bland = false)
        : p_(p), m_(p.n_rows), ns_(p.n_vars()), force_bland_(force_bland) {
        total_ = ns_ + 2 * m_;
        lb_.assign(static_cast<std::size_t>(total_), 0.0);
        ub_.assign(static_cast<std::size_t>(total_), 0.0);
        cost_.assign(static_cast<std::size_t>(total_), 0.0);
        art_sign_.assign(static_cast<std::size_t>(m_), 1.0);
        for (int j = 0; j < ns_; ++j) {
            lb_[static_cast<std::size_t>(j)] = p.lb[static_cast<std::size_t>(j)];
            ub_[static_cast<std::size_t>(j)] = p.ub[static_cast<std::size_t>(j)];
            cost_[static_cast<std::size_t>(j)] = p.cost[static_cast<std::size_t>(j)];
        }
        for (int i = 0; i < m_; ++i) {
            int s = slack(i);
            switch (p.sense[static_cast<std::size_t>(i)]) {
                case RowSense::LE:
                    lb_[static_cast<std::size_t>(s)] = 0.0;
                    ub_[static_cast<std::size_t>(s)] = kUnbounded;
                    break;
                case RowSense::EQ:
                    lb_[static_cast<std::size_t>(s)] = 0.0;
                    ub_[static_cast<std::size_t>(s)] = 0.0;
                    break;
                case RowSense::GE:
                    lb_[static_cast<std::size_t>(s)] = -kUnbounded;
                    ub_[static_cast<std::size_t>(s)] = 0.0;
                    break;
            }
            // Artificials stay pinned until activated.
            lb_[static_cast<std::size_t>(artificial(i))] = 0.0;
            ub_[static_cast<std::size_t>(artificial(i))] = 0.0;
        }
    }

    Result run(int max_iterations) {
        if (max_iterations <= 0) max_iterations = 200 + 40 * (m_ + ns_);
        init_basis();
        Result res;

        if (needs_phase1_) {
            phase1_ = true;
            int it = iterate(max_iterations);
            res.iterations += it;
            if (status_ != Status::Optimal) {
                res.status = status_ == Status::Unbounded ? Status::Failed : status_;
                return res;
            }
            double infeas = 0.0;
            for (int i = 0; i < m_; ++i)
                infeas += value_of(artificial(i));
            if (infeas > 1e-7) {
                res.status = Status::Infeasible;
                res.iterations = it;
                return res;
            }
            // Pin artificials at zero and drive basic ones out when possible.
            for (int i = 0; i < m_; ++i) {
                ub_[static_cast<std::size_t>(artificial(i))] = 0.0;
                lb_[static_cast<std::size_t>(artificial(i))] = 0.0;
            }
            drive_out_artificials();
        }

        phase1_ = false;
        int it2 = iterate(max_iterations);
        res.iterations += it2;
        res.status = status_;
        if (status_ == Status::Optimal || status_ == Status::IterLimit) {
            res.x.assign(static_cast<std::size_t>(ns_), 0.0);
            double obj = 0.0;
            for (int j = 0; j < ns_; ++j) {
                double v = value_of(j);
                res.x[static_cast<std::size_t>(j)] = v;
                obj += p_.cost[static_cast<std::size_t>(j)] * v;
            }
            res.objective = obj;
            if (status_ == Status::IterLimit) res.status = Status::IterLimit;
        }
        return res;
    }

private:
    int slack(int row) const { return ns_ + row; }
    int artificial(int row) const { return ns_ + m_ + row; }

    // Sparse column access spanning structural/slack/artificial vars.
    template <typename Fn>
    void for_col(int j, Fn&& fn) const {
        if (j < ns_) {
            for (const Entry& e : p_.cols[static_cast<std::size_t>(j)]) fn(e.row, e.value);
        } else if (j < ns_ + m_) {
            fn(j - ns_, 1.0);
        } else {
            fn(j - ns_ - m_, art_sign_[static_cast<std::size_t>(j - ns_ - m_)]);
        }
    }

    double value_of(int j) const {
        int k = basic_pos_[static_cast<std::size_t>(j)];
        if (k >= 0) return xb_[static_cast<std::size_t>(k)];
        double v = at_upper_[static_cast<std::size_t>(j)] ? ub_[static_cast<std::size_t>(j)]
                                                          : lb_[static_cast<std::size_t>(j)];
        if (v <= -kUnbounded || v >= kUnbounded) return 0.0;  // free nonbasic rests at 0
        return v;
    }

    void init_basis() {
        basis_.assign(static_cast<std::size_t>(m_), -1);
        basic_pos_.assign(static_cast<std::size_t>(total_), -1);
        at_upper_.assign(static_cast<std::size_t>(total_), 0);
        binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
        for (int i = 0; i < m_; ++i) binv_[static_cast<std::size_t>(i) * m_ + i] = 1.0;

        // Nonbasic structurals start at the bound nearest zero.
        for (int j = 0; j < ns_; ++j) {
            double lo = lb_[static_cast<std::size_t>(j)];
            double hi = ub_[static_cast<std::size_t>(j)];
            at_upper_[static_cast<std::size_t>(j)] =
                (lo <= -kUnbounded && hi < kUnbounded) ? 1 : 0;
            if (lo > -kUnbounded && hi < kUnbounded && std::abs(hi) < std::abs(lo))
                at_upper_[static_cast<std::size_t>(j)] = 1;
        }

        // Slack basis; rows whose slack value is out of range get an
        // artificial absorbing the residual instead.
        needs_phase1_ = false;
        std::vector<double> act(static_cast<std::size_t>(m_), 0.0);
        for (int j = 0; j < ns_; ++j) {
            double v = at_upper_[static_cast<std::size_t>(j)] ? ub_[static_cast<std::size_t>(j)]
                                                              : lb_[static_cast<std::size_t>(j)];
            if (v == 0.0) continue;
            for (const Entry& e : p_.cols[static_cast<std::size_t>(j)])
                act[static_cast<std::size_t>(e.row)] += e.value * v;
        }
        for (int i = 0; i < m_; ++i) {
            double resid = p_.rhs[static_cast<std::size_t>(i)] - act[static_cast<std::size_t>(i)];
            int s = slack(i);
            if (resid >= lb_[static_cast<std::size_t>(s)] - kFeasTol &&
                resid <= ub_[static_cast<std::size_t>(s)] + kFeasTol) {
                set_basic(s, i, resid);
            } else {
                // Park the slack at the bound nearest the residual.
                double parked = resid > ub_[static_cast<std::size_t>(s)]
                                    ? ub_[static_cast<std::size_t>(s)]
                                    : lb_[static_cast<std::size_t>(s)];
                if (parked <= -kUnbounded) parked = ub_[static_cast<std::size_t>(s)];
                at_upper_[static_cast<std::size_t>(s)] =
                    parked == ub_[static_cast<std::size_t>(s)] ? 1 : 0;
                double leftover = resid - parked;
                int a = artificial(i);
                art_sign_[static_cast<std::size_t>(i)] = leftover >= 0.0 ? 1.0 : -1.0;
                ub_[static_cast<std::size_t>(a)] = kUnbounded;
                // The basis column is +/- e_i, so the inverse diagonal
                // carries the same sign.
                binv_[static_cast<std::size_t>(i) * m_ + i] =
                    art_sign_[static_cast<std::size_t>(i)];
                set_basic(a, i, std::abs(leftover));
                needs_phase1_ = true;
            }
        }
    }

    void set_basic(int j, int row, double value) {
        basis_[static_cast<std::size_t>(row)] = j;
        basic_pos_[static_cast<std::size_t>(j)] = row;
        if (static_cast<int>(xb_.size()) < m_) xb_.resize(static_cast<std::size_t>(m_), 0.0);
        xb_[static_cast<std::size_t>(row)] = value;
    }

    double cost_of(int j) const {
        if (phase1_) return j >= ns_ + m_ ? 1.0 : 0.0;
        return j < static_cast<int>(cost_.size()) ? cost_[static_cast<std::size_t>(j)] : 0.0;
    }

    // y = c_B' * Binv, skipping zero-cost basics.
    void compute_duals(std::vector<double>& y) const {
        y.assign(static_cast<std::size_t>(m_), 0.0);
        for (int k = 0; k < m_; ++k) {
            double cb = cost_of(basis_[static_cast<std::size_t>(k)]);
            if (cb == 0.0) continue;
            const double* row = &binv_[static_cast<std::size_t>(k) * m_];
            for (int i = 0; i < m_; ++i) y[static_cast<std::size_t>(i)] += cb * row[i];
        }
    }

    double reduced_cost(int j, const std::vector<double>& y) const {
        double d = cost_of(j);
        for_col(j, [&](int r, double v) { d -= y[static_cast<std::size_t>(r)] * v; });
        return d;
    }

    void ftran(int j, std::vector<double>& w) const {
        w.assign(static_cast<std::size_t>(m_), 0.0);
        for_col(j, [&](int r, double v) {
            for (int k = 0; k < m_; ++k)
                w[static_cast<std::size_t>(k)] += v * binv_[static_cast<std::size_t>(k) * m_ + r];
        });
    }

    // Recompute x_B from scratch to flush accumulated update error.
    void refresh_xb() {
        std::vector<double> act(static_cast<std::size_t>(m_), 0.0);
        for (int j = 0; j < total_; ++j) {
            if (basic_pos_[static_cast<std::size_t>(j)] >= 0) continue;
            double v = value_of(j);
            if (v == 0.0) continue;
            for_col(j, [&](int r, double val) { act[static_cast<std::size_t>(r)] += val * v; });
        }
        for (int k = 0; k < m_; ++k) {
            double v = 0.0;
            const double* row = &binv_[static_cast<std::size_t>(k) * m_];
            for (int i = 0; i < m_; ++i)
                v += row[i] * (p_.rhs[static_cast<std::size_t>(i)] - act[static_cast<std::size_t>(i)]);
            xb_[static_cast<std::size_t>(k)] = v;
        }
    }

    // Residual of B * xb against the rhs net of nonbasic activity, computed
    // from the original columns; measures inverse drift.
    double basis_residual() {
        std::vector<double> act(static_cast<std::size_t>(m_), 0.0);
        for (int j = 0; j < total_; ++j) {
            double v = value_of(j);
            if (v == 0.0) continue;
            for_col(j, [&](int r, double val) { act[static_cast<std::size_t>(r)] += val * v; });
        }
        double worst = 0.0;
        for (int i = 0; i < m_; ++i)
            worst = std::max(worst,
                             std::abs(p_.rhs[static_cast<std::size_t>(i)] -
                                      act[static_cast<std::size_t>(i)]));
        return worst;
    }

    // Full Gauss-Jordan reinversion of the current basis. Rare recovery
    // path; returns false on a numerically singular basis.
    bool reinvert() {
        std::vector<double> B(static_cast<std::size_t>(m_) * m_, 0.0);
        for (int k = 0; k < m_; ++k)
            for_col(basis_[static_cast<std::size_t>(k)], [&](int r, double v) {
                B[static_cast<std::size_t>(r) * m_ + k] = v;
            });
        std::vector<double> inv(static_cast<std::size_t>(m_) * m_, 0.0);
        for (int i = 0; i < m_; ++i) inv[static_cast<std::size_t>(i) * m_ + i] = 1.0;
        for (int col = 0; col < m_; ++col) {
            int piv = -1;
            double best = 1e-12;
            for (int r = col; r < m_; ++r) {
                double v = std::abs(B[static_cast<std::size_t>(r) * m_ + col]);
                if (v > best) {
                    best = v;
                    piv = r;
                }
            }
            if (piv < 0) return false;
            if (piv != col) {
                for (int c = 0; c < m_; ++c) {
                    std::swap(B[static_cast<std::size_t>(piv) * m_ + c],
                              B[static_cast<std::size_t>(col) * m_ + c]);
                    std::swap(inv[static_cast<std::size_t>(piv) * m_ + c],
                              inv[static_cast<std::size_t>(col) * m_ + c]);
                }
            }
            double d = B[static_cast<std::size_t>(col) * m_ + col];
            for (int c = 0; c < m_; ++c) {
                B[static_cast<std::size_t>(col) * m_ + c] /= d;
                inv[static_cast<std::size_t>(col) * m_ + c] /= d;
            }
            for (int r = 0; r < m_; ++r) {
                if (r == col) continue;
                double f = B[static_cast<std::size_t>(r) * m_ + col];
                if (f == 0.0) continue;
                for (int c = 0; c < m_; ++c) {
                    B[static_cast<std::size_t>(r) * m_ + c] -=
                        f * B[static_cast<std::size_t>(col) * m_ + c];
                    inv[static_cast<std::size_t>(r) * m_ + c] -=
                        f * inv[static_cast<std::size_t>(col) * m_ + c];
                }
            }
        }
        binv_ = std::move(inv);
        refresh_xb();
        return true;
    }

    // Basics stay within bounds in both phases; infeasibility lives only in
    // the artificial values that phase 1 minimizes.
    double work_lb(int j) const { return lb_[static_cast<std::size_t>(j)]; }
    double work_ub(int j) const { return ub_[static_cast<std::size_t>(j)]; }

    int iterate(int max_iters) {
        status_ = Status::Optimal;
        std::vector<double> y, w;
        int iters = 0;
        int stall = 0;
        int repairs = 0;
        bool bland = force_bland_;
        while (iters < max_iters) {
            compute_duals(y);
            // Pricing.
            int enter = -1;
            double best = 0.0;
            for (int j = 0; j < total_; ++j) {
                if (basic_pos_[static_cast<std::size_t>(j)] >= 0) continue;
                double lo = work_lb(j), hi = work_ub(j);
                if (hi - lo <= kFeasTol && hi < kUnbounded) continue;  // fixed
                double d = reduced_cost(j, y);
                bool eligible = false;
                if (!at_upper_[static_cast<std::size_t>(j)] && d < -kCostTol) eligible = true;
                if (at_upper_[static_cast<std::size_t>(j)] && d > kCostTol) eligible = true;
                if (!eligible) continue;
                if (bland) {
                    enter = j;
                    break;
                }
                if (std::abs(d) > best + 1e-15) {
                    best = std::abs(d);
                    enter = j;
                }
            }
            if (enter < 0) {
                // Verify the claimed optimum against the true columns; a
                // drifted inverse gets one reinversion retry.
                refresh_xb();
                if (basis_residual() > 1e-7 && repairs++ < 3) {
                    if (!reinvert()) {
                        status_ = Status::Failed;
                        return iters;
                    }
                    continue;
                }
                status_ = Status::Optimal;
                return iters;
            }

            double sigma = at_upper_[static_cast<std::size_t>(enter)] ? -1.0 : 1.0;
            ftran(enter, w);

            // Two-pass (Harris style) ratio test: find the tightest ratio
            // with a small feasibility slack, then take the largest pivot
            // among the blockers within it. Large pivots keep the explicit
            // inverse healthy across degenerate sequences.
            double span = work_ub(enter) - work_lb(enter);
            double t_limit = span >= kUnbounded ? std::numeric_limits<double>::infinity() : span;
            double t_pass1 = t_limit;
            for (int k = 0; k < m_; ++k) {
                double phi = sigma * w[static_cast<std::size_t>(k)];
                int bj = basis_[static_cast<std::size_t>(k)];
                double xv = xb_[static_cast<std::size_t>(k)];
                if (phi > kPivotTol) {
                    double lo = work_lb(bj);
                    if (lo <= -kUnbounded) continue;
                    t_pass1 = std::min(t_pass1, std::max(0.0, (xv - lo + kFeasTol) / phi));
                } else if (phi < -kPivotTol) {
                    double hi = work_ub(bj);
                    if (hi >= kUnbounded) continue;
                    t_pass1 = std::min(t_pass1, std::max(0.0, (hi - xv + kFeasTol) / (-phi)));
                }
            }
            if (std::isinf(t_pass1)) {
                status_ = Status::Unbounded;
                return iters;
            }
            int leave = -1;          // basis position
            double leave_dir = 0.0;  // +1 leaves at lb, -1 leaves at ub
            double t_best = t_limit;
            double best_pivot = 0.0;
            for (int k = 0; k < m_; ++k) {
                double phi = sigma * w[static_cast<std::size_t>(k)];
                int bj = basis_[static_cast<std::size_t>(k)];
                double xv = xb_[static_cast<std::size_t>(k)];
                double t, dir;
                if (phi > kPivotTol) {
                    double lo = work_lb(bj);
                    if (lo <= -kUnbounded) continue;
                    t = std::max(0.0, (xv - lo) / phi);
                    dir = +1.0;
                } else if (phi < -kPivotTol) {
                    double hi = work_ub(bj);
                    if (hi >= kUnbounded) continue;
                    t = std::max(0.0, (hi - xv) / (-phi));
                    dir = -1.0;
                } else {
                    continue;
                }
                if (t > t_pass1) continue;
                double mag = std::abs(phi);
                bool better;
                if (bland)
                    better = leave < 0 || (t < t_best - 1e-12) ||
                             (t <= t_best + 1e-12 &&
                              bj < basis_[static_cast<std::size_t>(leave)]);
                else
                    better = leave < 0 || mag > best_pivot;
                if (better) {
                    t_best = t;
                    leave = k;
                    leave_dir = dir;
                    best_pivot = mag;
                }
            }
            if (leave < 0) t_best = t_limit;  // bound flip
            if (std::isinf(t_best)) {
                status_ = Status::Unbounded;
                return iters;
            }

            ++iters;
            if (t_best <= 1e-12) {
                if (++stall > 200) bland = true;
            } else {
                stall = 0;
                bland = force_bland_;
            }

            for (int k = 0; k < m_; ++k)
                xb_[static_cast<std::size_t>(k)] -= t_best * sigma * w[static_cast<std::size_t>(k)];

            if (leave < 0) {
                // Bound flip: entering crosses to its other bound.
                at_upper_[static_cast<std::size_t>(enter)] ^= 1;
                continue;
            }

            int out = basis_[static_cast<std::size_t>(leave)];
            double enter_val =
                (at_upper_[static_cast<std::size_t>(enter)] ? work_ub(enter) : work_lb(enter)) +
                sigma * t_best;
            // Pivot Binv.
            double piv = w[static_cast<std::size_t>(leave)];
            double* prow = &binv_[static_cast<std::size_t>(leave) * m_];
            for (int i = 0; i < m_; ++i) prow[i] /= piv;
            for (int k = 0; k < m_; ++k) {
                if (k == leave) continue;
                double f = w[static_cast<std::size_t>(k)];
                if (f == 0.0) continue;
                double* row = &binv_[static_cast<std::size_t>(k) * m_];
                for (int i = 0; i < m_; ++i) row[i] -= f * prow[i];
            }
            basic_pos_[static_cast<std::size_t>(out)] = -1;
            at_upper_[static_cast<std::size_t>(out)] = leave_dir < 0.0 ? 1 : 0;
            basis_[static_cast<std::size_t>(leave)] = enter;
            basic_pos_[static_cast<std::size_t>(enter)] = leave;
            xb_[static_cast<std::size_t>(leave)] = enter_val;

            int check_every = bland ? 16 : 64;
            if (iters % check_every == 0) {
                refresh_xb();
                if (basis_residual() > 1e-7 && !reinvert()) {
                    status_ = Status::Failed;
                    return iters;
                }
            }
        }
        status_ = Status::IterLimit;
        return iters;
    }

    // Degenerate pivots to remove artificials from the basis after phase 1.
    void drive_out_artificials() {
        std::vector<double> w;
        for (int i = 0; i < m_; ++i) {
            int a = artificial(i);
            int k = basic_pos_[static_cast<std::size_t>(a)];
            if (k < 0) continue;
            int replacement = -1;
            const double* brow = &binv_[static_cast<std::size_t>(k) * m_];
            for (int j = 0; j < ns_ + m_ && replacement < 0; ++j) {
                if (basic_pos_[static_cast<std::size_t>(j)] >= 0) continue;
                double wk = 0.0;
                for_col(j, [&](int r, double v) { wk += v * brow[r]; });
                if (std::abs(wk) > 1e-7) replacement = j;
            }
            if (replacement < 0) continue;  // redundant row; artificial stays at 0
            ftran(replacement, w);
            double piv = w[static_cast<std::size_t>(k)];
            double* prow = &binv_[static_cast<std::size_t>(k) * m_];
            for (int c = 0; c < m_; ++c) prow[c] /= piv;
            for (int r = 0; r < m_; ++r) {
                if (r == k) continue;
                double f = w[static_cast<std::size_t>(r)];
                if (f == 0.0) continue;
                double* row = &binv_[static_cast<std::size_t>(r) * m_];
                for (int c = 0; c < m_; ++c) row[c] -= f * prow[c];
            }
            basic_pos_[static_cast<std::size_t>(a)] = -1;
            at_upper_[static_cast<std::size_t>(a)] = 0;
            basis_[static_cast<std::size_t>(k)] = replacement;
            basic_pos_[static_cast<std::size_t>(replacement)] = k;
            refresh_xb();
        }
    }

    const Problem& p_;
    int m_;
    int ns_;
    int total_ = 0;
    std::vector<double> lb_, ub_, cost_;
    std::vector<double> art_sign_;
    std::vector<int> basis_;        // row -> column
    std::vector<int> basic_pos_;    // column -> row or -1
    std::vector<char> at_upper_;    // nonbasic position
    std::vector<double> xb_;        // basic values
    std::vector<double> binv_;      // dense m x m row-major
    bool needs_phase1_ = false;
    bool phase1_ = false;
    bool force_bland_ = false;
    Status status_ = Status::Failed;
};

} // namespace

namespace {

// Geometric-mean equilibration with scales snapped to powers of two, so the
// scaled coefficients are exact. Brings the wildly mixed units of the model
// (cores, GB, Mbps, watts) into a range the dense inverse tolerates.
struct Scaling {
    std::vector<double> row;  // multiplies each row
    std::vector<double> col;  // multiplies each column (x' = x / col)
};

double pow2_near(double v) {
    if (v <= 0.0 || !std::isfinite(v)) return 1.0;
    int e = 0;
    std::frexp(v, &e);
    return std::ldexp(1.0, e - 1);
}

Scaling equilibrate(const Problem& p) {
    Scaling s;
    s.row.assign(static_cast<std::size_t>(p.n_rows), 1.0);
    s.col.assign(static_cast<std::size_t>(p.n_vars()), 1.0);
    for (int pass = 0; pass < 3; ++pass) {
        std::vector<double> rmin(static_cast<std::size_t>(p.n_rows), 0.0);
        std::vector<double> rmax(static_cast<std::size_t>(p.n_rows), 0.0);
        for (int j = 0; j < p.n_vars(); ++j)
            for (const Entry& e : p.cols[static_cast<std::size_t>(j)]) {
                double a = std::abs(e.value) * s.row[static_cast<std::size_t>(e.row)] *
                           s.col[static_cast<std::size_t>(j)];
                if (a == 0.0) continue;
                auto& lo = rmin[static_cast<std::size_t>(e.row)];
                auto& hi = rmax[static_cast<std::size_t>(e.row)];
                lo = lo == 0.0 ? a : std::min(lo, a);
                hi = std::max(hi, a);
            }
        for (int i = 0; i < p.n_rows; ++i)
            if (rmax[static_cast<std::size_t>(i)] > 0.0)
                s.row[static_cast<std::size_t>(i)] /= pow2_near(std::sqrt(
                    rmin[static_cast<std::size_t>(i)] * rmax[static_cast<std::size_t>(i)]));
        for (int j = 0; j < p.n_vars(); ++j) {
            double cmin = 0.0, cmax = 0.0;
            for (const Entry& e : p.cols[static_cast<std::size_t>(j)]) {
                double a = std::abs(e.value) * s.row[static_cast<std::size_t>(e.row)] *
                           s.col[static_cast<std::size_t>(j)];
                if (a == 0.0) continue;
                cmin = cmin == 0.0 ? a : std::min(cmin, a);
                cmax = std::max(cmax, a);
            }
            if (cmax > 0.0)
                s.col[static_cast<std::size_t>(j)] /= pow2_near(std::sqrt(cmin * cmax));
        }
    }
    return s;
}

} // namespace

Result solve(const Problem& p, int max_iterations) {
    if (p.n_rows == 0) {
        // Pure bound problem: park every variable at its cheaper bound.
        Result res;
        res.status = Status::Optimal;
        res.x.assign(static_cast<std::size_t>(p.n_vars()), 0.0);
        for (int j = 0; j < p.n_vars(); ++j) {
            double c = p.cost[static_cast<std::size_t>(j)];
            double lo = p.lb[static_cast<std::size_t>(j)];
            double hi = p.ub[static_cast<std::size_t>(j)];
            double v;
            if (c > 0.0)
                v = lo;
            else if (c < 0.0)
                v = hi;
            else
                v = lo > -kUnbounded ? lo : (hi < kUnbounded ? hi : 0.0);
            if (v <= -kUnbounded || v >= kUnbounded) {
                res.status = c == 0.0 ? Status::Optimal : Status::Unbounded;
                v = 0.0;
            }
            res.x[static_cast<std::size_t>(j)] = v;
            res.objective += c * v;
        }
        return res;
    }
    // Solve the equilibrated problem, then map the point back.
    Scaling sc = equilibrate(p);
    Problem q = p;
    for (int j = 0; j < p.n_vars(); ++j) {
        double cs = sc.col[static_cast<std::size_t>(j)];
        for (Entry& e : q.cols[static_cast<std::size_t>(j)])
            e.value *= sc.row[static_cast<std::size_t>(e.row)] * cs;
        q.cost[static_cast<std::size_t>(j)] *= cs;
        if (q.lb[static_cast<std::size_t>(j)] > -kUnbounded)
            q.lb[static_cast<std::size_t>(j)] /= cs;
        if (q.ub[static_cast<std::size_t>(j)] < kUnbounded)
            q.ub[static_cast<std::size_t>(j)] /= cs;
    }
    for (int i = 0; i < p.n_rows; ++i)
        q.rhs[static_cast<std::size_t>(i)] *= sc.row[static_cast<std::size_t>(i)];

    Simplex s(q);
    Result res = s.run(max_iterations);
    if (res.status == Status::Failed || res.status == Status::Unbounded) {
        // Conservative retry: Bland's rule from the first pivot.
        Simplex retry(q, /*force_bland=*/true);
        res = retry.run(max_iterations);
        if (res.status == Status::Unbounded) res.status = Status::Failed;
    }
    if (!res.x.empty()) {
        double obj = 0.0;
        for (int j = 0; j < p.n_vars(); ++j) {
            res.x[static_cast<std::size_t>(j)] *= sc.col[static_cast<std::size_t>(j)];
            obj += p.cost[static_cast<std::size_t>(j)] * res.x[static_cast<std::size_t>(j)];
        }
        res.objective = obj;
    }
    return res;
}

} // namespace onsu::lp
