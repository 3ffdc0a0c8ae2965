#include "olpb/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace olpb {

namespace {

constexpr double kRcTol = 1e-9;    // reduced-cost eligibility
constexpr double kPivTol = 1e-11;  // smallest usable pivot / direction entry
constexpr int kRefreshEvery = 50;  // basis inverse rebuild cadence

struct Simplex {
    // Variables 0..n-1: structurals, bounds [0,1], cost r_j, column a_j.
    // Variables n..n+m-1: slacks, bounds [0,inf), cost 0, column e_i.
    const SampleSet& s;
    const std::vector<double>& b;
    int m, n;
    std::vector<int> basis;        // m variable indices
    std::vector<int> pos_in_basis; // variable -> basis position or -1
    std::vector<char> at_upper;    // nonbasic structurals only
    std::vector<double> binv;      // m*m row-major
    std::vector<double> xb;        // basic values
    int iterations = 0;
    int pivots = 0;

    Simplex(const SampleSet& samples, const std::vector<double>& budget)
        : s(samples), b(budget), m(samples.m), n(static_cast<int>(samples.size())) {
        basis.resize(m);
        pos_in_basis.assign(n + m, -1);
        at_upper.assign(n + m, 0);
        binv.assign(m * m, 0.0);
        xb = b;
        for (int i = 0; i < m; ++i) {
            basis[i] = n + i;
            pos_in_basis[n + i] = i;
            binv[i * m + i] = 1.0;
        }
    }

    double cost(int v) const { return v < n ? s.rewards[v] : 0.0; }

    // w = Binv * column(v)
    void column_times_binv(int v, std::vector<double>& w) const {
        if (v >= n) {
            const int i = v - n;
            for (int k = 0; k < m; ++k) w[k] = binv[k * m + i];
        } else {
            const double* a = s.row(v);
            for (int k = 0; k < m; ++k) {
                double acc = 0.0;
                for (int i = 0; i < m; ++i) acc += binv[k * m + i] * a[i];
                w[k] = acc;
            }
        }
    }

    void compute_duals(std::vector<double>& y) const {
        y.assign(m, 0.0);
        for (int k = 0; k < m; ++k) {
            const double ck = cost(basis[k]);
            if (ck == 0.0) continue;
            for (int i = 0; i < m; ++i) y[i] += ck * binv[k * m + i];
        }
    }

    double reduced_cost(int v, const std::vector<double>& y) const {
        if (v >= n) return -y[v - n];
        const double* a = s.row(v);
        double ya = 0.0;
        for (int i = 0; i < m; ++i) ya += y[i] * a[i];
        return s.rewards[v] - ya;
    }

    // Gauss-Jordan inverse of the current basis matrix; throws on singularity.
    void refresh_inverse() {
        std::vector<double> aug(m * 2 * m, 0.0);
        const int w = 2 * m;
        for (int k = 0; k < m; ++k) {
            const int v = basis[k];
            if (v >= n) {
                aug[(v - n) * w + k] = 1.0;
            } else {
                const double* a = s.row(v);
                for (int i = 0; i < m; ++i) aug[i * w + k] = a[i];
            }
            aug[k * w + m + k] = 0.0;
        }
        for (int i = 0; i < m; ++i) aug[i * w + m + i] = 1.0;
        for (int col = 0; col < m; ++col) {
            int piv = col;
            for (int r = col + 1; r < m; ++r)
                if (std::fabs(aug[r * w + col]) > std::fabs(aug[piv * w + col])) piv = r;
            if (std::fabs(aug[piv * w + col]) < 1e-13)
                throw SolverFailure(diag("singular basis during inverse refresh"));
            if (piv != col)
                for (int j = 0; j < w; ++j) std::swap(aug[piv * w + j], aug[col * w + j]);
            const double inv = 1.0 / aug[col * w + col];
            for (int j = 0; j < w; ++j) aug[col * w + j] *= inv;
            for (int r = 0; r < m; ++r) {
                if (r == col) continue;
                const double f = aug[r * w + col];
                if (f == 0.0) continue;
                for (int j = 0; j < w; ++j) aug[r * w + j] -= f * aug[col * w + j];
            }
        }
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) binv[i * m + j] = aug[i * w + m + j];
        recompute_basics();
    }

    void recompute_basics() {
        std::vector<double> rhs = b;
        for (int j = 0; j < n; ++j) {
            if (pos_in_basis[j] >= 0 || !at_upper[j]) continue;
            const double* a = s.row(j);
            for (int i = 0; i < m; ++i) rhs[i] -= a[i];
        }
        for (int k = 0; k < m; ++k) {
            double acc = 0.0;
            for (int i = 0; i < m; ++i) acc += binv[k * m + i] * rhs[i];
            xb[k] = acc;
        }
    }

    std::string diag(const std::string& msg) const {
        std::ostringstream os;
        os << "solve_lp_bounded: " << msg << " (n=" << n << ", m=" << m
           << ", iterations=" << iterations << ", pivots=" << pivots << ")";
        return os.str();
    }

    // Duals from a fresh solve of B^T y = c_B on the original basis columns.
    // One division per pivot keeps the m=1 dual bit-identical to the sorted-
    // ratio solver's breakpoint r_q/a_q.
    bool duals_from_basis(std::vector<double>& y) const {
        const int w = m + 1;
        std::vector<double> aug(m * w);
        for (int k = 0; k < m; ++k) {
            const int v = basis[k];
            for (int i = 0; i < m; ++i)
                aug[k * w + i] = v >= n ? (i == v - n ? 1.0 : 0.0) : s.row(v)[i];
            aug[k * w + m] = cost(v);
        }
        for (int col = 0; col < m; ++col) {
            int piv = col;
            for (int r = col + 1; r < m; ++r)
                if (std::fabs(aug[r * w + col]) > std::fabs(aug[piv * w + col])) piv = r;
            if (std::fabs(aug[piv * w + col]) < 1e-13) return false;
            if (piv != col)
                for (int c = 0; c <= m; ++c) std::swap(aug[piv * w + c], aug[col * w + c]);
            const double pivot = aug[col * w + col];
            for (int c = 0; c <= m; ++c) aug[col * w + c] /= pivot;
            for (int r = 0; r < m; ++r) {
                if (r == col) continue;
                const double f = aug[r * w + col];
                if (f == 0.0) continue;
                for (int c = 0; c <= m; ++c) aug[r * w + c] -= f * aug[col * w + c];
            }
        }
        for (int c = 0; c < m; ++c) y[c] = aug[c * w + m];
        return true;
    }

    struct Ratio {
        double t = kInf;
        int leave_pos = -1; // -1: blocked by the entering variable's own bound
        bool leave_at_upper = false;
    };

    Ratio ratio_test(int enter, int dir, const std::vector<double>& w, bool bland) const {
        Ratio res;
        res.t = enter < n ? 1.0 : kInf;
        for (int k = 0; k < m; ++k) {
            const double delta = dir * w[k];
            const int vb = basis[k];
            double ratio;
            bool hits_upper;
            if (delta > kPivTol) {
                ratio = xb[k] / delta; // basic drops to its lower bound 0
                hits_upper = false;
            } else if (delta < -kPivTol && vb < n) {
                ratio = (1.0 - xb[k]) / (-delta); // structural basic reaches 1
                hits_upper = true;
            } else {
                continue;
            }
            if (ratio < 0.0) ratio = 0.0;
            const double tie = res.t == kInf ? 0.0 : 1e-12 * (1.0 + res.t);
            bool better = ratio < res.t - tie;
            if (!better && ratio < res.t + tie && res.leave_pos >= 0) {
                // tie-break: smallest variable index under Bland, largest
                // pivot magnitude otherwise
                better = bland ? vb < basis[res.leave_pos]
                               : std::fabs(w[k]) > std::fabs(w[res.leave_pos]);
            }
            if (better) {
                res.t = ratio;
                res.leave_pos = k;
                res.leave_at_upper = hits_upper;
            }
        }
        return res;
    }

    void apply_flip(int enter, int dir, const std::vector<double>& w, double t) {
        for (int k = 0; k < m; ++k) xb[k] -= t * dir * w[k];
        at_upper[enter] ^= 1;
    }

    void apply_pivot(int enter, int dir, const std::vector<double>& w, const Ratio& r) {
        const int leave_var = basis[r.leave_pos];
        for (int k = 0; k < m; ++k)
            if (k != r.leave_pos) xb[k] -= r.t * dir * w[k];
        const double enter_from = (enter < n && at_upper[enter]) ? 1.0 : 0.0;
        xb[r.leave_pos] = enter_from + dir * r.t;
        basis[r.leave_pos] = enter;
        pos_in_basis[enter] = r.leave_pos;
        pos_in_basis[leave_var] = -1;
        at_upper[enter] = 0;
        at_upper[leave_var] = r.leave_at_upper ? 1 : 0;

        const double piv = w[r.leave_pos];
        if (std::fabs(piv) < kPivTol)
            throw SolverFailure(diag("vanishing pivot element"));
        for (int k = 0; k < m; ++k) {
            if (k == r.leave_pos) continue;
            const double f = w[k] / piv;
            if (f == 0.0) continue;
            for (int i = 0; i < m; ++i) binv[k * m + i] -= f * binv[r.leave_pos * m + i];
        }
        for (int i = 0; i < m; ++i) binv[r.leave_pos * m + i] /= piv;
        if (++pivots % kRefreshEvery == 0) refresh_inverse();
    }

    // Dantzig pricing over a partial candidate list (full scans only on
    // refills); falls back to Bland's rule after a long degenerate streak so
    // cycling is impossible. Candidates are re-priced when popped, so stale
    // entries are dropped rather than acted on.
    void run() {
        const long max_iter = 400L * (n + m) + 20000;
        const std::size_t cand_cap = 64;
        std::vector<double> y(m), w(m);
        compute_duals(y);
        bool bland = false;
        long degenerate_streak = 0;
        std::vector<std::pair<double, int>> cands; // (violation, column), ascending

        while (true) {
            if (++iterations > max_iter)
                throw SolverFailure(diag("iteration limit exceeded"));
            int enter = -1, dir = 0;
            if (bland) {
                for (int v = 0; v < n + m && enter < 0; ++v) {
                    if (pos_in_basis[v] >= 0) continue;
                    const double rc = reduced_cost(v, y);
                    if (!at_upper[v] && rc > kRcTol) {
                        enter = v;
                        dir = +1;
                    } else if (at_upper[v] && rc < -kRcTol) {
                        enter = v;
                        dir = -1;
                    }
                }
                if (enter < 0) break;
            } else {
                while (!cands.empty() && enter < 0) {
                    const int v = cands.back().second;
                    cands.pop_back();
                    if (pos_in_basis[v] >= 0) continue;
                    const double rc = reduced_cost(v, y);
                    if (!at_upper[v] && rc > kRcTol) {
                        enter = v;
                        dir = +1;
                    } else if (at_upper[v] && rc < -kRcTol) {
                        enter = v;
                        dir = -1;
                    }
                }
                if (enter < 0) {
                    for (int v = 0; v < n + m; ++v) {
                        if (pos_in_basis[v] >= 0) continue;
                        const double rc = reduced_cost(v, y);
                        const double viol = !at_upper[v] && rc > kRcTol
                                                ? rc
                                                : (at_upper[v] && rc < -kRcTol ? -rc : 0.0);
                        if (viol > 0.0) cands.emplace_back(viol, v);
                    }
                    if (cands.empty()) break; // optimal
                    std::sort(cands.begin(), cands.end());
                    if (cands.size() > cand_cap)
                        cands.erase(cands.begin(), cands.end() - cand_cap);
                    continue;
                }
            }

            column_times_binv(enter, w);
            const Ratio r = ratio_test(enter, dir, w, bland);
            if (r.t == kInf) throw SolverFailure(diag("unbounded direction"));
            if (r.leave_pos < 0) {
                apply_flip(enter, dir, w, r.t);
            } else {
                apply_pivot(enter, dir, w, r);
                compute_duals(y);
            }
            if (r.t <= kPivTol) {
                if (++degenerate_streak > 500) bland = true;
            } else {
                degenerate_streak = 0;
                bland = false;
            }
        }
    }

    LpSolution extract() {
        LpSolution out;
        out.primal_values.assign(n, 0.0);
        for (int j = 0; j < n; ++j)
            if (at_upper[j] && pos_in_basis[j] < 0) out.primal_values[j] = 1.0;
        for (int k = 0; k < m; ++k) {
            const int v = basis[k];
            if (v < n) out.primal_values[v] = xb[k];
        }
        double bnorm = 0.0;
        for (int i = 0; i < m; ++i) bnorm = std::max(bnorm, std::fabs(b[i]));
        for (int j = 0; j < n; ++j) {
            double& x = out.primal_values[j];
            if (x < 0.0) {
                if (x < -1e-7 * (1.0 + bnorm)) throw SolverFailure(diag("primal below bound"));
                x = 0.0;
            } else if (x > 1.0) {
                if (x > 1.0 + 1e-7 * (1.0 + bnorm)) throw SolverFailure(diag("primal above bound"));
                x = 1.0;
            }
            if (x > 1e-9 && x < 1.0 - 1e-9) ++out.fractional_count;
        }
        std::vector<double> used(m, 0.0);
        double value = 0.0;
        for (int j = 0; j < n; ++j) {
            const double x = out.primal_values[j];
            if (x == 0.0) continue;
            value += s.rewards[j] * x;
            const double* a = s.row(j);
            for (int i = 0; i < m; ++i) used[i] += a[i] * x;
        }
        for (int i = 0; i < m; ++i)
            if (used[i] > b[i] + 1e-9 * (1.0 + bnorm))
                throw SolverFailure(diag("feasibility lost beyond tolerance"));
        out.optimal_value = value;
        out.dual_prices.assign(m, 0.0);
        if (!duals_from_basis(out.dual_prices)) compute_duals(out.dual_prices);
        for (double& yi : out.dual_prices) {
            if (yi < 0.0) {
                if (yi < -1e-7) throw SolverFailure(diag("negative dual at optimum"));
                yi = 0.0;
            }
        }
        out.iterations = iterations;
        out.pivots = pivots;
        return out;
    }
};

} // namespace

LpSolution solve_lp_bounded(const SampleSet& samples, const std::vector<double>& budget) {
    if (static_cast<int>(budget.size()) != samples.m)
        throw std::invalid_argument("solve_lp_bounded: budget dimension mismatch");
    for (double bi : budget)
        if (bi < 0.0) throw std::invalid_argument("solve_lp_bounded: budget must be nonnegative");
    if (samples.empty()) {
        LpSolution out;
        out.dual_prices.assign(samples.m, 0.0);
        return out;
    }
    Simplex sx(samples, budget);
    sx.run();
    return sx.extract();
}

} // namespace olpb
