#include "mvns/simplex.hpp"

#include <cassert>
#include <cmath>
#include <limits>

namespace mvns::lp {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-10;

struct Tableau {
    int m;
    std::vector<double> binv;      // m x m row-major
    std::vector<int> basis;        // column index per row; artificials are < 0
    std::vector<double> xb;        // current basic values

    explicit Tableau(int rows, const std::vector<double>& rhs_signed) : m(rows) {
        binv.assign(static_cast<size_t>(m) * m, 0.0);
        for (int i = 0; i < m; ++i) binv[static_cast<size_t>(i) * m + i] = 1.0;
        basis.resize(m);
        for (int i = 0; i < m; ++i) basis[i] = -(i + 1);  // artificial i
        xb = rhs_signed;
    }

    // d = binv * col
    std::vector<double> ftran(const std::vector<std::pair<int, double>>& col) const {
        std::vector<double> d(m, 0.0);
        for (const auto& [r, v] : col) {
            for (int i = 0; i < m; ++i) d[i] += binv[static_cast<size_t>(i) * m + r] * v;
        }
        return d;
    }

    void pivot(int row, const std::vector<double>& d, int entering) {
        const double piv = d[row];
        const double inv = 1.0 / piv;
        for (int j = 0; j < m; ++j) binv[static_cast<size_t>(row) * m + j] *= inv;
        xb[row] *= inv;
        for (int i = 0; i < m; ++i) {
            if (i == row) continue;
            const double f = d[i];
            if (f == 0.0) continue;
            for (int j = 0; j < m; ++j)
                binv[static_cast<size_t>(i) * m + j] -=
                    f * binv[static_cast<size_t>(row) * m + j];
            xb[i] -= f * xb[row];
        }
        basis[row] = entering;
    }
};

// One simplex phase. costs[j] applies to structural column j; artificial
// columns carry cost art_cost. Artificials may not re-enter.
Status run_phase(const Problem& p, Tableau& t, const std::vector<double>& costs,
                 double art_cost, int max_iters) {
    const int m = t.m;
    int iters = 0;
    bool bland = false;
    int since_progress = 0;
    while (true) {
        if (++iters > max_iters) return Status::stalled;

        // y = c_B binv
        std::vector<double> y(m, 0.0);
        for (int i = 0; i < m; ++i) {
            const double cb = t.basis[i] >= 0 ? costs[t.basis[i]] : art_cost;
            if (cb == 0.0) continue;
            for (int j = 0; j < m; ++j) y[j] += cb * t.binv[static_cast<size_t>(i) * m + j];
        }

        int entering = -1;
        double best = -kCostTol;
        for (int j = 0; j < static_cast<int>(p.cols.size()); ++j) {
            double red = costs[j];
            for (const auto& [r, v] : p.cols[j]) red -= y[r] * v;
            if (red < -kCostTol) {
                if (bland) {
                    entering = j;
                    break;
                }
                if (red < best) {
                    best = red;
                    entering = j;
                }
            }
        }
        if (entering < 0) return Status::optimal;

        const auto d = t.ftran(p.cols[entering]);
        int leave = -1;
        double min_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            if (d[i] > kPivotTol) {
                const double ratio = t.xb[i] / d[i];
                if (ratio < min_ratio - 1e-12 ||
                    (ratio < min_ratio + 1e-12 && leave >= 0 &&
                     t.basis[i] < t.basis[leave])) {
                    min_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) return Status::unbounded;

        if (min_ratio < 1e-12) {
            if (++since_progress > 2 * m + 50) bland = true;
        } else {
            since_progress = 0;
            bland = false;
        }
        t.pivot(leave, d, entering);
    }
}

} // namespace

Result solve(const Problem& p) {
    assert(p.cols.size() == p.obj.size());
    const int m = p.rows;

    // Sign rows so the artificial start is feasible (rhs >= 0).
    Problem q = p;
    std::vector<double> rhs = p.rhs;
    for (int i = 0; i < m; ++i) {
        if (rhs[i] < 0.0) {
            rhs[i] = -rhs[i];
            for (auto& col : q.cols) {
                for (auto& [r, v] : col) {
                    if (r == i) v = -v;
                }
            }
        }
    }

    Tableau t(m, rhs);
    const int max_iters = 200 * (m + 50) + 20 * static_cast<int>(q.cols.size());

    // Phase 1: minimize artificial mass.
    std::vector<double> zero_costs(q.cols.size(), 0.0);
    Status s = run_phase(q, t, zero_costs, 1.0, max_iters);
    if (s != Status::optimal) return {s == Status::unbounded ? Status::stalled : s, 0.0, {}};
    double art_mass = 0.0;
    for (int i = 0; i < m; ++i) {
        if (t.basis[i] < 0) art_mass += t.xb[i];
    }
    if (art_mass > 1e-7) return {Status::infeasible, 0.0, {}};

    // Phase 2: real objective; artificials may linger basic at level ~0 but
    // are priced out by a prohibitive cost.
    s = run_phase(q, t, q.obj, 1e30, max_iters);
    if (s != Status::optimal) return {s, 0.0, {}};

    Result r;
    r.status = Status::optimal;
    r.x.assign(q.cols.size(), 0.0);
    for (int i = 0; i < m; ++i) {
        if (t.basis[i] >= 0) r.x[t.basis[i]] = t.xb[i];
    }
    double val = 0.0;
    for (size_t j = 0; j < q.cols.size(); ++j) val += q.obj[j] * r.x[j];
    r.value = val;
    return r;
}

} // namespace mvns::lp
