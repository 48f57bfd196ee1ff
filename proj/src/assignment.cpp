#include "mvns/assignment.hpp"

#include <cassert>
#include <limits>

namespace mvns {

// Shortest augmenting path with dual potentials; O(n^3). Standard JV/Hungarian
// scheme: rows are assigned one at a time, each via a Dijkstra sweep over
// columns on reduced costs.
double min_cost_assignment(const std::vector<double>& cost, int n,
                           std::vector<int>* row_to_col) {
    assert(static_cast<int>(cost.size()) == n * n);
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);  // potentials
    std::vector<int> p(n + 1, n);                      // p[col] = assigned row (n = none)
    std::vector<int> way(n + 1, 0);

    for (int i = 0; i < n; ++i) {
        p[n] = i;
        int j0 = n;  // virtual column
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = -1;
            for (int j = 0; j < n; ++j) {
                if (used[j]) continue;
                const double cur = cost[static_cast<size_t>(i0) * n + j] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != n);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != n);
    }

    double total = 0.0;
    if (row_to_col) row_to_col->assign(n, -1);
    for (int j = 0; j < n; ++j) {
        if (p[j] < n) {
            total += cost[static_cast<size_t>(p[j]) * n + j];
            if (row_to_col) (*row_to_col)[p[j]] = j;
        }
    }
    return total;
}

} // namespace mvns
