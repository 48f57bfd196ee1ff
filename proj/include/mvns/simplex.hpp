#pragma once

#include <utility>
#include <vector>

namespace mvns::lp {

// Sparse-column LP in standard equality form:
//   minimize  obj . x   subject to  A x = rhs,  x >= 0.
// Geared to problems with few rows and many columns; the solver keeps a
// dense basis inverse and prices all columns each iteration.
struct Problem {
    int rows = 0;
    std::vector<std::vector<std::pair<int, double>>> cols;  // (row, value)
    std::vector<double> obj;
    std::vector<double> rhs;

    int add_column(double cost, std::vector<std::pair<int, double>> entries) {
        cols.push_back(std::move(entries));
        obj.push_back(cost);
        return static_cast<int>(cols.size()) - 1;
    }
};

enum class Status { optimal, infeasible, unbounded, stalled };

struct Result {
    Status status = Status::stalled;
    double value = 0.0;
    std::vector<double> x;  // primal solution per column
};

// Two-phase revised simplex. Dantzig pricing with a Bland fallback when
// degenerate cycling is suspected.
Result solve(const Problem& p);

} // namespace mvns::lp
