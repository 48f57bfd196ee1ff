#pragma once

#include <vector>

namespace mvns {

// Exact minimum-cost perfect assignment (Jonker-Volgenant style shortest
// augmenting paths). cost is a dense n x n row-major matrix; returns the
// optimal total cost and fills row_to_col if given.
double min_cost_assignment(const std::vector<double>& cost, int n,
                           std::vector<int>* row_to_col = nullptr);

} // namespace mvns
