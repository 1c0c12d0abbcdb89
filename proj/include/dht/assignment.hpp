#pragma once

#include <span>
#include <vector>

namespace dht {

// Kuhn-Munkres (Hungarian) minimum-cost assignment on a rows x cols cost
// matrix stored row-major. Every row is assigned when rows <= cols,
// otherwise every column. Returns the column of each row, or -1 for an
// unassigned row. O(min^2 * max).
std::vector<int> solve_min_cost_assignment(std::span<const double> cost, int rows, int cols);

}  // namespace dht
