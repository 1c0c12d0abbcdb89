#include "dht/assignment.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "dht/error.hpp"

namespace dht {

namespace {

// Shortest augmenting path form with row/column potentials; n <= m.
// a(i, j) is the cost of row i, column j (0-based).
template <typename CostFn>
std::vector<int> hungarian(int n, int m, CostFn a) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(m) + 1, 0);  // p[j]: row matched to column j
  std::vector<int> way(static_cast<std::size_t>(m) + 1, 0);
  std::vector<double> minv(static_cast<std::size_t>(m) + 1);
  std::vector<char> used(static_cast<std::size_t>(m) + 1);

  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

std::vector<int> solve_min_cost_assignment(std::span<const double> cost, int rows, int cols) {
  if (rows < 0 || cols < 0 || cost.size() != static_cast<std::size_t>(rows) * cols) {
    throw InvalidInput("assignment cost matrix does not match " + std::to_string(rows) + "x" +
                       std::to_string(cols));
  }
  if (rows == 0 || cols == 0) return std::vector<int>(static_cast<std::size_t>(rows), -1);
  if (rows <= cols) {
    return hungarian(rows, cols, [&](int i, int j) { return cost[static_cast<std::size_t>(i) * cols + j]; });
  }
  const auto col_to_row =
      hungarian(cols, rows, [&](int i, int j) { return cost[static_cast<std::size_t>(j) * cols + i]; });
  std::vector<int> row_to_col(static_cast<std::size_t>(rows), -1);
  for (int c = 0; c < cols; ++c) row_to_col[static_cast<std::size_t>(col_to_row[c])] = c;
  return row_to_col;
}

}  // namespace dht
