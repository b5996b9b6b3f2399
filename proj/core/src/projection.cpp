#include "matchfame/projection.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

namespace matchfame {

PartialPermutation project_partial(const SparseNonnegMatrix& a, double theta) {
  if (!(theta >= 0.0 && theta < 1.0)) {
    throw std::invalid_argument("project_partial: theta must be in [0, 1)");
  }
  std::vector<WeightedEntry> order(a.entries().begin(), a.entries().end());
  std::sort(order.begin(), order.end(),
            [](const WeightedEntry& x, const WeightedEntry& y) {
              if (x.value != y.value) return x.value > y.value;
              if (x.row != y.row) return x.row < y.row;
              return x.col < y.col;
            });
  std::vector<char> row_used(static_cast<std::size_t>(a.rows()), 0);
  std::vector<char> col_used(static_cast<std::size_t>(a.cols()), 0);
  std::vector<Match> accepted;
  for (const WeightedEntry& e : order) {
    if (e.value <= theta) break;
    if (row_used[e.row] || col_used[e.col]) continue;
    row_used[e.row] = 1;
    col_used[e.col] = 1;
    accepted.push_back({e.row, e.col});
  }
  return PartialPermutation::FromEntries(a.rows(), a.cols(), std::move(accepted));
}

PartialPermutation hungarian_project(const SparseNonnegMatrix& a) {
  if (a.rows() != a.cols()) {
    throw DataError("hungarian_project: input must be square");
  }
  const int n = a.rows();
  if (n == 0) return PartialPermutation(0, 0);

  // Minimize cost = -value with the potentials formulation (1-based arrays,
  // column 0 is a sentinel).
  std::vector<double> cost(static_cast<std::size_t>(n) * n, 0.0);
  for (const WeightedEntry& e : a.entries()) {
    cost[static_cast<std::size_t>(e.row) * n + e.col] = -e.value;
  }
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match_of_col(n + 1, 0), way(n + 1, 0);
  for (int row = 1; row <= n; ++row) {
    match_of_col[0] = row;
    int col0 = 0;
    std::vector<double> min_slack(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[col0] = 1;
      const int r0 = match_of_col[col0];
      double delta = inf;
      int col1 = 0;
      for (int col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const double cur =
            cost[static_cast<std::size_t>(r0 - 1) * n + (col - 1)] - u[r0] - v[col];
        if (cur < min_slack[col]) {
          min_slack[col] = cur;
          way[col] = col0;
        }
        if (min_slack[col] < delta) {
          delta = min_slack[col];
          col1 = col;
        }
      }
      for (int col = 0; col <= n; ++col) {
        if (used[col]) {
          u[match_of_col[col]] += delta;
          v[col] -= delta;
        } else {
          min_slack[col] -= delta;
        }
      }
      col0 = col1;
    } while (match_of_col[col0] != 0);
    do {
      const int col1 = way[col0];
      match_of_col[col0] = match_of_col[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<Match> entries;
  entries.reserve(static_cast<std::size_t>(n));
  for (int col = 1; col <= n; ++col) {
    entries.push_back({match_of_col[col] - 1, col - 1});
  }
  return PartialPermutation::FromEntries(n, n, std::move(entries));
}

}  // namespace matchfame
