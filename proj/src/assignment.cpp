#include "ktaxi/assignment.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "ktaxi/tree.hpp"

namespace ktaxi {
namespace {

void check_square(const CostMatrix& c) {
  for (const auto& row : c) {
    if (row.size() != c.size()) throw Error("assignment cost matrix is not square");
  }
}

}  // namespace

Assignment min_cost_assignment(const CostMatrix& cost) {
  check_square(cost);
  const int n = static_cast<int>(cost.size());
  Assignment out;
  out.row_to_col.assign(n, -1);
  if (n == 0) return out;
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  // 1-based potentials; p[j] = row matched to column j.
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<std::int64_t> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      int i0 = p[j0], j1 = 0;
      std::int64_t delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        std::int64_t cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
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
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  for (int j = 1; j <= n; ++j) out.row_to_col[p[j] - 1] = j - 1;
  for (int i = 0; i < n; ++i) out.cost += cost[i][out.row_to_col[i]];
  return out;
}

Assignment exhaustive_assignment(const CostMatrix& cost) {
  check_square(cost);
  const int n = static_cast<int>(cost.size());
  if (n > 9) throw Error("exhaustive assignment limited to 9 rows");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Assignment best;
  best.cost = std::numeric_limits<std::int64_t>::max();
  do {
    std::int64_t c = 0;
    for (int i = 0; i < n; ++i) c += cost[i][perm[i]];
    if (c < best.cost) {
      best.cost = c;
      best.row_to_col = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace ktaxi
