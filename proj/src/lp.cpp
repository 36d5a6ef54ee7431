#include "faq/lp.hpp"

#include <string>

#include "faq/error.hpp"

namespace faq {

// Dual:  maximize sum_i y_i  s.t.  sum_{i in sets[j]} y_i <= cost[j],  y >= 0.
// Tableau rows are the m set-constraints with slack s_j; columns are
// y_0..y_{n-1}, s_0..s_{m-1}. Row 0 of `obj` holds reduced costs.
CoveringSolution solve_covering_lp(const CoveringLp& lp) {
  const std::size_t n = lp.num_elements;
  const std::size_t m = lp.sets.size();
  if (lp.cost.size() != m) throw UserError("covering LP: cost vector size mismatch");

  std::vector<bool> covered(n, false);
  for (std::size_t j = 0; j < m; ++j) {
    if (lp.cost[j] < 0) throw UserError("covering LP: negative cost");
    for (std::size_t i : lp.sets[j]) {
      if (i >= n) throw UserError("covering LP: element index out of range");
      covered[i] = true;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!covered[i]) throw UserError("covering LP infeasible: element " + std::to_string(i) + " is uncovered");

  const std::size_t cols = n + m;
  std::vector<std::vector<mpq_class>> a(m, std::vector<mpq_class>(cols, 0));
  std::vector<mpq_class> rhs(lp.cost);
  std::vector<std::size_t> basis(m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i : lp.sets[j]) a[j][i] = 1;
    a[j][n + j] = 1;
    basis[j] = n + j;
  }
  std::vector<mpq_class> reduced(cols, 0);
  for (std::size_t i = 0; i < n; ++i) reduced[i] = -1;
  mpq_class z = 0;

  CoveringSolution sol;
  while (true) {
    // Bland: smallest-index improving column.
    std::size_t enter = cols;
    for (std::size_t c = 0; c < cols; ++c)
      if (reduced[c] < 0) {
        enter = c;
        break;
      }
    if (enter == cols) break;

    std::size_t leave = m;
    mpq_class best_ratio;
    for (std::size_t r = 0; r < m; ++r) {
      if (a[r][enter] <= 0) continue;
      mpq_class ratio = rhs[r] / a[r][enter];
      if (leave == m || ratio < best_ratio || (ratio == best_ratio && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    // Every y_i appears in some constraint with coefficient 1, so the dual
    // is bounded once coverage holds.
    if (leave == m) throw InternalError("covering LP dual unbounded despite coverage");

    const mpq_class pivot = a[leave][enter];
    for (auto& v : a[leave]) v /= pivot;
    rhs[leave] /= pivot;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == leave || a[r][enter] == 0) continue;
      const mpq_class f = a[r][enter];
      for (std::size_t c = 0; c < cols; ++c) a[r][c] -= f * a[leave][c];
      rhs[r] -= f * rhs[leave];
    }
    const mpq_class f = reduced[enter];
    for (std::size_t c = 0; c < cols; ++c) reduced[c] -= f * a[leave][c];
    z -= f * rhs[leave];
    basis[leave] = enter;
    ++sol.pivots;
  }

  sol.x.resize(m);
  for (std::size_t j = 0; j < m; ++j) sol.x[j] = reduced[n + j];
  sol.objective = z;
  return sol;
}

}  // namespace faq
