#pragma once

#include <cstddef>
#include <vector>

#include <gmpxx.h>

namespace faq {

/// A covering LP over exact rationals:
///
///   minimize   sum_j cost[j] * x[j]
///   subject to sum_{j : i in sets[j]} x[j] >= 1   for every element i
///              x >= 0
///
/// Elements are 0..num_elements-1; costs must be nonnegative.
struct CoveringLp {
  std::size_t num_elements = 0;
  std::vector<std::vector<std::size_t>> sets;
  std::vector<mpq_class> cost;
};

struct CoveringSolution {
  std::vector<mpq_class> x;
  mpq_class objective;
  std::size_t pivots = 0;
};

/// Solves the LP with a dense-tableau simplex on its packing dual (which
/// starts feasible at the slack basis), pivoting by Bland's rule. The primal
/// optimum is read off the dual's final reduced costs. Deterministic.
/// Throws UserError if some element lies in no set (primal infeasible).
CoveringSolution solve_covering_lp(const CoveringLp& lp);

}  // namespace faq
