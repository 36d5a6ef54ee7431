#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "faq/factor.hpp"

namespace faq {

struct JoinStats {
  std::size_t expanded_bindings = 0;  // partial bindings (trie nodes) produced, all levels
  std::size_t output_rows = 0;
};

struct JoinResult {
  Factor factor;
  JoinStats stats;
};

/// Backtracking worst-case optimal join (leapfrog intersection per variable).
/// The output support is the natural join of the participants' supports and
/// each output value is the product of the participants' values at the
/// projected key. `order` must list each variable of the union of edges
/// exactly once. Scalar participants are multiplied into every row.
JoinResult generic_join(std::span<const Factor* const> factors, std::span<const VarId> order,
                        const SemiringContext& context);

JoinResult generic_join(const std::vector<Factor>& factors, std::span<const VarId> order,
                        const SemiringContext& context);

}  // namespace faq
