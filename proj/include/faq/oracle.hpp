#pragma once

#include <cstdint>

#include "faq/factor.hpp"
#include "faq/query.hpp"

namespace faq {

struct OracleOptions {
  bool parallel = true;
  std::uint64_t max_assignments = 10'000'000;
};

/// Number of full assignments the oracle would visit (saturates at 2^64-1).
std::uint64_t oracle_assignment_count(const FAQInstance& instance);

/// Literal evaluation of the query by enumerating every assignment: each
/// variable ranges over all codes of its dictionary, the nested aggregates
/// are folded innermost first, and absent rows count as 0. Uses no joins,
/// projections, or orderings. Refuses (UserError) above max_assignments.
Factor brute_force_eval(const FAQInstance& instance, OracleOptions options = {});

}  // namespace faq
