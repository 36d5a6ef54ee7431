#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "faq/query.hpp"

namespace faq {

/// Precedence constraints among bound variables: `u` precedes `v` when u
/// must stay outside v (earlier in the ordering, so eliminated later). The
/// free variables implicitly precede everything.
struct PrecedencePoset {
  std::vector<VarId> elements;   // bound variables in query order
  std::vector<VarSet> ancestors;  // per variable id; transitively closed

  bool precedes(VarId u, VarId v) const { return ancestors.at(v).contains(u); }
  /// Hasse diagram edges (u, v): u precedes v with nothing in between.
  std::vector<std::pair<VarId, VarId>> covers() const;
};

/// Sound reconstruction of the expression-tree poset. Bound variables are
/// split into components of the hypergraph restricted to unconditioned
/// variables (free variables start conditioned; a product-aggregate variable
/// is adjacent to every variable of its scope). Components are mutually
/// incomparable. A component whose variables share one aggregate operator
/// is an antichain; otherwise its first variable precedes the rest, is
/// conditioned, and the rest are split again.
PrecedencePoset build_precedence_poset(const FAQQuery& query);

/// Calls `visit` with each linear extension of the poset in lexicographic
/// order of variable ids, stopping after `limit` extensions or when visit
/// returns false. Returns the number visited.
std::size_t for_each_linear_extension(const PrecedencePoset& poset, std::size_t limit,
                                      const std::function<bool(std::span<const VarId>)>& visit);

/// Full orderings (free prefix in query order, then a linear extension).
std::vector<VariableOrdering> enumerate_orderings(const FAQQuery& query, const PrecedencePoset& poset,
                                                  std::size_t limit);

enum class OptimizerMode { exact, greedy };

struct OptimizerOptions {
  OptimizerMode mode = OptimizerMode::greedy;
  std::size_t cap = 10'000;
  bool parallel = true;
  ProjectionPolicy projections = ProjectionPolicy::when_joining;
  /// Per-factor log2 sizes for a data-aware cost; uniform N when absent.
  std::optional<std::vector<mpq_class>> log_sizes;
};

struct OptimizedOrdering {
  VariableOrdering sigma;
  mpq_class width;
  WidthProfile profile;
  std::size_t candidates = 0;  // orderings evaluated (exact mode)
  bool fell_back = false;      // exact mode exceeded the cap, greedy used
};

/// Query hypergraph, with per-edge log sizes when supplied.
Hypergraph cost_hypergraph(const FAQQuery& query, const std::optional<std::vector<mpq_class>>& log_sizes);

/// log2 of each factor's size, as exact rationals of the double estimate
/// (sizes below 2 count as 1).
std::vector<mpq_class> factor_log_sizes(const FAQInstance& instance);

OptimizedOrdering optimize_ordering(const FAQQuery& query, const OptimizerOptions& options = {});

/// The exact search over `candidates`, serially or with OpenMP. Both return
/// the minimum by (width, ordering); exposed for benchmarking.
OptimizedOrdering best_of(const FAQQuery& query, const std::vector<VariableOrdering>& candidates,
                          const OptimizerOptions& options);

OptimizedOrdering greedy_ordering(const FAQQuery& query, const OptimizerOptions& options = {});

}  // namespace faq
