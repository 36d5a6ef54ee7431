#include "faq/optimizer.hpp"

#include <cmath>

#include "faq/error.hpp"

namespace faq {

std::vector<std::pair<VarId, VarId>> PrecedencePoset::covers() const {
  std::vector<std::pair<VarId, VarId>> out;
  for (VarId v : elements)
    for (VarId u : ancestors[v]) {
      bool direct = true;
      for (VarId w : ancestors[v])
        if (w != u && ancestors[w].contains(u)) direct = false;
      if (direct) out.emplace_back(u, v);
    }
  return out;
}

namespace {

// Splits `scope` into connected components, listed by smallest member.
std::vector<VarSet> components(const FAQQuery& query, VarSet scope) {
  const VarSet product = query.product_vars();
  std::vector<VarSet> restricted;
  for (const auto& f : query.factors) {
    VarSet e = VarSet::of(f.vars) & scope;
    if (!e.empty()) restricted.push_back(e);
  }
  if ((product & scope).size() > 0) restricted.push_back(scope);

  std::vector<VarSet> out;
  VarSet left = scope;
  while (!left.empty()) {
    VarSet comp{*left.begin()};
    for (bool grew = true; grew;) {
      grew = false;
      for (VarSet e : restricted)
        if (e.intersects(comp) && !e.subset_of(comp)) {
          comp |= e;
          grew = true;
        }
    }
    out.push_back(comp);
    left -= comp;
  }
  return out;
}

void split(const FAQQuery& query, VarSet scope, VarSet outer, PrecedencePoset& poset) {
  for (VarSet comp : components(query, scope)) {
    for (VarId v : comp) poset.ancestors[v] |= outer;
    // Aliases such as or/max over booleans share an operator and commute.
    const BinaryOp first_op = query.aggregate_of(*comp.begin()).op;
    bool uniform = true;
    for (VarId v : comp) uniform &= query.aggregate_of(v).op == first_op;
    if (uniform) continue;
    const VarId head = *comp.begin();
    VarSet rest = comp;
    rest.erase(head);
    VarSet inner = outer;
    inner.insert(head);
    split(query, rest, inner, poset);
  }
}

}  // namespace

PrecedencePoset build_precedence_poset(const FAQQuery& query) {
  PrecedencePoset poset;
  poset.ancestors.assign(query.num_vars(), VarSet{});
  VarSet bound;
  for (VarId v = 0; v < query.num_vars(); ++v)
    if (!query.variables[v].is_free) {
      poset.elements.push_back(v);
      bound.insert(v);
    }
  split(query, bound, VarSet{}, poset);
  return poset;
}

std::size_t for_each_linear_extension(const PrecedencePoset& poset, std::size_t limit,
                                      const std::function<bool(std::span<const VarId>)>& visit) {
  std::vector<VarId> prefix;
  VarSet placed;
  std::size_t count = 0;
  bool stop = false;
  std::function<void()> rec = [&] {
    if (prefix.size() == poset.elements.size()) {
      ++count;
      if (!visit(prefix) || count >= limit) stop = true;
      return;
    }
    for (VarId v : poset.elements) {
      if (stop) return;
      if (placed.contains(v) || !poset.ancestors[v].subset_of(placed)) continue;
      prefix.push_back(v);
      placed.insert(v);
      rec();
      placed.erase(v);
      prefix.pop_back();
    }
  };
  if (limit > 0) rec();
  return count;
}

std::vector<VariableOrdering> enumerate_orderings(const FAQQuery& query, const PrecedencePoset& poset,
                                                  std::size_t limit) {
  std::vector<VarId> free = query.free_vars().to_vector();
  std::vector<VariableOrdering> out;
  for_each_linear_extension(poset, limit, [&](std::span<const VarId> ext) {
    VariableOrdering sigma{free, free.size()};
    sigma.order.insert(sigma.order.end(), ext.begin(), ext.end());
    out.push_back(std::move(sigma));
    return true;
  });
  return out;
}

Hypergraph cost_hypergraph(const FAQQuery& query, const std::optional<std::vector<mpq_class>>& log_sizes) {
  Hypergraph h = query.hypergraph();
  if (log_sizes) {
    if (log_sizes->size() != query.factors.size()) throw UserError("one log size per factor expected");
    for (EdgeId id = 0; id < log_sizes->size(); ++id) h.set_log_size(id, (*log_sizes)[id]);
  }
  return h;
}

std::vector<mpq_class> factor_log_sizes(const FAQInstance& instance) {
  std::vector<mpq_class> out;
  for (const auto& f : instance.factors)
    out.emplace_back(f.size() < 2 ? 1.0 : std::log2(static_cast<double>(f.size())));
  return out;
}

OptimizedOrdering best_of(const FAQQuery& query, const std::vector<VariableOrdering>& candidates,
                          const OptimizerOptions& options) {
  if (candidates.empty()) throw InternalError("no candidate orderings");
  const Hypergraph h = cost_hypergraph(query, options.log_sizes);
  const VarSet product = query.product_vars();
  std::vector<mpq_class> widths(candidates.size());
#pragma omp parallel for schedule(dynamic) if (options.parallel)
  for (std::size_t i = 0; i < candidates.size(); ++i)
    widths[i] = elimination_width(h, candidates[i].order, product, options.projections).width;

  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i)
    if (widths[i] < widths[best] || (widths[i] == widths[best] && candidates[i].order < candidates[best].order))
      best = i;
  OptimizedOrdering out;
  out.sigma = candidates[best];
  out.profile = elimination_width(h, out.sigma.order, product, options.projections);
  out.width = out.profile.width;
  out.candidates = candidates.size();
  return out;
}

OptimizedOrdering greedy_ordering(const FAQQuery& query, const OptimizerOptions& options) {
  const PrecedencePoset poset = build_precedence_poset(query);
  const Hypergraph h0 = cost_hypergraph(query, options.log_sizes);
  const VarSet product = query.product_vars();
  Hypergraph cur = h0;
  VarSet remaining = VarSet::of(poset.elements);
  std::vector<VarId> tail;  // elimination order, innermost first

  while (!remaining.empty()) {
    std::optional<VarId> pick;
    std::optional<EliminationStep> pick_step;
    mpq_class pick_cost;
    for (VarId v : remaining) {
      bool maximal = true;
      for (VarId u : remaining)
        if (u != v && poset.ancestors[u].contains(v)) maximal = false;
      if (!maximal) continue;
      const auto mode = product.contains(v) ? EliminationMode::product : EliminationMode::semiring;
      auto step = eliminate_step(cur, v, mode, options.projections);
      mpq_class cost = 0;
      if (mode == EliminationMode::semiring && !step.boundary.empty())
        cost = fractional_edge_cover(step.subquery_graph(cur), step.U).objective;
      if (!pick || cost < pick_cost) {
        pick = v;
        pick_cost = cost;
        pick_step = std::move(step);
      }
    }
    if (!pick) throw InternalError("precedence poset has a cycle");
    tail.push_back(*pick);
    remaining.erase(*pick);
    if (options.log_sizes && pick_step->new_edge) pick_step->successor.set_log_size(*pick_step->new_edge, pick_cost);
    cur = std::move(pick_step->successor);
  }

  OptimizedOrdering out;
  out.sigma.order = query.free_vars().to_vector();
  out.sigma.num_free = out.sigma.order.size();
  out.sigma.order.insert(out.sigma.order.end(), tail.rbegin(), tail.rend());
  out.profile = elimination_width(h0, out.sigma.order, product, options.projections);
  out.width = out.profile.width;
  out.candidates = 1;
  return out;
}

OptimizedOrdering optimize_ordering(const FAQQuery& query, const OptimizerOptions& options) {
  query.validate();
  if (options.mode == OptimizerMode::greedy) return greedy_ordering(query, options);
  const PrecedencePoset poset = build_precedence_poset(query);
  auto candidates = enumerate_orderings(query, poset, options.cap + 1);
  if (candidates.size() > options.cap) {
    auto out = greedy_ordering(query, options);
    out.fell_back = true;
    return out;
  }
  return best_of(query, candidates, options);
}

}  // namespace faq
