#include "faq/engine.hpp"

#include <algorithm>

#include "faq/error.hpp"

namespace faq {

InsideOutEngine::InsideOutEngine(const FAQInstance& instance, EngineOptions options)
    : instance_(instance),
      ctx_(instance.context()),
      options_(options),
      graph_(instance.query.hypergraph()),
      scalar_(ctx_.one()) {
  if (instance.factors.size() != instance.query.factors.size())
    throw InternalError("instance factors do not match the factor declarations");
  for (std::size_t i = 0; i < instance.factors.size(); ++i)
    live_.emplace(static_cast<EdgeId>(i), Live{instance.query.factors[i].name, instance.factors[i]});
  for (const auto& v : instance.query.variables) trace_.var_names.push_back(v.name);
}

std::string InsideOutEngine::fresh_name() { return "psi" + std::to_string(next_name_++); }

std::vector<VarId> InsideOutEngine::join_order(VarSet vars) const { return vars.to_vector(); }

void InsideOutEngine::eliminate_semiring_var(VarId var) {
  const auto& query = instance_.query;
  if (query.variables.at(var).is_free) throw UserError("free variables are never marginalized");
  const Aggregate& agg = query.aggregate_of(var);
  if (!agg.is_semiring) throw UserError("variable '" + query.var_name(var) + "' is under a product aggregate");

  auto step = eliminate_step(graph_, var, EliminationMode::semiring, options_.projections);
  TraceStep rec;
  rec.var = var;
  rec.mode = EliminationMode::semiring;
  rec.aggregate = agg.name;
  rec.U = step.U;

  if (step.boundary.empty()) {
    // The variable occurs in no factor: the aggregate folds |Dom| copies of 1.
    const auto dom = instance_.domain(var);
    if (!dom.is_explicit())
      throw UserError("variable '" + query.var_name(var) + "' occurs in no factor and has no explicit domain");
    Value fold = agg.identity;
    for (std::size_t i = 0; i < dom.values.size(); ++i) fold = agg.op(fold, ctx_.one());
    scalar_ = ctx_.mul(scalar_, fold);
  } else {
    std::vector<Factor> projections;
    projections.reserve(step.subquery.size());
    std::vector<const Factor*> inputs;
    for (const auto& se : step.subquery) {
      const Live& src = live_.at(se.source);
      TraceParticipant p;
      p.factor = src.name;
      p.vars = se.vars;
      p.source_vars = src.factor.edge();
      if (se.role == SubqueryEdge::Role::projection) {
        projections.push_back(indicator_projection(src.factor, se.vars));
        inputs.push_back(&projections.back());
        p.role = TraceParticipant::Role::projection;
        p.size = projections.back().size();
      } else {
        inputs.push_back(&src.factor);
        p.role = se.role == SubqueryEdge::Role::boundary ? TraceParticipant::Role::boundary
                                                         : TraceParticipant::Role::absorbed;
        p.size = src.factor.size();
      }
      rec.participants.push_back(std::move(p));
    }
    const auto order = join_order(step.U);
    auto joined = generic_join(std::span<const Factor* const>(inputs), order, ctx_);
    rec.expanded_bindings = joined.stats.expanded_bindings;
    Factor folded = semiring_marginalize(joined.factor, var, agg);
    rec.output_vars = folded.edge();
    rec.output_size = folded.size();
    if (step.new_edge) {
      rec.output = fresh_name();
      live_.insert_or_assign(*step.new_edge, Live{rec.output, std::move(folded)});
    } else {
      scalar_ = ctx_.mul(scalar_, folded.empty() ? ctx_.zero() : folded.value(0));
    }
  }
  for (EdgeId id : step.boundary) live_.erase(id);
  for (EdgeId id : step.absorbed) live_.erase(id);
  graph_ = std::move(step.successor);
  eliminated_.insert(var);
  trace_.steps.push_back(std::move(rec));
}

void InsideOutEngine::eliminate_product_var(VarId var) {
  const auto& query = instance_.query;
  if (query.variables.at(var).is_free) throw UserError("free variables are never marginalized");
  const Aggregate& agg = query.aggregate_of(var);
  if (!agg.is_product) throw UserError("variable '" + query.var_name(var) + "' is under a semiring aggregate");
  const auto dom = instance_.domain(var);
  if (!dom.is_explicit())
    throw UserError("variable '" + query.var_name(var) + "' is under a product aggregate but has an active domain");
  const std::uint64_t exponent = dom.values.size();

  auto step = eliminate_step(graph_, var, EliminationMode::product, options_.projections);
  TraceStep rec;
  rec.var = var;
  rec.mode = EliminationMode::product;
  rec.aggregate = agg.name;
  rec.U = step.U;

  // Factors off the boundary and the running scalar are raised to |Dom|
  // before the shrunk scalars join it.
  scalar_ = value_power(ctx_, scalar_, exponent, options_.idempotence_shortcut);
  for (const auto& [old_id, new_id] : step.shrunk) {
    Live src = std::move(live_.at(old_id));
    live_.erase(old_id);
    rec.participants.push_back(
        {TraceParticipant::Role::boundary, src.name, src.factor.edge(), src.factor.edge(), src.factor.size()});
    Factor shrunk = product_marginalize(src.factor, var, dom);
    TraceStep::Rewrite rw{src.name, src.factor.edge(), "", shrunk.edge(), false, exponent};
    if (new_id) {
      rw.output = fresh_name();
      live_.emplace(*new_id, Live{rw.output, std::move(shrunk)});
    } else {
      scalar_ = ctx_.mul(scalar_, shrunk.empty() ? ctx_.zero() : shrunk.value(0));
    }
    rec.rewrites.push_back(std::move(rw));
  }
  for (auto& [id, live] : live_) {
    if (std::any_of(step.shrunk.begin(), step.shrunk.end(),
                    [&](const auto& s) { return s.second && *s.second == id; }))
      continue;
    Factor powered = power_factor(live.factor, exponent, options_.idempotence_shortcut);
    if (powered == live.factor) continue;
    TraceStep::Rewrite rw{live.name, live.factor.edge(), fresh_name(), live.factor.edge(), true, exponent};
    live.name = rw.output;
    live.factor = std::move(powered);
    rec.rewrites.push_back(std::move(rw));
  }
  graph_ = std::move(step.successor);
  eliminated_.insert(var);
  trace_.steps.push_back(std::move(rec));
}

Factor InsideOutEngine::finish(std::span<const VarId> free_order) {
  const VarSet free = VarSet::of(free_order);
  std::vector<Factor> owned;
  owned.reserve(free.size() + 1);
  std::vector<const Factor*> inputs;
  VarSet covered;
  for (const auto& [id, live] : live_) {
    if (!live.factor.edge().subset_of(free))
      throw InternalError("residual factor '" + live.name + "' still has bound variables");
    inputs.push_back(&live.factor);
    covered |= live.factor.edge();
    trace_.final_participants.push_back({TraceParticipant::Role::residual, live.name, live.factor.edge(),
                                         live.factor.edge(), live.factor.size()});
  }
  // Free variables no factor mentions range over their whole domain.
  for (VarId v : free - covered) {
    const std::size_t d = instance_.dictionaries.at(v).size();
    std::vector<RawRow> rows;
    for (Code c = 0; c < d; ++c) rows.push_back({{c}, ctx_.one()});
    const VarId edge[] = {v};
    owned.push_back(Factor::build(edge, std::move(rows), ctx_));
    inputs.push_back(&owned.back());
    trace_.final_participants.push_back(
        {TraceParticipant::Role::domain, "dom_" + instance_.query.var_name(v), VarSet{v}, VarSet{v}, d});
  }
  owned.push_back(Factor::scalar(scalar_, ctx_));
  inputs.push_back(&owned.back());
  trace_.scalar = scalar_;

  auto joined = generic_join(std::span<const Factor* const>(inputs), free_order, ctx_);
  trace_.final_expanded_bindings = joined.stats.expanded_bindings;
  return std::move(joined.factor);
}

EngineResult run_insideout(const FAQInstance& instance, const VariableOrdering& sigma, EngineOptions options) {
  const auto& query = instance.query;
  query.validate();
  validate_ordering(query, sigma);
  InsideOutEngine engine(instance, options);
  for (std::size_t i = sigma.order.size(); i-- > sigma.num_free;) {
    const VarId v = sigma.order[i];
    if (query.aggregate_of(v).is_product)
      engine.eliminate_product_var(v);
    else
      engine.eliminate_semiring_var(v);
  }
  Factor out = engine.finish(std::span<const VarId>(sigma.order).first(sigma.num_free));
  return {std::move(out), engine.trace()};
}

}  // namespace faq
