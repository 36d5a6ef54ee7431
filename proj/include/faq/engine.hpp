#pragma once

#include <map>
#include <string>
#include <vector>

#include "faq/factor.hpp"
#include "faq/hypergraph.hpp"
#include "faq/query.hpp"
#include "faq/wcoj.hpp"

namespace faq {

struct EngineOptions {
  ProjectionPolicy projections = ProjectionPolicy::when_joining;
  bool idempotence_shortcut = true;
};

/// One input to a step, as it appears in the trace and the emitted plan.
struct TraceParticipant {
  enum class Role { boundary, absorbed, projection, residual, domain };
  Role role = Role::boundary;
  std::string factor;  // name of the live factor (or its projection source)
  VarSet vars;         // edge, or the projection target
  VarSet source_vars;  // full edge of the source factor
  std::size_t size = 0;
};

struct TraceStep {
  VarId var = 0;
  EliminationMode mode = EliminationMode::semiring;
  std::string aggregate;
  VarSet U;
  std::vector<TraceParticipant> participants;
  std::size_t expanded_bindings = 0;
  // Semiring steps: the new factor (empty name when it folded into the scalar).
  std::string output;
  VarSet output_vars;
  std::size_t output_size = 0;
  // Product steps: per-factor results.
  struct Rewrite {
    std::string input;
    VarSet input_vars;
    std::string output;  // empty when it became a scalar
    VarSet output_vars;
    bool powered = false;  // power factor rather than product marginalization
    std::uint64_t exponent = 0;
  };
  std::vector<Rewrite> rewrites;
};

struct EngineTrace {
  std::vector<TraceStep> steps;
  std::vector<TraceParticipant> final_participants;  // residual join over the free variables
  std::size_t final_expanded_bindings = 0;
  Value scalar;  // running scalar multiplied into the output
  std::vector<std::string> var_names;
};

struct EngineResult {
  Factor output;
  EngineTrace trace;
};

/// InsideOut variable elimination over a fixed ordering. The live state holds
/// one factor per edge of the current hypergraph plus a running scalar.
class InsideOutEngine {
 public:
  InsideOutEngine(const FAQInstance& instance, EngineOptions options = {});

  /// Folds `var` away with its semiring aggregate: joins the incident
  /// factors, absorbed subset factors and indicator projections over U, then
  /// marginalizes.
  void eliminate_semiring_var(VarId var);
  /// Product aggregate: product-marginalizes each incident factor and raises
  /// every other factor (and the scalar) to the power |Dom(var)|.
  void eliminate_product_var(VarId var);
  /// Joins the residual factors over the free variables, in `free_order`.
  Factor finish(std::span<const VarId> free_order);

  const Hypergraph& hypergraph() const { return graph_; }
  const EngineTrace& trace() const { return trace_; }
  std::size_t live_factor_count() const { return live_.size(); }

 private:
  struct Live {
    std::string name;
    Factor factor;
  };

  std::string fresh_name();
  std::vector<VarId> join_order(VarSet vars) const;

  const FAQInstance& instance_;
  const SemiringContext& ctx_;
  EngineOptions options_;
  Hypergraph graph_;
  std::map<EdgeId, Live> live_;
  Value scalar_;
  EngineTrace trace_;
  std::size_t next_name_ = 1;
  VarSet eliminated_;
};

/// Evaluates the query under `sigma`: bound variables from the back, each by
/// its aggregate kind, then the residual join over the free prefix.
EngineResult run_insideout(const FAQInstance& instance, const VariableOrdering& sigma,
                           EngineOptions options = {});

}  // namespace faq
