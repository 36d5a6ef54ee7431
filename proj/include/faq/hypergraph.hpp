#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "faq/error.hpp"
#include "faq/var_set.hpp"

namespace faq {

using EdgeId = std::uint32_t;

/// A hyperedge instance. Edges form a multiset: two edges may share a vertex
/// set and are told apart by id.
struct Hyperedge {
  EdgeId id = 0;
  VarSet vars;
  /// log2 of the relation size; nullopt means symbolic uniform N (LP cost 1,
  /// so the optimum is the fractional edge cover number).
  std::optional<mpq_class> log_size;
  std::string label;
};

class Hypergraph {
 public:
  Hypergraph() = default;
  explicit Hypergraph(VarSet vertices) : vertices_(vertices) {}

  /// Adds an edge and returns its id. Throws UserError for an empty edge or
  /// vertices outside the vertex set.
  EdgeId add_edge(VarSet vars, std::string label = {}, std::optional<mpq_class> log_size = {});

  VarSet vertices() const { return vertices_; }
  const std::vector<Hyperedge>& edges() const { return edges_; }
  const Hyperedge& edge(EdgeId id) const;
  bool has_edge(EdgeId id) const;
  EdgeId next_id() const { return next_id_; }

  /// Incident edges in insertion order.
  std::vector<EdgeId> incident(VarId v) const;

  void remove_edge(EdgeId id);
  void remove_vertex(VarId v);  // requires no incident edge
  /// Adds an edge under a caller-chosen id (>= next_id()).
  void add_edge_with_id(EdgeId id, VarSet vars, std::string label, std::optional<mpq_class> log_size);
  void set_log_size(EdgeId id, std::optional<mpq_class> log_size);

 private:
  VarSet vertices_;
  std::vector<Hyperedge> edges_;
  EdgeId next_id_ = 0;
};

class UncoverableVertex : public UserError {
 public:
  explicit UncoverableVertex(VarId v)
      : UserError("vertex " + std::to_string(v) + " is not covered by any edge"), vertex_(v) {}
  VarId vertex() const { return vertex_; }

 private:
  VarId vertex_;
};

struct FractionalEdgeCover {
  std::vector<mpq_class> lambda;  // aligned with Hypergraph::edges()
  mpq_class objective;
};

/// Minimum-cost fractional edge cover of `restrict_to` (all vertices when
/// empty optional), with edge costs from log sizes (1 when uniform). Solved
/// exactly; the returned lambda is one optimal vertex of the polytope.
FractionalEdgeCover fractional_edge_cover(const Hypergraph& h,
                                          std::optional<VarSet> restrict_to = std::nullopt);

/// Checks lambda >= 0 and that every vertex of `cover_set` has total weight
/// >= 1.
bool is_fractional_edge_cover(const Hypergraph& h, std::span<const mpq_class> lambda, VarSet cover_set);

enum class EliminationMode { semiring, product };

/// Which non-boundary edges contribute indicator projections to a step's
/// subquery. Projections only prune; outputs never depend on the policy.
enum class ProjectionPolicy {
  when_joining,  // only when the boundary has two or more edges (default)
  always,        // every overlapping non-boundary edge
  never,
};

struct SubqueryEdge {
  enum class Role { boundary, absorbed, projection };
  Role role = Role::boundary;
  EdgeId source = 0;
  VarSet vars;  // full source edge, or its intersection with U for projections
};

struct EliminationStep {
  VarId var = 0;
  EliminationMode mode = EliminationMode::semiring;
  VarSet U;                       // var together with all incident edges' vertices
  std::vector<EdgeId> boundary;   // incident edges
  std::vector<EdgeId> absorbed;   // non-incident edges inside U, consumed by the step
  std::vector<SubqueryEdge> subquery;
  /// Semiring mode: id and vertices of the new edge U - {var}. When that set
  /// is empty the step produces a scalar and no edge is added.
  std::optional<EdgeId> new_edge;
  VarSet new_edge_vars;
  /// Product mode: (old id, new id) for each shrunk incident edge; new id is
  /// nullopt when the edge shrank to nothing (a scalar).
  std::vector<std::pair<EdgeId, std::optional<EdgeId>>> shrunk;
  Hypergraph successor;

  /// The subquery hypergraph H_k over U (with source weights).
  Hypergraph subquery_graph(const Hypergraph& before) const;
};

EliminationStep eliminate_step(const Hypergraph& h, VarId var, EliminationMode mode,
                               ProjectionPolicy policy = ProjectionPolicy::when_joining);

/// Width of each elimination step of an ordering.
struct WidthProfile {
  struct Step {
    VarId var = 0;
    EliminationMode mode = EliminationMode::semiring;
    VarSet U;
    mpq_class rho;  // 0 for product steps and steps with no incident edge
  };
  std::vector<Step> steps;  // in elimination order (last variable first)
  mpq_class width;          // max over semiring steps
};

/// Simulates elimination of `order` back to front (all variables, free ones
/// last, in semiring mode) and records the fractional cover number of every
/// semiring step's subquery. Variables in `product_vars` are eliminated in
/// product mode and contribute nothing.
WidthProfile elimination_width(const Hypergraph& h, std::span<const VarId> order,
                               VarSet product_vars = {},
                               ProjectionPolicy policy = ProjectionPolicy::when_joining);

struct TreeDecomposition {
  std::vector<VarSet> bags;
  std::vector<std::pair<std::size_t, std::size_t>> tree_edges;
  std::vector<mpq_class> bag_width;  // fractional edge cover number of each bag

  mpq_class width() const;
};

/// GYO construction: the bag of each elimination step is U_k, and its
/// children are the bags of the steps that produced the edges it consumes.
/// Bags contained in a neighbouring bag are contracted. The result is
/// validated before it is returned (InternalError on violation).
TreeDecomposition tree_decomposition_from_ordering(const Hypergraph& h, std::span<const VarId> order);

struct TreeDecompositionCheck {
  bool pass = true;
  std::string violation;
};

/// Exhaustive check of edge coverage, running intersection, and that the
/// tree edges form a forest.
TreeDecompositionCheck validate_tree_decomposition(const TreeDecomposition& td, const Hypergraph& h);

}  // namespace faq
