#include "faq/hypergraph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "faq/lp.hpp"

namespace faq {

EdgeId Hypergraph::add_edge(VarSet vars, std::string label, std::optional<mpq_class> log_size) {
  EdgeId id = next_id_;
  add_edge_with_id(id, vars, std::move(label), std::move(log_size));
  return id;
}

void Hypergraph::add_edge_with_id(EdgeId id, VarSet vars, std::string label,
                                  std::optional<mpq_class> log_size) {
  if (vars.empty()) throw UserError("hypergraph edges must be nonempty");
  if (!vars.subset_of(vertices_)) throw UserError("edge contains a vertex outside the hypergraph");
  if (id < next_id_) throw InternalError("edge id reused");
  edges_.push_back(Hyperedge{id, vars, std::move(log_size), std::move(label)});
  next_id_ = id + 1;
}

const Hyperedge& Hypergraph::edge(EdgeId id) const {
  for (const auto& e : edges_)
    if (e.id == id) return e;
  throw InternalError("no edge with id " + std::to_string(id));
}

bool Hypergraph::has_edge(EdgeId id) const {
  return std::any_of(edges_.begin(), edges_.end(), [&](const Hyperedge& e) { return e.id == id; });
}

std::vector<EdgeId> Hypergraph::incident(VarId v) const {
  std::vector<EdgeId> out;
  for (const auto& e : edges_)
    if (e.vars.contains(v)) out.push_back(e.id);
  return out;
}

void Hypergraph::remove_edge(EdgeId id) {
  auto it = std::find_if(edges_.begin(), edges_.end(), [&](const Hyperedge& e) { return e.id == id; });
  if (it == edges_.end()) throw InternalError("no edge with id " + std::to_string(id));
  edges_.erase(it);
}

void Hypergraph::remove_vertex(VarId v) {
  if (!incident(v).empty()) throw InternalError("removing a vertex that still has incident edges");
  vertices_.erase(v);
}

void Hypergraph::set_log_size(EdgeId id, std::optional<mpq_class> log_size) {
  for (auto& e : edges_)
    if (e.id == id) {
      e.log_size = std::move(log_size);
      return;
    }
  throw InternalError("no edge with id " + std::to_string(id));
}

FractionalEdgeCover fractional_edge_cover(const Hypergraph& h, std::optional<VarSet> restrict_to) {
  const VarSet cover = restrict_to.value_or(h.vertices());
  const auto elements = cover.to_vector();
  std::vector<int> index(kMaxVariables, -1);
  for (std::size_t i = 0; i < elements.size(); ++i) index[elements[i]] = static_cast<int>(i);

  CoveringLp lp;
  lp.num_elements = elements.size();
  for (const auto& e : h.edges()) {
    std::vector<std::size_t> members;
    for (VarId v : e.vars & cover) members.push_back(static_cast<std::size_t>(index[v]));
    lp.sets.push_back(std::move(members));
    lp.cost.push_back(e.log_size.value_or(mpq_class(1)));
  }
  for (VarId v : cover) {
    bool hit = std::any_of(h.edges().begin(), h.edges().end(),
                           [&](const Hyperedge& e) { return e.vars.contains(v); });
    if (!hit) throw UncoverableVertex(v);
  }
  auto sol = solve_covering_lp(lp);
  return FractionalEdgeCover{std::move(sol.x), std::move(sol.objective)};
}

bool is_fractional_edge_cover(const Hypergraph& h, std::span<const mpq_class> lambda, VarSet cover_set) {
  if (lambda.size() != h.edges().size()) return false;
  for (const auto& l : lambda)
    if (l < 0) return false;
  for (VarId v : cover_set) {
    mpq_class total = 0;
    for (std::size_t j = 0; j < lambda.size(); ++j)
      if (h.edges()[j].vars.contains(v)) total += lambda[j];
    if (total < 1) return false;
  }
  return true;
}

Hypergraph EliminationStep::subquery_graph(const Hypergraph& before) const {
  Hypergraph g(U);
  for (const auto& se : subquery) {
    const auto& src = before.edge(se.source);
    std::string label = src.label;
    if (se.role == SubqueryEdge::Role::projection) label += "/proj";
    g.add_edge(se.vars, std::move(label), src.log_size);
  }
  return g;
}

EliminationStep eliminate_step(const Hypergraph& h, VarId var, EliminationMode mode,
                               ProjectionPolicy policy) {
  if (!h.vertices().contains(var)) throw UserError("variable " + std::to_string(var) + " is not a vertex");
  EliminationStep step;
  step.var = var;
  step.mode = mode;
  step.boundary = h.incident(var);
  step.U.insert(var);
  for (EdgeId id : step.boundary) step.U |= h.edge(id).vars;

  Hypergraph next = h;
  if (mode == EliminationMode::product) {
    for (EdgeId id : step.boundary) {
      const auto& e = h.edge(id);
      VarSet rest = e.vars;
      rest.erase(var);
      next.remove_edge(id);
      if (rest.empty()) {
        step.shrunk.emplace_back(id, std::nullopt);
      } else {
        EdgeId nid = next.next_id();
        next.add_edge_with_id(nid, rest, e.label, e.log_size);
        step.shrunk.emplace_back(id, nid);
      }
    }
    next.remove_vertex(var);
    step.successor = std::move(next);
    return step;
  }

  for (EdgeId id : step.boundary)
    step.subquery.push_back({SubqueryEdge::Role::boundary, id, h.edge(id).vars});
  const bool project = policy == ProjectionPolicy::always ||
                       (policy == ProjectionPolicy::when_joining && step.boundary.size() >= 2);
  std::vector<SubqueryEdge> projections;
  for (const auto& e : h.edges()) {
    if (e.vars.contains(var)) continue;
    if (e.vars.subset_of(step.U)) {
      step.absorbed.push_back(e.id);
      step.subquery.push_back({SubqueryEdge::Role::absorbed, e.id, e.vars});
    } else if (project && e.vars.intersects(step.U)) {
      projections.push_back({SubqueryEdge::Role::projection, e.id, e.vars & step.U});
    }
  }
  step.subquery.insert(step.subquery.end(), projections.begin(), projections.end());

  for (EdgeId id : step.boundary) next.remove_edge(id);
  for (EdgeId id : step.absorbed) next.remove_edge(id);
  next.remove_vertex(var);
  step.new_edge_vars = step.U;
  step.new_edge_vars.erase(var);
  if (!step.new_edge_vars.empty()) {
    EdgeId nid = next.next_id();
    next.add_edge_with_id(nid, step.new_edge_vars, "", std::nullopt);
    step.new_edge = nid;
  }
  step.successor = std::move(next);
  return step;
}

namespace {

void check_permutation(const Hypergraph& h, std::span<const VarId> order) {
  VarSet seen;
  for (VarId v : order) {
    if (v >= kMaxVariables || seen.contains(v)) throw UserError("ordering repeats a variable");
    seen.insert(v);
  }
  if (seen != h.vertices()) throw UserError("ordering is not a permutation of the hypergraph's vertices");
}

}  // namespace

WidthProfile elimination_width(const Hypergraph& h, std::span<const VarId> order, VarSet product_vars,
                               ProjectionPolicy policy) {
  check_permutation(h, order);
  WidthProfile profile;
  Hypergraph cur = h;
  for (std::size_t i = order.size(); i-- > 0;) {
    const VarId var = order[i];
    const auto mode = product_vars.contains(var) ? EliminationMode::product : EliminationMode::semiring;
    auto step = eliminate_step(cur, var, mode, policy);
    WidthProfile::Step rec{var, mode, step.U, mpq_class(0)};
    if (mode == EliminationMode::semiring && !step.boundary.empty()) {
      Hypergraph sub = step.subquery_graph(cur);
      rec.rho = fractional_edge_cover(sub, step.U).objective;
      const bool data_aware = std::all_of(sub.edges().begin(), sub.edges().end(),
                                          [](const Hyperedge& e) { return e.log_size.has_value(); });
      if (data_aware && step.new_edge) step.successor.set_log_size(*step.new_edge, rec.rho);
      if (profile.steps.empty() || rec.rho > profile.width) profile.width = rec.rho;
    }
    profile.steps.push_back(std::move(rec));
    cur = std::move(step.successor);
  }
  return profile;
}

mpq_class TreeDecomposition::width() const {
  mpq_class w = 0;
  for (const auto& b : bag_width)
    if (b > w) w = b;
  return w;
}

TreeDecomposition tree_decomposition_from_ordering(const Hypergraph& h, std::span<const VarId> order) {
  check_permutation(h, order);
  std::vector<VarSet> bags;
  std::vector<std::set<std::size_t>> adj;
  std::map<EdgeId, std::size_t> producer;

  Hypergraph cur = h;
  for (std::size_t i = order.size(); i-- > 0;) {
    auto step = eliminate_step(cur, order[i], EliminationMode::semiring, ProjectionPolicy::never);
    const std::size_t bag = bags.size();
    bags.push_back(step.U);
    adj.emplace_back();
    auto link = [&](EdgeId id) {
      if (auto it = producer.find(id); it != producer.end()) {
        adj[bag].insert(it->second);
        adj[it->second].insert(bag);
      }
    };
    for (EdgeId id : step.boundary) link(id);
    for (EdgeId id : step.absorbed) link(id);
    if (step.new_edge) producer[*step.new_edge] = bag;
    cur = std::move(step.successor);
  }

  // Contract bags contained in a neighbour.
  std::vector<bool> alive(bags.size(), true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < bags.size() && !changed; ++a) {
      if (!alive[a]) continue;
      for (std::size_t b : adj[a]) {
        if (!bags[a].subset_of(bags[b])) continue;
        for (std::size_t c : adj[a]) {
          adj[c].erase(a);
          if (c != b) {
            adj[c].insert(b);
            adj[b].insert(c);
          }
        }
        adj[a].clear();
        alive[a] = false;
        changed = true;
        break;
      }
    }
  }

  TreeDecomposition td;
  std::vector<std::size_t> remap(bags.size(), 0);
  for (std::size_t a = 0; a < bags.size(); ++a)
    if (alive[a]) {
      remap[a] = td.bags.size();
      td.bags.push_back(bags[a]);
    }
  for (std::size_t a = 0; a < bags.size(); ++a)
    if (alive[a])
      for (std::size_t b : adj[a])
        if (a < b) td.tree_edges.emplace_back(remap[a], remap[b]);

  // Join the trees of a forest; their vertex sets are disjoint.
  std::vector<std::size_t> comp(td.bags.size());
  std::iota(comp.begin(), comp.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  for (auto [a, b] : td.tree_edges) comp[find(a)] = find(b);
  for (std::size_t a = 1; a < td.bags.size(); ++a)
    if (find(a) != find(0)) {
      td.tree_edges.emplace_back(0, a);
      comp[find(a)] = find(0);
    }

  VarSet coverable;
  for (const auto& e : h.edges()) coverable |= e.vars;
  for (const auto& bag : td.bags)
    td.bag_width.push_back(fractional_edge_cover(h, bag & coverable).objective);

  auto check = validate_tree_decomposition(td, h);
  if (!check.pass) throw InternalError("tree decomposition construction bug: " + check.violation);
  return td;
}

TreeDecompositionCheck validate_tree_decomposition(const TreeDecomposition& td, const Hypergraph& h) {
  auto fail = [](std::string what) { return TreeDecompositionCheck{false, std::move(what)}; };
  const std::size_t n = td.bags.size();
  for (auto [a, b] : td.tree_edges)
    if (a >= n || b >= n || a == b) return fail("tree edge references an invalid bag");
  if (n > 0 && td.tree_edges.size() != n - 1) return fail("tree edges do not form a tree");

  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [a, b] : td.tree_edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  auto connected = [&](const std::vector<bool>& member) {
    std::size_t start = n, count = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (member[i]) {
        ++count;
        if (start == n) start = i;
      }
    if (count == 0) return true;
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{start};
    seen[start] = true;
    std::size_t reached = 0;
    while (!stack.empty()) {
      auto x = stack.back();
      stack.pop_back();
      ++reached;
      for (auto y : adj[x])
        if (member[y] && !seen[y]) {
          seen[y] = true;
          stack.push_back(y);
        }
    }
    return reached == count;
  };
  if (!connected(std::vector<bool>(n, true))) return fail("tree edges do not form a tree");

  for (const auto& e : h.edges()) {
    bool covered = std::any_of(td.bags.begin(), td.bags.end(),
                               [&](VarSet bag) { return e.vars.subset_of(bag); });
    if (!covered) return fail("edge " + (e.label.empty() ? std::to_string(e.id) : e.label) +
                              " is not contained in any bag");
  }
  for (VarId v : h.vertices()) {
    std::vector<bool> member(n);
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) any |= (member[i] = td.bags[i].contains(v));
    if (!any) return fail("vertex " + std::to_string(v) + " is in no bag");
    if (!connected(member)) return fail("running intersection violated for vertex " + std::to_string(v));
  }
  return {};
}

}  // namespace faq
