#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "faq/hypergraph.hpp"
#include "faq/query.hpp"
#include "support.hpp"

using namespace faq;

namespace {

mpq_class q(long n, long d = 1) { return mpq_class(n, d); }

// Running query variable ids: b=0 d=1 a=2 c=3 e=4 f=5 g=6 h=7.
constexpr VarId B = 0, D = 1, A = 2, C = 3, E = 4, F = 5, G = 6, H = 7;

}  // namespace

TEST_CASE("fractional edge cover of the projected subquery") {
  // d=0 e=1 f=2; edges {d,f} {e,f} {d,e} {f} {e}
  Hypergraph h(VarSet{0, 1, 2});
  h.add_edge({0, 2});
  h.add_edge({1, 2});
  h.add_edge({0, 1});
  h.add_edge({2});
  h.add_edge({1});
  auto c = fractional_edge_cover(h);
  CHECK(c.objective == q(3, 2));
  CHECK(c.lambda == std::vector<mpq_class>{q(1, 2), q(1, 2), q(1, 2), q(0), q(0)});
  CHECK(is_fractional_edge_cover(h, c.lambda, h.vertices()));
}

TEST_CASE("edge cover small cases") {
  Hypergraph one(VarSet{0, 1, 2});
  one.add_edge({0, 1, 2});
  auto c1 = fractional_edge_cover(one);
  CHECK(c1.objective == 1);
  CHECK(c1.lambda[0] == 1);

  Hypergraph path(VarSet{0, 1, 2});
  path.add_edge({0, 1});
  path.add_edge({1, 2});
  auto c2 = fractional_edge_cover(path);
  CHECK(c2.objective == 2);
  CHECK(c2.lambda == std::vector<mpq_class>{q(1), q(1)});

  Hypergraph bad(VarSet{0, 1});
  bad.add_edge({0});
  try {
    fractional_edge_cover(bad);
    FAIL("expected an uncoverable vertex");
  } catch (const UncoverableVertex& e) {
    CHECK(e.vertex() == 1);
  }
  CHECK(fractional_edge_cover(bad, VarSet{0}).objective == 1);
}

TEST_CASE("weighted covers use log sizes") {
  Hypergraph h(VarSet{0, 1});
  h.add_edge({0, 1}, "big", q(10));
  h.add_edge({0}, "x", q(2));
  h.add_edge({1}, "y", q(3));
  CHECK(fractional_edge_cover(h).objective == 5);
}

TEST_CASE("cover optimum beats a grid of feasible points") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 2 + rng() % 3, m = 1 + rng() % 5;
    Hypergraph h(VarSet::from_bits((1ULL << n) - 1));
    VarSet covered;
    for (std::size_t i = 0; i < m; ++i) {
      VarSet e = VarSet::from_bits(1 + rng() % ((1ULL << n) - 1));
      h.add_edge(e);
      covered |= e;
    }
    if (covered != h.vertices()) continue;
    auto c = fractional_edge_cover(h);
    REQUIRE(is_fractional_edge_cover(h, c.lambda, h.vertices()));
    mpq_class sum = 0;
    for (const auto& l : c.lambda) sum += l;
    CHECK(sum == c.objective);
    // Grid over lambda in {0, 1/4, ..., 1}.
    std::vector<int> idx(m, 0);
    while (true) {
      std::vector<mpq_class> lam;
      mpq_class obj = 0;
      for (int i : idx) lam.emplace_back(i, 4), obj += mpq_class(i, 4);
      if (is_fractional_edge_cover(h, lam, h.vertices())) CHECK(c.objective <= obj);
      std::size_t p = 0;
      while (p < m && ++idx[p] == 5) idx[p++] = 0;
      if (p == m) break;
    }
  }
}

TEST_CASE("eliminating f after h and g") {
  auto query = testing::running_query();
  Hypergraph h = query.hypergraph();
  h = eliminate_step(h, H, EliminationMode::semiring).successor;
  h = eliminate_step(h, G, EliminationMode::semiring).successor;
  auto step = eliminate_step(h, F, EliminationMode::semiring);
  CHECK(step.U == VarSet{D, E, F});
  REQUIRE(step.boundary.size() == 3);
  CHECK(h.edge(step.boundary[0]).label == "U");
  CHECK(h.edge(step.boundary[1]).label == "V");
  CHECK(h.edge(step.boundary[2]).vars == VarSet{F});
  REQUIRE(step.absorbed.size() == 1);
  CHECK(h.edge(step.absorbed[0]).vars == VarSet{E});
  std::vector<SubqueryEdge> proj;
  for (const auto& s : step.subquery)
    if (s.role == SubqueryEdge::Role::projection) proj.push_back(s);
  REQUIRE(proj.size() == 1);
  CHECK(h.edge(proj[0].source).label == "T");
  CHECK(proj[0].vars == VarSet{D, E});
  CHECK(step.new_edge_vars == VarSet{D, E});
  for (const auto& e : step.successor.edges()) {
    CHECK_FALSE(e.vars.contains(F));
    CHECK(e.vars != VarSet{E});
  }
  CHECK(fractional_edge_cover(step.subquery_graph(h), step.U).objective == q(3, 2));
}

TEST_CASE("degenerate and product steps") {
  Hypergraph h(VarSet{0, 1});
  h.add_edge({0});
  h.add_edge({0, 1});
  auto unary = eliminate_step(Hypergraph([] {
    Hypergraph g(VarSet{0});
    g.add_edge({0});
    return g;
  }()), 0, EliminationMode::semiring);
  CHECK(unary.U == VarSet{0});
  CHECK_FALSE(unary.new_edge.has_value());
  CHECK(unary.successor.edges().empty());

  auto prod = eliminate_step(h, 0, EliminationMode::product);
  CHECK(prod.subquery.empty());
  REQUIRE(prod.shrunk.size() == 2);
  CHECK_FALSE(prod.shrunk[0].second.has_value());
  REQUIRE(prod.shrunk[1].second.has_value());
  CHECK(prod.successor.edge(*prod.shrunk[1].second).vars == VarSet{1});
  CHECK(prod.successor.edges().size() == 1);

  CHECK_THROWS_AS(eliminate_step(h, 5, EliminationMode::semiring), UserError);
}

TEST_CASE("projection policies") {
  auto query = testing::running_query();
  Hypergraph h = query.hypergraph();
  auto count = [](const EliminationStep& s) {
    return std::count_if(s.subquery.begin(), s.subquery.end(),
                         [](const SubqueryEdge& e) { return e.role == SubqueryEdge::Role::projection; });
  };
  // h has a single boundary edge: projections only under `always`.
  CHECK(count(eliminate_step(h, H, EliminationMode::semiring)) == 0);
  CHECK(count(eliminate_step(h, H, EliminationMode::semiring, ProjectionPolicy::always)) == 2);
  CHECK(count(eliminate_step(h, E, EliminationMode::semiring, ProjectionPolicy::never)) == 0);
}

TEST_CASE("faqw of pinned orderings") {
  auto q6 = testing::mixed_query();  // a=0 d=1 b=2 c=3
  CHECK(faqw_of_ordering(q6, identity_ordering(q6)) == 2);
  VariableOrdering phi_prime{{0, 3, 1, 2}, 0};
  CHECK(faqw_of_ordering(q6, phi_prime) == 1);

  auto q4 = testing::running_query();
  VariableOrdering sigma{{B, D, C, A, E, F, G, H}, 2};
  auto profile = width_profile(q4, sigma);
  CHECK(profile.width == q(3, 2));
  std::vector<mpq_class> rho;
  for (const auto& s : profile.steps) rho.push_back(s.rho);
  CHECK(rho == std::vector<mpq_class>{q(1), q(1), q(3, 2), q(1), q(3, 2), q(1), q(1), q(1)});

  auto single = parse_query("context nat-sum-prod; free x; sum y; sum z; factor R(x, y, z);");
  CHECK(faqw_of_ordering(single, identity_ordering(single)) == 1);
  CHECK(faqw_of_ordering(single, VariableOrdering{{0, 2, 1}, 1}) == 1);

  CHECK_THROWS_AS(faqw_of_ordering(q6, VariableOrdering{{0, 1, 2}, 0}), UserError);
  CHECK_THROWS_AS(faqw_of_ordering(q4, VariableOrdering{{B, A, D, C, E, F, G, H}, 2}), UserError);
}

TEST_CASE("tree decomposition of the pinned ordering") {
  auto q4 = testing::running_query();
  auto h = q4.hypergraph();
  auto td = tree_decomposition_from_ordering(h, std::vector<VarId>{B, D, C, A, E, F, G, H});
  std::set<std::uint64_t> bags;
  for (auto b : td.bags) bags.insert(b.bits());
  CHECK(bags == std::set<std::uint64_t>{VarSet{F, H}.bits(), VarSet{E, G}.bits(), VarSet{D, E, F}.bits(),
                                        VarSet{A, B, C}.bits(), VarSet{B, C, D, E}.bits()});
  auto index = [&](VarSet s) {
    return static_cast<std::size_t>(std::find(td.bags.begin(), td.bags.end(), s) - td.bags.begin());
  };
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (auto [a, b] : td.tree_edges) edges.insert({std::min(a, b), std::max(a, b)});
  auto edge = [&](VarSet x, VarSet y) {
    auto a = index(x), b = index(y);
    return std::make_pair(std::min(a, b), std::max(a, b));
  };
  CHECK(edges == std::set<std::pair<std::size_t, std::size_t>>{
                     edge({B, C, D, E}, {A, B, C}), edge({B, C, D, E}, {D, E, F}),
                     edge({D, E, F}, {E, G}), edge({D, E, F}, {F, H})});
  CHECK(td.width() == q(3, 2));
  CHECK(validate_tree_decomposition(td, h).pass);
}

TEST_CASE("small tree decompositions") {
  Hypergraph e(VarSet{0, 1});
  e.add_edge({0, 1});
  auto td = tree_decomposition_from_ordering(e, std::vector<VarId>{0, 1});
  CHECK(td.width() == 1);
  CHECK(td.bags.size() <= 2);

  Hypergraph tri(VarSet{0, 1, 2});
  tri.add_edge({0, 1});
  tri.add_edge({1, 2});
  tri.add_edge({2, 0});
  for (auto order : {std::vector<VarId>{0, 1, 2}, std::vector<VarId>{2, 0, 1}, std::vector<VarId>{1, 2, 0}}) {
    auto t = tree_decomposition_from_ordering(tri, order);
    CHECK(t.bags.front() == VarSet{0, 1, 2});
    CHECK(t.width() == q(3, 2));
  }
}

TEST_CASE("validation reports violations") {
  Hypergraph h(VarSet{0, 1, 2, 3});
  h.add_edge({0, 2});
  TreeDecomposition cover;
  cover.bags = {VarSet{0, 1}, VarSet{2, 3}};
  cover.tree_edges = {{0, 1}};
  auto r = validate_tree_decomposition(cover, h);
  CHECK_FALSE(r.pass);
  CHECK(r.violation.find("not contained") != std::string::npos);

  Hypergraph h2(VarSet{0, 1, 2, 3});
  h2.add_edge({0, 1});
  h2.add_edge({2, 3});
  h2.add_edge({0, 2});
  TreeDecomposition ri;
  ri.bags = {VarSet{0, 1}, VarSet{2, 3}, VarSet{0, 2}};
  ri.tree_edges = {{0, 1}, {1, 2}};
  auto r2 = validate_tree_decomposition(ri, h2);
  CHECK_FALSE(r2.pass);
  CHECK(r2.violation.find("running intersection") != std::string::npos);
}

TEST_CASE("random orderings always give valid tree decompositions") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    Hypergraph h(VarSet::from_bits((1ULL << n) - 1));
    const std::size_t m = rng() % 7;
    for (std::size_t i = 0; i < m; ++i) {
      VarSet e;
      const std::size_t k = 1 + rng() % 3;
      for (std::size_t j = 0; j < k; ++j) e.insert(static_cast<VarId>(rng() % n));
      h.add_edge(e);
    }
    std::vector<VarId> order(n);
    for (VarId v = 0; v < n; ++v) order[v] = v;
    std::shuffle(order.begin(), order.end(), rng);
    auto td = tree_decomposition_from_ordering(h, order);
    auto r = validate_tree_decomposition(td, h);
    CAPTURE(r.violation);
    CHECK(r.pass);
  }
}
