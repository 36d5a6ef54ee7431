#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "faq/frontend.hpp"
#include "faq/optimizer.hpp"
#include "support.hpp"

using namespace faq;

namespace {

// Every permutation of the bound variables that respects the poset, by brute force.
std::size_t count_by_filter(const PrecedencePoset& poset) {
  std::vector<VarId> perm = poset.elements;
  std::sort(perm.begin(), perm.end());
  std::size_t n = 0;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < perm.size() && ok; ++i)
      for (std::size_t j = i + 1; j < perm.size() && ok; ++j)
        if (poset.precedes(perm[j], perm[i])) ok = false;
    n += ok;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return n;
}

}  // namespace

TEST_CASE("precedence poset of the mixed example") {
  auto q = testing::mixed_query();  // a=0 d=1 b=2 c=3
  auto poset = build_precedence_poset(q);
  auto covers = poset.covers();
  std::sort(covers.begin(), covers.end());
  CHECK(covers == std::vector<std::pair<VarId, VarId>>{{0, 1}, {0, 2}, {0, 3}});
  CHECK(for_each_linear_extension(poset, 100, [](auto) { return true; }) == 6);
  CHECK(count_by_filter(poset) == 6);
}

TEST_CASE("uniform aggregates give an antichain") {
  auto q = parse_query("context nat-sum-prod; sum a, b, c; factor R(a, b); factor S(b, c);");
  auto poset = build_precedence_poset(q);
  CHECK(poset.covers().empty());
  CHECK(enumerate_orderings(q, poset, 100).size() == 6);
}

TEST_CASE("alternating aggregates on one edge give a chain") {
  auto q = parse_query("context nat-sum-prod; sum a; max b; sum c; factor R(a, b, c);");
  auto poset = build_precedence_poset(q);
  auto orders = enumerate_orderings(q, poset, 100);
  REQUIRE(orders.size() == 1);
  CHECK(orders[0] == identity_ordering(q));
}

TEST_CASE("linear extensions come out in lexicographic order") {
  auto q = testing::running_query();
  auto poset = build_precedence_poset(q);
  std::vector<std::vector<VarId>> seen;
  for_each_linear_extension(poset, 50, [&](std::span<const VarId> ext) {
    seen.emplace_back(ext.begin(), ext.end());
    return true;
  });
  CHECK(seen.size() == 50);
  CHECK(std::is_sorted(seen.begin(), seen.end()));
  std::size_t stopped = for_each_linear_extension(poset, 50, [](auto) { return false; });
  CHECK(stopped == 1);
}

TEST_CASE("exact optimizer on small shapes") {
  OptimizerOptions exact;
  exact.mode = OptimizerMode::exact;
  auto q6 = testing::mixed_query();
  auto r6 = optimize_ordering(q6, exact);
  CHECK(r6.width == 1);
  CHECK(r6.candidates == 6);
  CHECK(faqw_of_ordering(q6, identity_ordering(q6)) == 2);

  auto tri = parse_query("context nat-sum-prod; sum a, b, c; factor R(a, b); factor S(b, c); factor T(a, c);");
  CHECK(optimize_ordering(tri, exact).width == mpq_class(3, 2));

  auto path = parse_query(
      "context nat-sum-prod; sum a, b, c, d; factor R(a, b); factor S(b, c); factor T(c, d);");
  CHECK(optimize_ordering(path, exact).width == 1);
  CHECK(optimize_ordering(path).width == 1);
}

TEST_CASE("exact mode falls back to greedy above the cap") {
  auto q = parse_query("context nat-sum-prod; sum a, b, c, d; factor R(a, b); factor S(b, c); factor T(c, d);");
  OptimizerOptions o;
  o.mode = OptimizerMode::exact;
  o.cap = 5;
  auto r = optimize_ordering(q, o);
  CHECK(r.fell_back);
  CHECK(r.sigma == greedy_ordering(q).sigma);
  o.cap = 24;
  CHECK_FALSE(optimize_ordering(q, o).fell_back);
}

TEST_CASE("serial and parallel exact search agree") {
  auto q = testing::running_query();
  auto poset = build_precedence_poset(q);
  auto cands = enumerate_orderings(q, poset, 2000);
  OptimizerOptions serial, parallel;
  serial.parallel = false;
  auto a = best_of(q, cands, serial);
  auto b = best_of(q, cands, parallel);
  CHECK(a.sigma == b.sigma);
  CHECK(a.width == b.width);
  CHECK(a.width == mpq_class(3, 2));
}

TEST_CASE("greedy never beats exact") {
  std::mt19937_64 rng(11);
  testing::RandomSpec spec;
  OptimizerOptions exact;
  exact.mode = OptimizerMode::exact;
  for (int i = 0; i < 200; ++i) {
    auto inst = testing::random_instance(rng, spec);
    auto e = optimize_ordering(inst.query, exact);
    auto g = greedy_ordering(inst.query);
    REQUIRE_FALSE(e.fell_back);
    CHECK(g.width >= e.width);
    CHECK(faqw_of_ordering(inst.query, e.sigma) == e.width);
    validate_ordering(inst.query, g.sigma);
  }
}

TEST_CASE("data-aware costs weight the cover") {
  auto q = parse_query("context nat-sum-prod; free a; sum b; factor R(a, b); factor S(b);");
  OptimizerOptions o;
  o.log_sizes = std::vector<mpq_class>{10, 2};
  auto h = cost_hypergraph(q, o.log_sizes);
  CHECK(fractional_edge_cover(h).objective == 10);
  auto r = optimize_ordering(q, o);
  CHECK(r.width == 10);
}
