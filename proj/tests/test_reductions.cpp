#include <doctest.h>

#include <random>

#include "faq/engine.hpp"
#include "faq/error.hpp"
#include "faq/optimizer.hpp"
#include "faq/oracle.hpp"
#include "faq/reductions.hpp"

using namespace faq;

namespace {

Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  std::uniform_int_distribution<int> d(-3, 5);
  Matrix m(r, std::vector<mpq_class>(c));
  for (auto& row : m)
    for (auto& x : row) x = mpq_class(d(rng), 1 + (d(rng) & 1));
  return m;
}

mpz_class scalar_count(const Factor& f) {
  if (f.empty()) return 0;
  return mpz_class(f.value(0).rational().get_num());
}

}  // namespace

TEST_CASE("matrix chain by elimination") {
  std::vector<Matrix> chain{{{1, 2}, {3, 4}}, {{5, 6}, {7, 8}}, {{1, 0}, {0, 1}}};
  auto inst = mcm_instance(chain);
  CHECK(inst.query.num_free() == 2);
  auto out = run_insideout(inst, identity_ordering(inst.query)).output;
  CHECK(decode_matrix(inst, out) == Matrix{{19, 22}, {43, 50}});
  CHECK_THROWS_AS(mcm_instance({{{1, 2}}, {{1, 2}}}), UserError);
}

TEST_CASE("random matrix chains match the native product") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 1 + rng() % 4;
    std::vector<std::size_t> dims(n + 1);
    for (auto& d : dims) d = 1 + rng() % 4;
    std::vector<Matrix> chain;
    for (std::size_t i = 0; i < n; ++i) chain.push_back(random_matrix(rng, dims[i], dims[i + 1]));
    auto inst = mcm_instance(chain);
    auto sigma = optimize_ordering(inst.query).sigma;
    CHECK(decode_matrix(inst, run_insideout(inst, sigma).output) == multiply_chain(chain));
  }
}

TEST_CASE("map inference on a chain") {
  // x0 free; x1, x2 maximized.
  std::vector<MapFactor> fs{{{0, 1}, {{{0, 0}, mpq_class(1, 2)}, {{0, 1}, mpq_class(1, 4)}, {{1, 1}, 1}}},
                            {{1, 2}, {{{0, 0}, 2}, {{1, 0}, 3}, {{1, 1}, mpq_class(1, 3)}}}};
  auto inst = map_instance({2, 2, 2}, 1, fs);
  auto out = run_insideout(inst, identity_ordering(inst.query)).output;
  auto expect = map_native({2, 2, 2}, 1, fs);
  REQUIRE(expect.size() == 2);
  CHECK(expect[0].second == 1);  // x0=0: max(1/2*2, 1/4*3)
  CHECK(expect[1].second == 3);
  REQUIRE(out.size() == 2);
  for (std::size_t r = 0; r < 2; ++r) CHECK(out.value(r).rational() == expect[r].second);
}

TEST_CASE("random map instances match the native maximum") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 2 + rng() % 3;
    std::vector<std::size_t> doms(n);
    for (auto& d : doms) d = 2 + rng() % 2;
    std::vector<MapFactor> fs;
    for (std::size_t v = 0; v + 1 < n; ++v) {
      MapFactor f{{static_cast<VarId>(v), static_cast<VarId>(v + 1)}, {}};
      for (Code a = 0; a < doms[v]; ++a)
        for (Code b = 0; b < doms[v + 1]; ++b)
          if (rng() % 3) f.rows.push_back({{a, b}, mpq_class(static_cast<long>(rng() % 7), 1 + static_cast<long>(rng() % 3))});
      fs.push_back(std::move(f));
    }
    const std::size_t nf = rng() % 2;
    auto inst = map_instance(doms, nf, fs);
    auto out = run_insideout(inst, optimize_ordering(inst.query).sigma).output;
    auto expect = map_native(doms, nf, fs);
    REQUIRE(out.size() == expect.size());
    for (std::size_t r = 0; r < out.size(); ++r) {
      auto key = out.key(r);
      CHECK(std::vector<Code>(key.begin(), key.end()) == expect[r].first);
      CHECK(out.value(r).rational() == expect[r].second);
    }
  }
}

TEST_CASE("quantified conjunctive counting") {
  // #x. forall y. R(x, y) with R = {(1,0), (1,1), (0,0)}: only x = 1.
  std::vector<BoolRelation> rel{{{0, 1}, {{1, 0}, {1, 1}, {0, 0}}}};
  CHECK(qcq_count_native(1, "A", rel) == 1);
  CHECK(qcq_count_native(1, "E", rel) == 2);
  for (const char* qs : {"A", "E"}) {
    auto inst = qcq_count_instance(1, qs, rel);
    CHECK(scalar_count(run_insideout(inst, identity_ordering(inst.query)).output) ==
          qcq_count_native(1, qs, rel));
  }
}

TEST_CASE("random quantified counts match the native count") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 60; ++t) {
    const std::size_t nf = 1 + rng() % 3;
    std::string qs;
    for (std::size_t k = 0, m = 1 + rng() % 3; k < m; ++k) qs += (rng() % 2 ? 'E' : 'A');
    const std::size_t n = nf + qs.size();
    std::vector<BoolRelation> rels;
    for (std::size_t i = 0, m = 1 + rng() % 3; i < m; ++i) {
      BoolRelation r;
      while (r.vars.size() < std::min<std::size_t>(2, n)) {
        VarId v = static_cast<VarId>(rng() % n);
        if (std::find(r.vars.begin(), r.vars.end(), v) == r.vars.end()) r.vars.push_back(v);
      }
      for (Code a = 0; a < 2; ++a)
        for (Code b = 0; b < 2; ++b)
          if (rng() % 4) r.tuples.push_back({a, b});
      rels.push_back(std::move(r));
    }
    auto inst = qcq_count_instance(nf, qs, rels);
    const auto native = qcq_count_native(nf, qs, rels);
    CHECK(scalar_count(run_insideout(inst, identity_ordering(inst.query)).output) == native);
    CHECK(scalar_count(brute_force_eval(inst)) == native);
  }
}
