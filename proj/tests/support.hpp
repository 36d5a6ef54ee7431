#pragma once

// Shared fixtures: the running and mixed-aggregate queries and a random instance
// generator for differential tests.

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "faq/frontend.hpp"
#include "faq/query.hpp"

namespace faq::testing {

inline const char* kRunning = R"(context nat-sum-prod;
free b, d;
sum a;
sum c;
sum e;
sum f;
sum g;
sum h;
factor R(a, b) from "R.tsv";
factor S(a, c) from "S.tsv";
factor T(b, c, d, e) from "T.tsv";
factor U(d, f) from "U.tsv";
factor V(e, f) from "V.tsv";
factor W(e, g) from "W.tsv";
factor Y(f, h) from "Y.tsv";
)";

// Pinned ordering: h, g, f, e, a, c are eliminated in that order.
inline const char* kRunningOrder = "b,d,c,a,e,f,g,h";

// Plan emitted for kRunningOrder.
inline const char* kRunningPlan =
    R"(psi1[f] = s1 <- agg<<s1 = sum(v1)>> Y[f,h] = v1.
psi2[e] = s2 <- agg<<s2 = sum(v1)>> W[e,g] = v1.
proj1(d,e) <- T(b,d,c,e).
psi3[d,e] = s3 <- agg<<s3 = sum(v1*v2*v3*v4)>> U[d,f] = v1, V[e,f] = v2, psi1[f] = v3, psi2[e] = v4, proj1(d,e).
proj2(b) <- R(b,a).
proj3(c) <- S(a,c).
psi4[b,d,c] = s4 <- agg<<s4 = sum(v1*v2)>> T[b,d,c,e] = v1, psi3[d,e] = v2, proj2(b), proj3(c).
proj4(b,c) <- psi4(b,d,c).
psi5[b,c] = s5 <- agg<<s5 = sum(v1*v2)>> R[b,a] = v1, S[a,c] = v2, proj4(b,c).
output[b,d] = s6 <- agg<<s6 = sum(v1*v2)>> psi4[b,d,c] = v1, psi5[b,c] = v2.
)";

inline const char* kMixed = R"(context nat-sum-prod;
sum a;
sum d;
max b;
sum c;
factor P1(a, b);
factor P2(a, c);
factor P3(c, d);
)";

inline FAQQuery running_query() { return parse_query(kRunning); }
inline FAQQuery mixed_query() { return parse_query(kMixed); }

inline TextTable table(std::initializer_list<std::pair<std::vector<std::string>, std::string>> rows) {
  TextTable t;
  for (const auto& [k, v] : rows) t.push_back({k, v});
  return t;
}

/// A small instance of the running query. Relations are 0/1 except W(e,g) = e.
inline FAQInstance running_instance(std::uint64_t seed = 7, int values = 3, double density = 0.5) {
  FAQQuery q = running_query();
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(density);
  std::vector<TextTable> tables;
  for (const auto& f : q.factors) {
    TextTable t;
    std::vector<int> idx(f.vars.size(), 0);
    while (true) {
      if (keep(rng)) {
        TextRow row;
        for (int i : idx) row.key.push_back(std::to_string(i + 1));
        row.value = "1";
        if (f.name == "W") row.value = row.key[0];  // psi_W(e, g) = e
        t.push_back(std::move(row));
      }
      std::size_t p = 0;
      while (p < idx.size() && ++idx[p] == values) idx[p++] = 0;
      if (p == idx.size()) break;
    }
    tables.push_back(std::move(t));
  }
  return build_instance(std::move(q), tables);
}

/// The mixed-aggregate query on singleton domains: psi1 = 2, psi2 = 3, psi3 = 5.
inline FAQInstance mixed_singleton() {
  return build_instance(mixed_query(), {table({{{"a0", "b0"}, "2"}}), table({{{"a0", "c0"}, "3"}}),
                                           table({{{"c0", "d0"}, "5"}})});
}

struct RandomSpec {
  std::size_t max_vars = 6;
  std::size_t max_domain = 4;
  std::size_t max_factors = 5;
  std::size_t max_rows = 40;
  std::vector<std::string> contexts{"bool-or-and", "nat-sum-prod", "max-prod"};
  bool allow_product = true;
};

inline std::string random_value(std::mt19937_64& rng, const std::string& ctx) {
  std::uniform_int_distribution<int> small(0, 4);
  if (ctx == "bool-or-and") return small(rng) == 0 ? "false" : "true";
  if (ctx == "max-prod") {
    int num = small(rng), den = 1 + small(rng) % 3;
    return std::to_string(num) + (den > 1 ? "/" + std::to_string(den) : "");
  }
  return std::to_string(small(rng));
}

/// Random query and data within `spec`. Every variable is declared with an
/// explicit domain unless it occurs in a factor and is not product-aggregated
/// (then it may use its active domain).
inline FAQInstance random_instance(std::mt19937_64& rng, const RandomSpec& spec = {}) {
  auto uni = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  const std::string ctx_name = spec.contexts[uni(0, spec.contexts.size() - 1)];
  const SemiringContext& ctx = builtin_context(ctx_name);

  std::vector<std::string> semiring_aggs, product_aggs;
  for (const auto& a : ctx.aggregates()) (a.is_product ? product_aggs : semiring_aggs).push_back(a.name);

  FAQQuery q;
  q.context = &ctx;
  const std::size_t n = uni(1, spec.max_vars);
  const std::size_t f = uni(0, std::min<std::size_t>(2, n));
  std::vector<std::size_t> dom(n);
  bool any_semiring = false;
  for (std::size_t v = 0; v < n; ++v) {
    dom[v] = uni(2, spec.max_domain);
    VariableDecl d{"v" + std::to_string(v), v < f, "", std::nullopt};
    if (v >= f) {
      const bool product = spec.allow_product && !product_aggs.empty() && uni(0, 3) == 0;
      d.aggregate = product ? product_aggs[uni(0, product_aggs.size() - 1)]
                            : semiring_aggs[uni(0, semiring_aggs.size() - 1)];
      any_semiring |= !product;
    }
    q.variables.push_back(std::move(d));
  }
  if (f < n && !any_semiring) q.variables[n - 1].aggregate = semiring_aggs[0];

  const std::size_t k = uni(1, spec.max_factors);
  std::vector<TextTable> tables;
  VarSet covered;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<VarId> vars;
    const std::size_t arity = uni(1, std::min<std::size_t>(3, n));
    while (vars.size() < arity) {
      VarId v = static_cast<VarId>(uni(0, n - 1));
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    }
    for (VarId v : vars) covered.insert(v);
    std::set<std::vector<std::string>> keys;
    const std::size_t rows = uni(0, spec.max_rows);
    TextTable t;
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<std::string> key;
      for (VarId v : vars) key.push_back(std::to_string(uni(0, dom[v] - 1)));
      if (!keys.insert(key).second) continue;
      t.push_back({key, random_value(rng, ctx_name)});
    }
    q.factors.push_back({"F" + std::to_string(i + 1), vars, "F" + std::to_string(i + 1) + ".tsv"});
    tables.push_back(std::move(t));
  }

  for (VarId v = 0; v < n; ++v) {
    auto& d = q.variables[v];
    const bool product = !d.is_free && ctx.aggregate(d.aggregate).is_product;
    if (product || !covered.contains(v) || uni(0, 2) == 0) {
      std::vector<std::string> values;
      for (std::size_t c = 0; c < dom[v]; ++c) values.push_back(std::to_string(c));
      d.domain = std::move(values);
    }
  }
  return build_instance(std::move(q), tables);
}

/// Fresh random data for the query of `inst`. Active domains are pinned and
/// padded to three values so that a one-value domain cannot make unrelated
/// aggregates commute by accident.
inline FAQInstance reroll(std::mt19937_64& rng, const FAQInstance& inst) {
  const std::string ctx = inst.context().name();
  FAQQuery q = inst.query;
  for (auto& v : q.variables) {
    if (v.domain) continue;
    std::vector<std::string> values;
    for (int c = 0; c < 3; ++c) values.push_back(std::to_string(c));
    v.domain = values;
  }
  std::vector<TextTable> tables;
  for (const auto& f : q.factors) {
    TextTable t;
    std::set<std::vector<std::string>> keys;
    const std::size_t rows = std::uniform_int_distribution<std::size_t>(0, 40)(rng);
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<std::string> key;
      for (VarId v : f.vars) {
        const auto& dom = *q.variables[v].domain;
        key.push_back(dom[std::uniform_int_distribution<std::size_t>(0, dom.size() - 1)(rng)]);
      }
      if (keys.insert(key).second) t.push_back({key, random_value(rng, ctx)});
    }
    tables.push_back(std::move(t));
  }
  return build_instance(std::move(q), tables);
}

}  // namespace faq::testing
