#include <doctest.h>

#include <random>

#include "faq/error.hpp"
#include "faq/semiring.hpp"

using namespace faq;

namespace {

bool always_idempotent(const Value&) { return true; }
bool zero_only(const Value& v) { return !v.is_neg_inf() && v.rational() == 0; }

// (naturals, + as the aggregate, max as the product): not a semiring.
SemiringContext nat_plus_max() {
  return SemiringContext("nat-plus-max", Carrier::naturals, &ops::max, Value(0L), Value(0L),
                         {Aggregate{"sum", &ops::add, Value(0L), false, true}}, &zero_only);
}

Value naive_power(const SemiringContext& ctx, const Value& v, std::uint64_t k) {
  Value acc = ctx.one();
  for (std::uint64_t i = 0; i < k; ++i) acc = ctx.mul(acc, v);
  return acc;
}

}  // namespace

TEST_CASE("boolean semiring passes the axiom check") {
  auto r = check_semiring_axioms(builtin_context("bool-or-and"), 100);
  CHECK(r.pass);
  CHECK(r.describe() == "pass");
}

TEST_CASE("max-times over nonnegative rationals passes") {
  CHECK(check_semiring_axioms(builtin_context("max-prod"), 100).pass);
}

TEST_CASE("every shipped context passes") {
  for (const auto& name : builtin_context_names()) {
    CAPTURE(name);
    CHECK(check_semiring_axioms(builtin_context(name), 200).pass);
  }
}

TEST_CASE("naturals with + over max fail distributivity at (1,0,0)") {
  auto ctx = nat_plus_max();
  auto r = check_semiring_axioms(ctx, 100);
  REQUIRE_FALSE(r.pass);
  CHECK(r.axiom == "distributivity");
  CHECK(r.aggregate == "sum");
  REQUIRE(r.witness.size() == 3);
  CHECK(r.witness[0] == Value(1L));
  CHECK(r.witness[1] == Value(0L));
  CHECK(r.witness[2] == Value(0L));
  CHECK(r.describe() == "distributivity fails for aggregate 'sum' at (1, 0, 0)");
}

TEST_CASE("axiom check is deterministic for a seed and rejects a zero budget") {
  auto ctx = nat_plus_max();
  auto a = check_semiring_axioms(ctx, 50, 42);
  auto b = check_semiring_axioms(ctx, 50, 42);
  CHECK(a.describe() == b.describe());
  CHECK_THROWS_AS(check_semiring_axioms(ctx, 0), UserError);
}

TEST_CASE("opaque carriers cannot be sampled") {
  SemiringContext ctx("opaque", Carrier::opaque, &ops::mul, Value(1L), Value(0L),
                      {Aggregate{"sum", &ops::add, Value(0L), false, true}}, &always_idempotent);
  CHECK_THROWS_AS(check_semiring_axioms(ctx, 10), UserError);
}

TEST_CASE("value_power") {
  const auto& nat = builtin_context("nat-sum-prod");
  CHECK(value_power(nat, Value(2L), 10) == Value(1024L));
  CHECK(value_power(nat, Value(7L), 0) == Value(1L));
  CHECK(value_power(builtin_context("max-plus"), Value(5L), 3) == Value(15L));
  CHECK(value_power(builtin_context("max-plus"), Value(7L), 0) == Value(0L));
  CHECK(value_power(builtin_context("bool-or-and"), Value(1L), 1000) == Value(1L));
  CHECK(value_power(builtin_context("max-plus"), Value::neg_infinity(), 9).is_neg_inf());
}

TEST_CASE("value_power equals the naive fold for k <= 64") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-4, 4), den(1, 3);
  for (const auto& name : builtin_context_names()) {
    const auto& ctx = builtin_context(name);
    for (int s = 0; s < 8; ++s) {
      Value v(num(rng), den(rng));
      if (ctx.carrier() == Carrier::booleans) v = Value(s % 2);
      if (ctx.carrier() == Carrier::naturals || ctx.carrier() == Carrier::nonneg_rationals)
        v = Value(std::abs(num(rng)), den(rng));
      if (ctx.carrier() == Carrier::naturals) v = Value(std::abs(num(rng)));
      if (!ctx.contains(v)) continue;
      for (std::uint64_t k = 0; k <= 64; ++k) {
        CAPTURE(name);
        CAPTURE(k);
        const Value expect = naive_power(ctx, v, k);
        CHECK(value_power(ctx, v, k) == expect);
        CHECK(value_power(ctx, v, k, false) == expect);
      }
    }
  }
}

TEST_CASE("context value parsing") {
  const auto& b = builtin_context("bool-or-and");
  CHECK(b.parse_value("true") == Value(1L));
  CHECK(b.parse_value("0") == Value(0L));
  CHECK(b.format_value(Value(1L)) == "true");
  CHECK_THROWS_AS(b.parse_value("2"), UserError);
  CHECK_THROWS_AS(builtin_context("nat-sum-prod").parse_value("-1"), UserError);
  CHECK_THROWS_AS(builtin_context("max-prod").parse_value("x"), UserError);
  CHECK(builtin_context("rat-sum-prod").parse_value("1.25") == Value(5, 4));
  CHECK(builtin_context("max-plus").parse_value("-inf").is_neg_inf());
  CHECK(builtin_context("max-plus").format_value(Value::neg_infinity()) == "-inf");
  CHECK_THROWS_AS(builtin_context("no-such"), UserError);
  CHECK_THROWS_AS(builtin_context("nat-sum-prod").aggregate("min"), UserError);
}
