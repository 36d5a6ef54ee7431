#include "faq/semiring.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

#include "faq/error.hpp"

namespace faq {

std::string_view carrier_name(Carrier c) {
  switch (c) {
    case Carrier::booleans: return "booleans";
    case Carrier::naturals: return "naturals";
    case Carrier::integers: return "integers";
    case Carrier::rationals: return "rationals";
    case Carrier::nonneg_rationals: return "nonnegative rationals";
    case Carrier::extended_rationals: return "rationals with -inf";
    case Carrier::opaque: return "opaque";
  }
  return "?";
}

bool carrier_contains(Carrier c, const Value& v) {
  if (v.is_neg_inf()) return c == Carrier::extended_rationals || c == Carrier::opaque;
  const mpq_class& q = v.rational();
  switch (c) {
    case Carrier::booleans: return q == 0 || q == 1;
    case Carrier::naturals: return v.is_integer() && q >= 0;
    case Carrier::integers: return v.is_integer();
    case Carrier::rationals: return true;
    case Carrier::nonneg_rationals: return q >= 0;
    case Carrier::extended_rationals: return true;
    case Carrier::opaque: return true;
  }
  return false;
}

namespace ops {

Value add(const Value& a, const Value& b) { return Value(a.rational() + b.rational()); }
Value mul(const Value& a, const Value& b) { return Value(a.rational() * b.rational()); }
Value max(const Value& a, const Value& b) { return a < b ? b : a; }
Value logical_or(const Value& a, const Value& b) {
  return Value(long{a.rational() != 0 || b.rational() != 0});
}
Value logical_and(const Value& a, const Value& b) {
  return Value(long{a.rational() != 0 && b.rational() != 0});
}
Value extended_add(const Value& a, const Value& b) {
  if (a.is_neg_inf() || b.is_neg_inf()) return Value::neg_infinity();
  return Value(a.rational() + b.rational());
}

}  // namespace ops

SemiringContext::SemiringContext(std::string name, Carrier carrier, BinaryOp product, Value one,
                                 Value zero, std::vector<Aggregate> aggregates,
                                 ValuePredicate product_idempotent)
    : name_(std::move(name)),
      carrier_(carrier),
      product_(product),
      one_(std::move(one)),
      zero_(std::move(zero)),
      aggregates_(std::move(aggregates)),
      idempotent_(product_idempotent) {
  for (const auto& agg : aggregates_) {
    if (agg.is_product == agg.is_semiring)
      throw UserError("aggregate '" + agg.name + "' of context '" + name_ +
                      "' must be exactly one of product or semiring");
    if (agg.op == nullptr) throw UserError("aggregate '" + agg.name + "' has no operation");
  }
  if (product_ == nullptr) throw UserError("context '" + name_ + "' has no product");
  if (idempotent_ == nullptr) idempotent_ = [](const Value&) { return false; };
}

const Aggregate* SemiringContext::find_aggregate(std::string_view name) const {
  for (const auto& agg : aggregates_)
    if (agg.name == name) return &agg;
  return nullptr;
}

const Aggregate& SemiringContext::aggregate(std::string_view name) const {
  if (const auto* agg = find_aggregate(name)) return *agg;
  throw UserError("context '" + name_ + "' has no aggregate '" + std::string(name) + "'");
}

Value SemiringContext::parse_value(std::string_view text) const {
  Value v;
  if (carrier_ == Carrier::booleans && (text == "true" || text == "false")) {
    v = Value(long{text == "true"});
  } else if (!parse_number(text, v)) {
    throw UserError("unparsable value '" + std::string(text) + "'");
  }
  if (!contains(v))
    throw UserError("value '" + std::string(text) + "' lies outside the carrier (" +
                    std::string(carrier_name(carrier_)) + ") of context '" + name_ + "'");
  return v;
}

std::string SemiringContext::format_value(const Value& v) const {
  if (carrier_ == Carrier::booleans) return v.rational() != 0 ? "true" : "false";
  return v.str();
}

namespace {

bool zero_or_one(const Value& v) {
  return !v.is_neg_inf() && (v.rational() == 0 || v.rational() == 1);
}

Aggregate semiring_aggregate(std::string name, BinaryOp op, Value identity) {
  return Aggregate{std::move(name), op, std::move(identity), false, true};
}

Aggregate product_aggregate(std::string name, BinaryOp op, Value one) {
  return Aggregate{std::move(name), op, std::move(one), true, false};
}

std::vector<SemiringContext> make_builtins() {
  std::vector<SemiringContext> out;
  out.emplace_back("bool-or-and", Carrier::booleans, &ops::logical_and, Value(1L), Value(0L),
                   std::vector<Aggregate>{
                       semiring_aggregate("or", &ops::logical_or, Value(0L)),
                       semiring_aggregate("max", &ops::logical_or, Value(0L)),
                       product_aggregate("and", &ops::logical_and, Value(1L)),
                       product_aggregate("prod", &ops::logical_and, Value(1L)),
                   },
                   [](const Value&) { return true; });
  out.emplace_back("nat-sum-prod", Carrier::naturals, &ops::mul, Value(1L), Value(0L),
                   std::vector<Aggregate>{
                       semiring_aggregate("sum", &ops::add, Value(0L)),
                       semiring_aggregate("max", &ops::max, Value(0L)),
                       product_aggregate("prod", &ops::mul, Value(1L)),
                   },
                   &zero_or_one);
  out.emplace_back("rat-sum-prod", Carrier::rationals, &ops::mul, Value(1L), Value(0L),
                   std::vector<Aggregate>{
                       semiring_aggregate("sum", &ops::add, Value(0L)),
                       product_aggregate("prod", &ops::mul, Value(1L)),
                   },
                   &zero_or_one);
  out.emplace_back("max-prod", Carrier::nonneg_rationals, &ops::mul, Value(1L), Value(0L),
                   std::vector<Aggregate>{
                       semiring_aggregate("max", &ops::max, Value(0L)),
                       semiring_aggregate("sum", &ops::add, Value(0L)),
                       product_aggregate("prod", &ops::mul, Value(1L)),
                   },
                   &zero_or_one);
  // max/plus: the product is +, its zero is -inf and its one is 0.
  out.emplace_back("max-plus", Carrier::extended_rationals, &ops::extended_add, Value(0L),
                   Value::neg_infinity(),
                   std::vector<Aggregate>{
                       semiring_aggregate("max", &ops::max, Value::neg_infinity()),
                       product_aggregate("prod", &ops::extended_add, Value(0L)),
                   },
                   [](const Value& v) { return v.is_neg_inf() || v.rational() == 0; });
  return out;
}

const std::vector<SemiringContext>& builtins() {
  static const std::vector<SemiringContext> contexts = make_builtins();
  return contexts;
}

}  // namespace

const SemiringContext& builtin_context(std::string_view name) {
  for (const auto& ctx : builtins())
    if (ctx.name() == name) return ctx;
  throw UserError("unknown context '" + std::string(name) + "'");
}

std::vector<std::string> builtin_context_names() {
  std::vector<std::string> names;
  for (const auto& ctx : builtins()) names.push_back(ctx.name());
  return names;
}

std::string AxiomReport::describe() const {
  if (pass) return "pass";
  std::ostringstream os;
  os << axiom << " fails for aggregate '" << aggregate << "' at (";
  for (std::size_t i = 0; i < witness.size(); ++i) os << (i ? ", " : "") << witness[i].str();
  os << ")";
  return os.str();
}

namespace {

std::vector<Value> value_grid(Carrier c) {
  switch (c) {
    case Carrier::booleans: return {Value(0L), Value(1L)};
    case Carrier::naturals: return {Value(0L), Value(1L), Value(2L)};
    case Carrier::integers: return {Value(0L), Value(1L), Value(2L), Value(-1L), Value(-2L)};
    case Carrier::rationals: return {Value(0L), Value(1L), Value(2L), Value(-1L), Value(1, 2)};
    case Carrier::nonneg_rationals: return {Value(0L), Value(1L), Value(2L), Value(1, 2)};
    case Carrier::extended_rationals:
      return {Value::neg_infinity(), Value(0L), Value(1L), Value(-1L), Value(1, 2)};
    case Carrier::opaque: break;
  }
  throw UserError("unsupported carrier for axiom checking: " + std::string(carrier_name(c)));
}

Value random_value(Carrier c, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> small(0, 9);
  std::uniform_int_distribution<long> signed_small(-9, 9);
  std::uniform_int_distribution<long> den(1, 6);
  switch (c) {
    case Carrier::booleans: return Value(small(rng) % 2);
    case Carrier::naturals: return Value(small(rng));
    case Carrier::integers: return Value(signed_small(rng));
    case Carrier::rationals: return Value(signed_small(rng), den(rng));
    case Carrier::nonneg_rationals: return Value(small(rng), den(rng));
    case Carrier::extended_rationals:
      if (small(rng) == 0) return Value::neg_infinity();
      return Value(signed_small(rng), den(rng));
    case Carrier::opaque: break;
  }
  throw UserError("unsupported carrier for axiom checking: " + std::string(carrier_name(c)));
}

class AxiomChecker {
 public:
  AxiomChecker(const SemiringContext& ctx, std::size_t budget, std::uint64_t seed)
      : ctx_(ctx), grid_(value_grid(ctx.carrier())), budget_(budget), seed_(seed) {}

  // Runs `holds` over the exhaustive grid of `arity`-tuples and then over
  // random tuples; fills `report` with the first failure.
  bool check(const std::string& aggregate, const std::string& axiom, std::size_t arity,
             const std::function<bool(const std::vector<Value>&)>& holds, AxiomReport& report) {
    std::vector<Value> tuple(arity);
    std::vector<std::size_t> idx(arity, 0);
    while (true) {
      for (std::size_t i = 0; i < arity; ++i) tuple[i] = grid_[idx[i]];
      if (!holds(tuple)) return fail(aggregate, axiom, tuple, report);
      bool wrapped = true;
      for (std::size_t pos = arity; pos-- > 0;) {
        if (++idx[pos] < grid_.size()) {
          wrapped = false;
          break;
        }
        idx[pos] = 0;
      }
      if (wrapped) break;
    }
    std::mt19937_64 rng(seed_ ^ std::hash<std::string>{}(aggregate + "/" + axiom));
    for (std::size_t s = 0; s < budget_; ++s) {
      for (auto& v : tuple) v = random_value(ctx_.carrier(), rng);
      if (!holds(tuple)) return fail(aggregate, axiom, tuple, report);
    }
    return true;
  }

 private:
  static bool fail(const std::string& aggregate, const std::string& axiom,
                   const std::vector<Value>& tuple, AxiomReport& report) {
    report.pass = false;
    report.aggregate = aggregate;
    report.axiom = axiom;
    report.witness = tuple;
    return false;
  }

  const SemiringContext& ctx_;
  std::vector<Value> grid_;
  std::size_t budget_;
  std::uint64_t seed_;
};

}  // namespace

AxiomReport check_semiring_axioms(const SemiringContext& ctx, std::size_t sample_budget,
                                  std::uint64_t seed) {
  if (sample_budget < 1) throw UserError("sample budget must be at least 1");
  AxiomChecker checker(ctx, sample_budget, seed);
  AxiomReport report;
  const auto& mul = ctx.product();
  const Value& one = ctx.one();
  const Value& zero = ctx.zero();

  for (const auto& agg : ctx.aggregates()) {
    const auto& add = agg.op;
    if (agg.is_product) {
      if (!checker.check(agg.name, "product aggregate coincides with product", 2,
                         [&](const auto& t) { return add(t[0], t[1]) == mul(t[0], t[1]); },
                         report))
        return report;
      continue;
    }
    using T = std::vector<Value>;
    const std::pair<std::string, std::pair<std::size_t, std::function<bool(const T&)>>> axioms[] = {
        {"aggregate closure",
         {2, [&](const T& t) { return ctx.contains(add(t[0], t[1])); }}},
        {"aggregate commutativity",
         {2, [&](const T& t) { return add(t[0], t[1]) == add(t[1], t[0]); }}},
        {"aggregate associativity",
         {3, [&](const T& t) { return add(add(t[0], t[1]), t[2]) == add(t[0], add(t[1], t[2])); }}},
        {"aggregate identity",
         {1, [&](const T& t) { return add(t[0], zero) == t[0] && add(zero, t[0]) == t[0]; }}},
        {"product closure",
         {2, [&](const T& t) { return ctx.contains(mul(t[0], t[1])); }}},
        {"product commutativity",
         {2, [&](const T& t) { return mul(t[0], t[1]) == mul(t[1], t[0]); }}},
        {"product associativity",
         {3, [&](const T& t) { return mul(mul(t[0], t[1]), t[2]) == mul(t[0], mul(t[1], t[2])); }}},
        {"product identity",
         {1, [&](const T& t) { return mul(t[0], one) == t[0] && mul(one, t[0]) == t[0]; }}},
        {"distributivity",
         {3,
          [&](const T& t) {
            return mul(t[0], add(t[1], t[2])) == add(mul(t[0], t[1]), mul(t[0], t[2]));
          }}},
        {"annihilation",
         {1, [&](const T& t) { return mul(t[0], zero) == zero && mul(zero, t[0]) == zero; }}},
    };
    for (const auto& [name, spec] : axioms)
      if (!checker.check(agg.name, name, spec.first, spec.second, report)) return report;
  }
  return report;
}

Value value_power(const SemiringContext& ctx, const Value& v, std::uint64_t k,
                  bool idempotence_shortcut) {
  if (k == 0) return ctx.one();
  if (idempotence_shortcut && ctx.product_idempotent(v)) return v;
  Value result = ctx.one();
  Value base = v;
  while (true) {
    if (k & 1U) result = ctx.mul(result, base);
    k >>= 1U;
    if (k == 0) break;
    base = ctx.mul(base, base);
  }
  return result;
}

}  // namespace faq
