#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "faq/value.hpp"

namespace faq {

/// Carrier set D of a context.
enum class Carrier {
  booleans,          // {0, 1}
  naturals,          // nonnegative integers
  integers,
  rationals,
  nonneg_rationals,
  extended_rationals,  // rationals with -inf adjoined
  opaque,            // user-built context with no value sampler
};

std::string_view carrier_name(Carrier c);
bool carrier_contains(Carrier c, const Value& v);

using BinaryOp = Value (*)(const Value&, const Value&);
using ValuePredicate = bool (*)(const Value&);

/// One named aggregate operator, usable as the per-variable aggregate of a
/// bound variable.
struct Aggregate {
  std::string name;
  BinaryOp op = nullptr;
  Value identity;
  bool is_product = false;   // op coincides with the context product
  bool is_semiring = false;  // (D, op, product) is a commutative semiring
};

/// Value domain, product, and the aggregates a query may use. Immutable after
/// construction; the built-in contexts are process-wide singletons.
class SemiringContext {
 public:
  SemiringContext(std::string name, Carrier carrier, BinaryOp product, Value one, Value zero,
                  std::vector<Aggregate> aggregates, ValuePredicate product_idempotent);

  const std::string& name() const { return name_; }
  Carrier carrier() const { return carrier_; }
  const Value& one() const { return one_; }
  const Value& zero() const { return zero_; }
  const std::vector<Aggregate>& aggregates() const { return aggregates_; }

  Value mul(const Value& a, const Value& b) const { return product_(a, b); }
  BinaryOp product() const { return product_; }
  bool is_zero(const Value& v) const { return v == zero_; }
  bool contains(const Value& v) const { return carrier_contains(carrier_, v); }

  /// Whether v lies in the subset where v (x) v = v.
  bool product_idempotent(const Value& v) const { return idempotent_(v); }

  /// nullptr when the context has no aggregate of that name.
  const Aggregate* find_aggregate(std::string_view name) const;
  const Aggregate& aggregate(std::string_view name) const;  // throws UserError

  /// Parses a data value (`true`/`false` accepted for booleans) and checks
  /// carrier membership; throws UserError otherwise.
  Value parse_value(std::string_view text) const;
  /// Inverse of parse_value for printing output.
  std::string format_value(const Value& v) const;

 private:
  std::string name_;
  Carrier carrier_;
  BinaryOp product_;
  Value one_;
  Value zero_;
  std::vector<Aggregate> aggregates_;
  ValuePredicate idempotent_;
};

/// Built-in contexts by query-file name: bool-or-and, nat-sum-prod,
/// rat-sum-prod, max-prod, max-plus. Throws UserError for unknown names.
const SemiringContext& builtin_context(std::string_view name);
std::vector<std::string> builtin_context_names();

// Primitive operations, exposed so callers can assemble custom contexts.
namespace ops {
Value add(const Value& a, const Value& b);
Value mul(const Value& a, const Value& b);
Value max(const Value& a, const Value& b);
Value logical_or(const Value& a, const Value& b);
Value logical_and(const Value& a, const Value& b);
Value extended_add(const Value& a, const Value& b);  // -inf absorbs
}  // namespace ops

struct AxiomReport {
  bool pass = true;
  std::string aggregate;  // offending aggregate
  std::string axiom;      // e.g. "distributivity"
  std::vector<Value> witness;

  std::string describe() const;
};

/// Checks the commutative-semiring axioms for every aggregate flagged
/// is_semiring: both monoids (commutativity, associativity, identity),
/// distributivity of the product over the aggregate, and annihilation by 0.
/// Each axiom is exercised over an exhaustive grid of small carrier values
/// and then `sample_budget` random tuples. Deterministic for a fixed seed.
AxiomReport check_semiring_axioms(const SemiringContext& context, std::size_t sample_budget,
                                  std::uint64_t seed = 0x5eed);

/// k-fold product power of v with v^0 = 1, by repeated squaring. Returns v
/// directly when k >= 1 and v is product-idempotent (unless the shortcut is
/// disabled).
Value value_power(const SemiringContext& context, const Value& v, std::uint64_t k,
                  bool idempotence_shortcut = true);

}  // namespace faq
