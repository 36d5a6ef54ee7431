#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "faq/semiring.hpp"
#include "faq/var_set.hpp"

namespace faq {

/// Dictionary-encoded variable value.
using Code = std::uint32_t;

struct VariableDomain {
  enum class Kind { explicit_values, active };

  VarId var = 0;
  Kind kind = Kind::active;
  std::vector<Code> values;  // sorted; meaningful for explicit domains

  static VariableDomain explicit_domain(VarId var, std::vector<Code> values);
  static VariableDomain explicit_range(VarId var, std::size_t size);  // codes 0..size-1
  static VariableDomain active_domain(VarId var) { return {var, Kind::active, {}}; }

  bool is_explicit() const { return kind == Kind::explicit_values; }
};

/// Raw row as supplied by a caller: key columns in the caller's edge order.
struct RawRow {
  std::vector<Code> key;
  Value value;
};

/// Sparse listing representation of a factor psi_S: the nonzero rows
/// [x_S, psi_S(x_S)], columns in ascending variable id, rows sorted
/// lexicographically. Absent keys have value 0. Immutable once built.
class Factor {
 public:
  Factor() = default;

  /// Canonicalizes rows given in `edge` column order: drops zero values,
  /// rejects duplicate keys, arity mismatches, repeated edge variables and
  /// values outside the carrier (UserError).
  static Factor build(std::span<const VarId> edge, std::vector<RawRow> rows,
                      const SemiringContext& context);

  /// Rows already in canonical column order; still validated and sorted.
  static Factor from_canonical(VarSet edge, std::vector<Code> keys, std::vector<Value> values,
                               const SemiringContext& context);

  /// Scalar factor over the empty edge (no row when v is zero).
  static Factor scalar(const Value& v, const SemiringContext& context);

  VarSet edge() const { return edge_; }
  const std::vector<VarId>& vars() const { return vars_; }
  std::size_t arity() const { return vars_.size(); }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const SemiringContext& context() const { return *ctx_; }

  std::span<const Code> key(std::size_t row) const {
    return {keys_.data() + row * arity(), arity()};
  }
  const Value& value(std::size_t row) const { return values_[row]; }
  const std::vector<Code>& flat_keys() const { return keys_; }
  const std::vector<Value>& values() const { return values_; }

  /// Column of `v` within a key, or -1.
  int column_of(VarId v) const;

  /// Value at a canonical-order key; nullptr when absent (i.e. zero).
  const Value* lookup(std::span<const Code> key) const;

  friend bool operator==(const Factor& a, const Factor& b) {
    return a.edge_ == b.edge_ && a.keys_ == b.keys_ && a.values_ == b.values_;
  }

 private:
  VarSet edge_;
  std::vector<VarId> vars_;
  std::vector<Code> keys_;
  std::vector<Value> values_;
  const SemiringContext* ctx_ = nullptr;
};

/// Number of nonzero points.
inline std::size_t factor_size(const Factor& f) { return f.size(); }

/// 0/1-valued factor over `target` marking keys that some stored row of f
/// extends. Throws UserError when target is not a subset of f's edge.
Factor indicator_projection(const Factor& f, VarSet target);

/// Folds `var` away with a semiring aggregate.
Factor semiring_marginalize(const Factor& f, VarId var, const Aggregate& aggregate);

/// For each residual key, the product over every value of `domain` of
/// f(residual, x). Residual keys missing any domain value yield 0 and are
/// dropped. Requires an explicit domain.
Factor product_marginalize(const Factor& f, VarId var, const VariableDomain& domain);

/// Raises every value to the `exponent`-th product power. Returns f unchanged
/// when every value is product-idempotent and the shortcut is enabled.
Factor power_factor(const Factor& f, std::uint64_t exponent, bool idempotence_shortcut = true);

}  // namespace faq
