#include "faq/factor.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "faq/error.hpp"

namespace faq {

VariableDomain VariableDomain::explicit_domain(VarId var, std::vector<Code> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return {var, Kind::explicit_values, std::move(values)};
}

VariableDomain VariableDomain::explicit_range(VarId var, std::size_t size) {
  std::vector<Code> values(size);
  std::iota(values.begin(), values.end(), Code{0});
  return {var, Kind::explicit_values, std::move(values)};
}

namespace {

// Sorts rows of a flat key matrix; returns the permutation.
std::vector<std::size_t> sorted_order(const std::vector<Code>& keys, std::size_t arity,
                                      std::size_t rows) {
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (arity == 0) return order;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(keys.begin() + a * arity, keys.begin() + (a + 1) * arity,
                                        keys.begin() + b * arity, keys.begin() + (b + 1) * arity);
  });
  return order;
}

bool same_key(const std::vector<Code>& keys, std::size_t arity, std::size_t a, std::size_t b) {
  return std::equal(keys.begin() + a * arity, keys.begin() + (a + 1) * arity,
                    keys.begin() + b * arity);
}

std::string key_text(std::span<const Code> key) {
  std::string s = "(";
  for (std::size_t i = 0; i < key.size(); ++i) s += (i ? "," : "") + std::to_string(key[i]);
  return s + ")";
}

}  // namespace

Factor Factor::from_canonical(VarSet edge, std::vector<Code> keys, std::vector<Value> values,
                              const SemiringContext& context) {
  const std::size_t arity = edge.size();
  const std::size_t rows = values.size();
  if (keys.size() != rows * arity) throw UserError("factor key matrix does not match arity");
  if (arity == 0 && rows > 1) throw UserError("duplicate key () in scalar factor");

  auto order = sorted_order(keys, arity, rows);
  Factor f;
  f.edge_ = edge;
  f.vars_ = edge.to_vector();
  f.ctx_ = &context;
  f.keys_.reserve(keys.size());
  f.values_.reserve(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t r = order[i];
    if (i > 0 && same_key(keys, arity, order[i - 1], r))
      throw UserError("duplicate key " +
                      key_text({keys.data() + r * arity, arity}) + " in factor");
    if (!context.contains(values[r]))
      throw UserError("value " + values[r].str() + " outside the carrier of context '" +
                      context.name() + "'");
    if (context.is_zero(values[r])) continue;
    f.keys_.insert(f.keys_.end(), keys.begin() + r * arity, keys.begin() + (r + 1) * arity);
    f.values_.push_back(std::move(values[r]));
  }
  return f;
}

Factor Factor::build(std::span<const VarId> edge, std::vector<RawRow> rows,
                     const SemiringContext& context) {
  VarSet set;
  for (VarId v : edge) {
    if (v >= kMaxVariables) throw UserError("variable id out of range");
    if (set.contains(v)) throw UserError("variable repeated in factor edge");
    set.insert(v);
  }
  // Column permutation from caller order to ascending variable order.
  std::vector<std::size_t> perm(edge.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return edge[a] < edge[b]; });

  std::vector<Code> keys;
  std::vector<Value> values;
  keys.reserve(rows.size() * edge.size());
  values.reserve(rows.size());
  for (auto& row : rows) {
    if (row.key.size() != edge.size())
      throw UserError("row arity " + std::to_string(row.key.size()) + " does not match edge arity " +
                      std::to_string(edge.size()));
    for (std::size_t c : perm) keys.push_back(row.key[c]);
    values.push_back(std::move(row.value));
  }
  return from_canonical(set, std::move(keys), std::move(values), context);
}

Factor Factor::scalar(const Value& v, const SemiringContext& context) {
  return from_canonical(VarSet{}, {}, {v}, context);
}

int Factor::column_of(VarId v) const {
  auto it = std::find(vars_.begin(), vars_.end(), v);
  return it == vars_.end() ? -1 : static_cast<int>(it - vars_.begin());
}

const Value* Factor::lookup(std::span<const Code> key) const {
  const std::size_t a = arity();
  if (key.size() != a) return nullptr;
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    auto row = this->key(mid);
    if (std::lexicographical_compare(row.begin(), row.end(), key.begin(), key.end()))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < size() && std::equal(key.begin(), key.end(), this->key(lo).begin())) return &values_[lo];
  return nullptr;
}

namespace {

// Keys of f restricted to the columns in `keep`, one per row.
std::vector<Code> restricted_keys(const Factor& f, const std::vector<std::size_t>& keep) {
  std::vector<Code> out;
  out.reserve(f.size() * keep.size());
  for (std::size_t r = 0; r < f.size(); ++r) {
    auto key = f.key(r);
    for (std::size_t c : keep) out.push_back(key[c]);
  }
  return out;
}

std::vector<std::size_t> columns_of(const Factor& f, VarSet subset) {
  std::vector<std::size_t> cols;
  for (VarId v : subset) cols.push_back(static_cast<std::size_t>(f.column_of(v)));
  return cols;
}

}  // namespace

Factor indicator_projection(const Factor& f, VarSet target) {
  if (!target.subset_of(f.edge()))
    throw UserError("indicator projection target is not a subset of the factor edge");
  const auto cols = columns_of(f, target);
  const std::size_t arity = cols.size();
  auto keys = restricted_keys(f, cols);
  auto order = sorted_order(keys, arity, f.size());

  std::vector<Code> out_keys;
  std::vector<Value> out_values;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0 && same_key(keys, arity, order[i - 1], order[i])) continue;
    out_keys.insert(out_keys.end(), keys.begin() + order[i] * arity,
                    keys.begin() + (order[i] + 1) * arity);
    out_values.push_back(f.context().one());
  }
  return Factor::from_canonical(target, std::move(out_keys), std::move(out_values), f.context());
}

Factor semiring_marginalize(const Factor& f, VarId var, const Aggregate& aggregate) {
  if (!f.edge().contains(var)) throw UserError("marginalized variable is not in the factor edge");
  if (!aggregate.is_semiring)
    throw UserError("aggregate '" + aggregate.name + "' is a product aggregate; use product_marginalize");
  VarSet residual = f.edge();
  residual.erase(var);
  const auto cols = columns_of(f, residual);
  const std::size_t arity = cols.size();
  auto keys = restricted_keys(f, cols);
  auto order = sorted_order(keys, arity, f.size());

  std::vector<Code> out_keys;
  std::vector<Value> out_values;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t r = order[i];
    if (i > 0 && same_key(keys, arity, order[i - 1], r)) {
      out_values.back() = aggregate.op(out_values.back(), f.value(r));
      continue;
    }
    out_keys.insert(out_keys.end(), keys.begin() + r * arity, keys.begin() + (r + 1) * arity);
    out_values.push_back(f.value(r));
  }
  return Factor::from_canonical(residual, std::move(out_keys), std::move(out_values), f.context());
}

Factor product_marginalize(const Factor& f, VarId var, const VariableDomain& domain) {
  if (!f.edge().contains(var)) throw UserError("marginalized variable is not in the factor edge");
  if (!domain.is_explicit())
    throw UserError("product aggregation requires an explicit variable domain");
  const auto& ctx = f.context();
  VarSet residual = f.edge();
  residual.erase(var);
  const auto cols = columns_of(f, residual);
  const std::size_t arity = cols.size();
  const auto var_col = static_cast<std::size_t>(f.column_of(var));
  auto keys = restricted_keys(f, cols);
  auto order = sorted_order(keys, arity, f.size());

  std::vector<Code> out_keys;
  std::vector<Value> out_values;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && same_key(keys, arity, order[i], order[j])) ++j;
    // Rows i..j share a residual key; the group is complete only if its
    // var-values are exactly the domain (rows are unique per key).
    std::vector<Code> seen;
    Value acc = ctx.one();
    for (std::size_t k = i; k < j; ++k) {
      const Code x = f.key(order[k])[var_col];
      if (!std::binary_search(domain.values.begin(), domain.values.end(), x))
        throw UserError("factor value code " + std::to_string(x) +
                        " lies outside the declared variable domain");
      seen.push_back(x);
      acc = ctx.mul(acc, f.value(order[k]));
    }
    if (seen.size() == domain.values.size()) {
      out_keys.insert(out_keys.end(), keys.begin() + order[i] * arity,
                      keys.begin() + (order[i] + 1) * arity);
      out_values.push_back(std::move(acc));
    }
    i = j;
  }
  return Factor::from_canonical(residual, std::move(out_keys), std::move(out_values), ctx);
}

Factor power_factor(const Factor& f, std::uint64_t exponent, bool idempotence_shortcut) {
  if (exponent < 1) throw UserError("power factor exponent must be at least 1");
  const auto& ctx = f.context();
  if (exponent == 1) return f;
  if (idempotence_shortcut &&
      std::all_of(f.values().begin(), f.values().end(),
                  [&](const Value& v) { return ctx.product_idempotent(v); }))
    return f;
  std::vector<Value> values;
  values.reserve(f.size());
  for (const auto& v : f.values()) values.push_back(value_power(ctx, v, exponent, idempotence_shortcut));
  return Factor::from_canonical(f.edge(), f.flat_keys(), std::move(values), ctx);
}

}  // namespace faq
