#include "faq/oracle.hpp"

#include <limits>
#include <optional>

#include "faq/error.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace faq {

namespace {

class Enumerator {
 public:
  explicit Enumerator(const FAQInstance& instance)
      : instance_(instance), ctx_(instance.context()), n_(instance.query.num_vars()) {
    for (VarId v = 0; v < n_; ++v) sizes_.push_back(instance.dictionaries.at(v).size());
    for (VarId v = 0; v < n_; ++v)
      aggregates_.push_back(instance.query.variables[v].is_free ? nullptr : &instance.query.aggregate_of(v));
  }

  std::size_t domain_size(VarId v) const { return sizes_[v]; }

  // Folds the aggregates of variables level..n-1 under the assignment prefix.
  Value fold(std::vector<Code>& codes, std::size_t level) const {
    if (level == n_) return leaf(codes);
    const Aggregate& agg = *aggregates_[level];
    Value acc = agg.identity;
    for (Code c = 0; c < sizes_[level]; ++c) {
      codes[level] = c;
      acc = agg.op(acc, fold(codes, level + 1));
    }
    return acc;
  }

  const Aggregate& aggregate(VarId v) const { return *aggregates_[v]; }

 private:
  Value leaf(const std::vector<Code>& codes) const {
    Value product = ctx_.one();
    std::vector<Code> key;
    for (const Factor& f : instance_.factors) {
      key.clear();
      for (VarId v : f.vars()) key.push_back(codes[v]);
      const Value* val = f.lookup(key);
      if (val == nullptr) return ctx_.zero();
      product = ctx_.mul(product, *val);
    }
    return product;
  }

  const FAQInstance& instance_;
  const SemiringContext& ctx_;
  std::size_t n_;
  std::vector<std::size_t> sizes_;
  std::vector<const Aggregate*> aggregates_;
};

}  // namespace

std::uint64_t oracle_assignment_count(const FAQInstance& instance) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  for (const auto& d : instance.dictionaries)
    if (d.size() == 0) return 0;
  std::uint64_t total = 1;
  for (const auto& d : instance.dictionaries) {
    if (total > kMax / d.size()) return kMax;
    total *= d.size();
  }
  return total;
}

Factor brute_force_eval(const FAQInstance& instance, OracleOptions options) {
  const auto& query = instance.query;
  query.validate();
  if (instance.factors.size() != query.factors.size())
    throw InternalError("instance factors do not match the factor declarations");
  const std::uint64_t count = oracle_assignment_count(instance);
  if (count > options.max_assignments)
    throw UserError("oracle refuses to enumerate " + std::to_string(count) + " assignments (limit " +
                    std::to_string(options.max_assignments) + ")");

  const auto& ctx = instance.context();
  const Enumerator en(instance);
  const std::size_t n = query.num_vars();
  const std::size_t f = query.num_free();
  VarSet free;
  for (VarId v = 0; v < f; ++v) free.insert(v);

  if (f == 0) {
    if (n == 0) {
      std::vector<Code> none;
      return Factor::scalar(en.fold(none, 0), ctx);
    }
    // Split the outermost fold across threads, then combine in order.
    const std::size_t d = en.domain_size(0);
    std::vector<Value> parts(d);
#pragma omp parallel for schedule(dynamic) if (options.parallel)
    for (std::size_t c = 0; c < d; ++c) {
      std::vector<Code> codes(n, 0);
      codes[0] = static_cast<Code>(c);
      parts[c] = en.fold(codes, 1);
    }
    const Aggregate& agg = en.aggregate(0);
    Value acc = agg.identity;
    for (const auto& p : parts) acc = agg.op(acc, p);
    return Factor::scalar(acc, ctx);
  }

  std::uint64_t total = 1;
  for (VarId v = 0; v < f; ++v) total *= en.domain_size(v);
  std::vector<std::optional<Value>> out(total);
#pragma omp parallel for schedule(dynamic, 64) if (options.parallel)
  for (std::uint64_t i = 0; i < total; ++i) {
    std::vector<Code> codes(n, 0);
    std::uint64_t rest = i;
    for (std::size_t v = f; v-- > 0;) {
      codes[v] = static_cast<Code>(rest % en.domain_size(static_cast<VarId>(v)));
      rest /= en.domain_size(static_cast<VarId>(v));
    }
    Value val = en.fold(codes, f);
    if (!ctx.is_zero(val)) out[i] = std::move(val);
  }

  std::vector<Code> keys;
  std::vector<Value> values;
  for (std::uint64_t i = 0; i < total; ++i) {
    if (!out[i]) continue;
    const std::size_t at = keys.size();
    keys.resize(at + f);
    std::uint64_t rest = i;
    for (std::size_t v = f; v-- > 0;) {
      keys[at + v] = static_cast<Code>(rest % en.domain_size(static_cast<VarId>(v)));
      rest /= en.domain_size(static_cast<VarId>(v));
    }
    values.push_back(std::move(*out[i]));
  }
  return Factor::from_canonical(free, std::move(keys), std::move(values), ctx);
}

}  // namespace faq
