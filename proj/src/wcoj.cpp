#include "faq/wcoj.hpp"

#include <algorithm>
#include <numeric>

#include "faq/error.hpp"

namespace faq {

namespace {

// A participant's rows re-sorted by the join's variable order, so that every
// prefix of bound variables selects a contiguous range.
struct TrieView {
  std::size_t arity = 0;
  std::vector<Code> keys;
  std::vector<const Value*> values;

  Code at(std::size_t row, std::size_t col) const { return keys[row * arity + col]; }
};

struct Range {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

class Joiner {
 public:
  Joiner(std::span<const Factor* const> factors, std::span<const VarId> order,
         const SemiringContext& ctx)
      : ctx_(ctx), order_(order.begin(), order.end()) {
    std::vector<int> level_of(kMaxVariables, -1);
    for (std::size_t l = 0; l < order_.size(); ++l) level_of[order_[l]] = static_cast<int>(l);
    at_level_.resize(order_.size());
    column_at_level_.resize(order_.size());

    for (const Factor* f : factors) {
      if (f->arity() == 0) continue;
      const std::size_t v = views_.size();
      TrieView view;
      view.arity = f->arity();
      // Columns of f sorted by join level.
      std::vector<std::size_t> cols(f->arity());
      std::iota(cols.begin(), cols.end(), std::size_t{0});
      std::sort(cols.begin(), cols.end(), [&](std::size_t a, std::size_t b) {
        return level_of[f->vars()[a]] < level_of[f->vars()[b]];
      });
      for (std::size_t c = 0; c < cols.size(); ++c) {
        const auto level = static_cast<std::size_t>(level_of[f->vars()[cols[c]]]);
        at_level_[level].push_back(v);
        column_at_level_[level].push_back(c);
      }
      std::vector<std::size_t> rows(f->size());
      std::iota(rows.begin(), rows.end(), std::size_t{0});
      std::sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
        auto ka = f->key(a), kb = f->key(b);
        for (std::size_t c : cols)
          if (ka[c] != kb[c]) return ka[c] < kb[c];
        return false;
      });
      view.keys.reserve(f->size() * view.arity);
      for (std::size_t r : rows) {
        auto k = f->key(r);
        for (std::size_t c : cols) view.keys.push_back(k[c]);
        view.values.push_back(&f->value(r));
      }
      views_.push_back(std::move(view));
    }
    range_.resize(views_.size());
    for (std::size_t v = 0; v < views_.size(); ++v) range_[v] = {0, views_[v].values.size()};
    binding_.resize(order_.size());
  }

  void run() { search(0); }

  JoinStats stats;
  std::vector<Code> out_keys;  // join order
  std::vector<Value> out_values;

 private:
  // First row in [from, hi) whose column value is >= target (gallop).
  std::size_t seek(const TrieView& view, std::size_t col, std::size_t from, std::size_t hi,
                   Code target) const {
    if (from >= hi || view.at(from, col) >= target) return from;
    std::size_t step = 1, lo = from;  // invariant: at(lo) < target
    while (lo + step < hi && view.at(lo + step, col) < target) {
      lo += step;
      step <<= 1;
    }
    std::size_t top = std::min(lo + step, hi);
    // at(lo) < target; answer in (lo, top]
    std::size_t a = lo + 1, b = top;
    while (a < b) {
      std::size_t mid = a + (b - a) / 2;
      if (view.at(mid, col) < target)
        a = mid + 1;
      else
        b = mid;
    }
    return a;
  }

  void emit() {
    Value product = ctx_.one();
    for (std::size_t v = 0; v < views_.size(); ++v) {
      if (range_[v].hi - range_[v].lo != 1) throw InternalError("join leaf does not select a single row");
      product = ctx_.mul(product, *views_[v].values[range_[v].lo]);
    }
    ++stats.output_rows;
    if (ctx_.is_zero(product)) return;
    out_keys.insert(out_keys.end(), binding_.begin(), binding_.end());
    out_values.push_back(std::move(product));
  }

  void search(std::size_t level) {
    if (level == order_.size()) {
      emit();
      return;
    }
    const auto& parts = at_level_[level];
    const auto& cols = column_at_level_[level];
    const std::size_t k = parts.size();
    std::vector<Range> saved(k);
    std::vector<std::size_t> pos(k);
    for (std::size_t i = 0; i < k; ++i) {
      saved[i] = range_[parts[i]];
      pos[i] = saved[i].lo;
      if (pos[i] >= saved[i].hi) return;
    }
    std::vector<std::size_t> ends(k);
    while (true) {
      Code target = 0;
      for (std::size_t i = 0; i < k; ++i)
        target = std::max(target, views_[parts[i]].at(pos[i], cols[i]));
      bool aligned = true;
      for (std::size_t i = 0; i < k; ++i) {
        const auto& view = views_[parts[i]];
        pos[i] = seek(view, cols[i], pos[i], saved[i].hi, target);
        if (pos[i] == saved[i].hi) {
          restore(parts, saved);
          return;
        }
        if (view.at(pos[i], cols[i]) != target) aligned = false;
      }
      if (!aligned) continue;

      ++stats.expanded_bindings;
      binding_[level] = target;
      for (std::size_t i = 0; i < k; ++i) {
        const auto& view = views_[parts[i]];
        ends[i] = seek(view, cols[i], pos[i], saved[i].hi, target + 1);
        range_[parts[i]] = {pos[i], ends[i]};
      }
      search(level + 1);
      bool exhausted = false;
      for (std::size_t i = 0; i < k; ++i) {
        pos[i] = ends[i];
        exhausted |= pos[i] == saved[i].hi;
      }
      if (exhausted) {
        restore(parts, saved);
        return;
      }
    }
  }

  void restore(const std::vector<std::size_t>& parts, const std::vector<Range>& saved) {
    for (std::size_t i = 0; i < parts.size(); ++i) range_[parts[i]] = saved[i];
  }

  const SemiringContext& ctx_;
  std::vector<VarId> order_;
  std::vector<TrieView> views_;
  std::vector<std::vector<std::size_t>> at_level_;         // participating views per level
  std::vector<std::vector<std::size_t>> column_at_level_;  // their column at that level
  std::vector<Range> range_;
  std::vector<Code> binding_;
};

}  // namespace

JoinResult generic_join(std::span<const Factor* const> factors, std::span<const VarId> order,
                        const SemiringContext& context) {
  if (factors.empty()) throw UserError("generic_join needs at least one factor");
  VarSet ordered;
  for (VarId v : order) {
    if (v >= kMaxVariables || ordered.contains(v)) throw UserError("join order repeats a variable");
    ordered.insert(v);
  }
  VarSet covered;
  for (const Factor* f : factors) covered |= f->edge();
  if (covered != ordered)
    throw UserError("join order does not match the union of the participants' edges");

  JoinResult result;
  Value scalar = context.one();
  bool any_empty = false;
  for (const Factor* f : factors) {
    if (f->empty()) any_empty = true;
    if (f->arity() == 0 && !f->empty()) scalar = context.mul(scalar, f->value(0));
  }
  if (any_empty || context.is_zero(scalar)) {
    result.factor = Factor::from_canonical(ordered, {}, {}, context);
    return result;
  }

  Joiner joiner(factors, order, context);
  joiner.run();
  result.stats = joiner.stats;

  // Back to ascending variable order.
  const std::size_t arity = order.size();
  std::vector<std::size_t> perm(arity);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return order[a] < order[b]; });
  std::vector<Code> keys;
  keys.reserve(joiner.out_keys.size());
  for (std::size_t r = 0; r < joiner.out_values.size(); ++r)
    for (std::size_t c : perm) keys.push_back(joiner.out_keys[r * arity + c]);
  std::vector<Value> values = std::move(joiner.out_values);
  if (scalar != context.one())
    for (auto& v : values) v = context.mul(scalar, v);
  result.factor = Factor::from_canonical(ordered, std::move(keys), std::move(values), context);
  return result;
}

JoinResult generic_join(const std::vector<Factor>& factors, std::span<const VarId> order,
                        const SemiringContext& context) {
  std::vector<const Factor*> ptrs;
  for (const auto& f : factors) ptrs.push_back(&f);
  return generic_join(std::span<const Factor* const>(ptrs), order, context);
}

}  // namespace faq
