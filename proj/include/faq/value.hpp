#pragma once

#include <compare>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace faq {

/// An exact element of a carrier set: an arbitrary-precision rational, or
/// negative infinity (the zero of max/plus). Booleans are stored as 0/1.
class Value {
 public:
  Value() = default;
  explicit Value(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }
  explicit Value(long v) : q_(v) {}
  Value(long num, long den) : q_(num, den) { q_.canonicalize(); }

  static Value neg_infinity() {
    Value v;
    v.neg_inf_ = true;
    return v;
  }

  bool is_neg_inf() const { return neg_inf_; }
  const mpq_class& rational() const { return q_; }
  bool is_integer() const { return !neg_inf_ && q_.get_den() == 1; }

  /// Exact textual form: integers as `p`, rationals as `p/q`, `-inf`.
  std::string str() const;

  friend bool operator==(const Value& a, const Value& b) {
    if (a.neg_inf_ || b.neg_inf_) return a.neg_inf_ == b.neg_inf_;
    return a.q_ == b.q_;
  }

  friend std::strong_ordering operator<=>(const Value& a, const Value& b) {
    if (a.neg_inf_ || b.neg_inf_) {
      if (a.neg_inf_ && b.neg_inf_) return std::strong_ordering::equal;
      return a.neg_inf_ ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    int c = cmp(a.q_, b.q_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  mpq_class q_{0};
  bool neg_inf_ = false;
};

/// Parses `p`, `p/q`, decimal `1.25`, or `-inf`. Returns false on syntax error.
bool parse_number(std::string_view text, Value& out);

}  // namespace faq
