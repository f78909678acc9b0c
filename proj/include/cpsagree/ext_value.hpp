#ifndef CPSAGREE_EXT_VALUE_HPP
#define CPSAGREE_EXT_VALUE_HPP

#include <ostream>
#include <string>

#include "cpsagree/error.hpp"
#include "cpsagree/rational.hpp"

namespace cpsagree {

/// A nonnegative rational or +infinity. Infinity absorbs under addition.
class ExtValue {
 public:
  ExtValue() = default;
  ExtValue(Rational value) : value_(std::move(value)) {  // NOLINT(google-explicit-constructor)
    if (value_.sign() < 0) throw Error(Errc::InvalidArgument, "extended values are nonnegative");
  }

  static ExtValue infinity() {
    ExtValue v;
    v.infinite_ = true;
    return v;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }
  bool is_zero() const { return !infinite_ && value_.is_zero(); }
  /// 0 < v < +inf
  bool is_finite_positive() const { return !infinite_ && value_.sign() > 0; }

  const Rational& finite_value() const {
    if (infinite_) throw Error(Errc::InvalidArgument, "infinite value has no finite part");
    return value_;
  }

  friend ExtValue operator+(const ExtValue& a, const ExtValue& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtValue(a.value_ + b.value_);
  }
  ExtValue& operator+=(const ExtValue& o) { return *this = *this + o; }

  /// Only Finite / Finite(>0) is defined.
  friend Rational operator/(const ExtValue& a, const ExtValue& b) {
    if (a.infinite_ || b.infinite_ || b.value_.is_zero())
      throw Error(Errc::InvalidArgument, "undefined extended division " + a.to_string() + " / " + b.to_string());
    return a.value_ / b.value_;
  }

  friend bool operator==(const ExtValue& a, const ExtValue& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

  std::string to_string() const { return infinite_ ? "inf" : value_.to_string(); }
  friend std::ostream& operator<<(std::ostream& os, const ExtValue& v) { return os << v.to_string(); }

 private:
  Rational value_;
  bool infinite_ = false;
};

}  // namespace cpsagree

#endif  // CPSAGREE_EXT_VALUE_HPP
