#pragma once

#include <cmath>
#include <compare>
#include <ostream>
#include <string>

namespace chanbound {

/// A real number or a tagged infinity. Bounds such as the relative entropy
/// maximum over all channels are genuinely infinite; they are carried as a
/// tag rather than an IEEE overflow so that reports and comparisons stay
/// explicit.
class ExtendedReal {
 public:
  enum class Kind { kFinite, kPosInf, kNegInf };

  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double v) : value_(v) {}  // NOLINT: implicit by intent

  static constexpr ExtendedReal pos_inf() { return ExtendedReal(Kind::kPosInf); }
  static constexpr ExtendedReal neg_inf() { return ExtendedReal(Kind::kNegInf); }
  /// Maps IEEE infinities onto the tags. NaN is rejected by the caller.
  static ExtendedReal from_double(double v) {
    if (std::isinf(v)) return v > 0 ? pos_inf() : neg_inf();
    return ExtendedReal(v);
  }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_finite() const { return kind_ == Kind::kFinite; }
  constexpr bool is_pos_inf() const { return kind_ == Kind::kPosInf; }
  constexpr bool is_neg_inf() const { return kind_ == Kind::kNegInf; }

  /// Finite value, or ±HUGE_VAL for the tags (only for numeric comparisons).
  double to_double() const {
    switch (kind_) {
      case Kind::kPosInf: return HUGE_VAL;
      case Kind::kNegInf: return -HUGE_VAL;
      default: return value_;
    }
  }
  /// Finite value; precondition is_finite().
  constexpr double value() const { return value_; }

  constexpr ExtendedReal operator-() const {
    switch (kind_) {
      case Kind::kPosInf: return neg_inf();
      case Kind::kNegInf: return pos_inf();
      default: return ExtendedReal(-value_);
    }
  }

  /// +∞ + −∞ is undefined and throws std::domain_error.
  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b);
  friend ExtendedReal operator-(ExtendedReal a, ExtendedReal b) { return a + (-b); }

  /// Multiplication by a nonnegative weight with 0·(±∞) = 0.
  ExtendedReal scaled(double weight) const;

  friend std::partial_ordering operator<=>(ExtendedReal a, ExtendedReal b) {
    if (a.kind_ == b.kind_ && !a.is_finite()) return std::partial_ordering::equivalent;
    return a.to_double() <=> b.to_double();
  }
  friend bool operator==(ExtendedReal a, ExtendedReal b) {
    return (a <=> b) == std::partial_ordering::equivalent;
  }

  /// "inf", "-inf", or the shortest round-trip decimal of the value.
  std::string to_string() const;

 private:
  constexpr explicit ExtendedReal(Kind k) : kind_(k) {}

  Kind kind_ = Kind::kFinite;
  double value_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, const ExtendedReal& x);

/// |a − b| ≤ tol for finite values; identical tags otherwise.
bool approx_equal(ExtendedReal a, ExtendedReal b, double tol);

/// a·log(x) with 0·log(anything) = 0 and a·log 0 = −∞ for a > 0.
ExtendedReal xlogy(double a, double x);

}  // namespace chanbound
