#include "chanbound/extended_real.hpp"

#include <charconv>
#include <stdexcept>

namespace chanbound {

ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
  if (a.is_finite() && b.is_finite()) return ExtendedReal(a.value_ + b.value_);
  if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf()))
    throw std::domain_error("ExtendedReal: +inf + -inf is undefined");
  return a.is_finite() ? b : a;
}

ExtendedReal ExtendedReal::scaled(double weight) const {
  if (weight < 0.0) throw std::domain_error("ExtendedReal::scaled: negative weight");
  if (is_finite()) return ExtendedReal(value_ * weight);
  return weight == 0.0 ? ExtendedReal(0.0) : *this;
}

std::string ExtendedReal::to_string() const {
  if (is_pos_inf()) return "inf";
  if (is_neg_inf()) return "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value_);
  return std::string(buf, res.ptr);
}

std::ostream& operator<<(std::ostream& os, const ExtendedReal& x) {
  return os << x.to_string();
}

bool approx_equal(ExtendedReal a, ExtendedReal b, double tol) {
  if (a.is_finite() && b.is_finite()) return std::abs(a.value() - b.value()) <= tol;
  return a.kind() == b.kind();
}

ExtendedReal xlogy(double a, double x) {
  if (a == 0.0) return 0.0;
  if (x <= 0.0) return ExtendedReal::neg_inf();
  return a * std::log(x);
}

}  // namespace chanbound
