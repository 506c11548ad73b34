#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>

namespace aimd {

/// A real number that may also be +infinity.
///
/// Several constants of the cycle analysis are conventionally "+inf" for
/// order 1 (and the ratio beta^0/(1-beta^0)). They are carried explicitly
/// instead of as IEEE infinities so that case analysis has to ask.
class Extended {
 public:
  constexpr Extended(double finite) : value_(finite) {}  // NOLINT(google-explicit-constructor)

  static constexpr Extended infinity() { return Extended(); }

  constexpr bool is_infinite() const { return !value_.has_value(); }
  constexpr bool is_finite() const { return value_.has_value(); }

  /// Finite value; throws if this is +infinity.
  double value() const {
    if (!value_) throw std::logic_error("Extended::value() called on +infinity");
    return *value_;
  }

  /// Finite value, or `fallback` for +infinity.
  constexpr double value_or(double fallback) const { return value_.value_or(fallback); }

  friend constexpr bool operator==(const Extended& a, const Extended& b) {
    return a.value_ == b.value_;
  }

  friend constexpr std::partial_ordering operator<=>(const Extended& a, const Extended& b) {
    if (a.is_infinite() && b.is_infinite()) return std::partial_ordering::equivalent;
    if (a.is_infinite()) return std::partial_ordering::greater;
    if (b.is_infinite()) return std::partial_ordering::less;
    return *a.value_ <=> *b.value_;
  }

  /// x - c, staying infinite when x is.
  friend Extended operator-(const Extended& x, double c) {
    return x.is_infinite() ? infinity() : Extended(*x.value_ - c);
  }

  std::string to_string() const;

 private:
  constexpr Extended() = default;
  std::optional<double> value_;
};

}  // namespace aimd
