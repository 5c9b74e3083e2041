#pragma once

#include <compare>
#include <iosfwd>
#include <limits>
#include <string>

namespace varkit {

/// Element of (-inf, +inf]: a real number or +infinity. Function values of
/// proper functions live here; -infinity is rejected at construction.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  // Implicit on purpose: finite doubles are the common case.
  ExtReal(double v);  // NOLINT(google-explicit-constructor)

  static constexpr ExtReal infinity() noexcept { return ExtReal(Tag{}); }

  [[nodiscard]] constexpr bool is_inf() const noexcept { return inf_; }
  [[nodiscard]] constexpr bool is_finite() const noexcept { return !inf_; }
  /// Finite value; throws InvalidArgument when infinite.
  [[nodiscard]] double value() const;
  /// +inf is returned as std::numeric_limits<double>::infinity().
  [[nodiscard]] constexpr double as_double() const noexcept {
    return inf_ ? std::numeric_limits<double>::infinity() : v_;
  }

  friend constexpr bool operator==(const ExtReal& a, const ExtReal& b) noexcept {
    return a.inf_ == b.inf_ && (a.inf_ || a.v_ == b.v_);
  }
  friend constexpr std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b) noexcept {
    if (a.inf_ || b.inf_) return a.inf_ <=> b.inf_;
    return a.v_ <=> b.v_;
  }

  friend ExtReal operator+(const ExtReal& a, const ExtReal& b) noexcept;
  friend ExtReal operator+(const ExtReal& a, double b) noexcept;
  friend ExtReal min(const ExtReal& a, const ExtReal& b) noexcept { return a <= b ? a : b; }
  friend ExtReal max(const ExtReal& a, const ExtReal& b) noexcept { return a >= b ? a : b; }

  /// "+inf" or the shortest round-trip decimal.
  [[nodiscard]] std::string to_string() const;

 private:
  struct Tag {};
  constexpr explicit ExtReal(Tag) noexcept : v_(0.0), inf_(true) {}

  double v_ = 0.0;
  bool inf_ = false;
};

std::ostream& operator<<(std::ostream& os, const ExtReal& x);

/// Second-order quantities (second subderivatives) can be -infinity at concave
/// kinks, so they get a two-sided extended type distinct from ExtReal.
class SecondOrderValue {
 public:
  enum class Kind { Finite, PlusInf, MinusInf };

  constexpr SecondOrderValue() = default;
  SecondOrderValue(double v);  // NOLINT(google-explicit-constructor)
  static constexpr SecondOrderValue plus_inf() noexcept { return SecondOrderValue(Kind::PlusInf); }
  static constexpr SecondOrderValue minus_inf() noexcept { return SecondOrderValue(Kind::MinusInf); }
  static SecondOrderValue from(const ExtReal& x) noexcept {
    return x.is_inf() ? plus_inf() : SecondOrderValue(x.as_double());
  }

  [[nodiscard]] constexpr Kind kind() const noexcept { return kind_; }
  [[nodiscard]] constexpr bool is_finite() const noexcept { return kind_ == Kind::Finite; }
  [[nodiscard]] double value() const;
  [[nodiscard]] constexpr double as_double() const noexcept {
    switch (kind_) {
      case Kind::PlusInf: return std::numeric_limits<double>::infinity();
      case Kind::MinusInf: return -std::numeric_limits<double>::infinity();
      default: return v_;
    }
  }
  friend constexpr bool operator==(const SecondOrderValue& a, const SecondOrderValue& b) noexcept {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || a.v_ == b.v_);
  }
  friend constexpr std::partial_ordering operator<=>(const SecondOrderValue& a,
                                                     const SecondOrderValue& b) noexcept {
    return a.as_double() <=> b.as_double();
  }
  [[nodiscard]] std::string to_string() const;

 private:
  constexpr explicit SecondOrderValue(Kind k) noexcept : kind_(k) {}
  double v_ = 0.0;
  Kind kind_ = Kind::Finite;
};

std::ostream& operator<<(std::ostream& os, const SecondOrderValue& x);

/// Shortest decimal that round-trips the double; "inf"/"-inf"/"nan" otherwise.
std::string format_double(double x);

}  // namespace varkit
