#pragma once

#include <cstdint>
#include <string>

#include "cubic_euler/checked.hpp"

namespace cubic_euler {

// Non-negative dyadic rational numerator / 2^exponent, kept in lowest terms.
class DyadicRational {
 public:
  constexpr DyadicRational() = default;
  DyadicRational(std::uint64_t numerator, int exponent) : numerator_(numerator), exponent_(exponent) {
    if (exponent < 0 || exponent > 63) throw OverflowError("dyadic exponent out of range");
    normalize();
  }

  // 2^-e
  static DyadicRational inverse_power_of_two(int e) { return {1, e}; }

  std::uint64_t numerator() const { return numerator_; }
  int exponent() const { return exponent_; }
  std::uint64_t denominator() const { return std::uint64_t{1} << exponent_; }

  bool is_integer() const { return exponent_ == 0; }

  DyadicRational& operator+=(const DyadicRational& rhs) {
    const int e = exponent_ > rhs.exponent_ ? exponent_ : rhs.exponent_;
    const std::uint64_t a = shifted(numerator_, e - exponent_);
    const std::uint64_t b = shifted(rhs.numerator_, e - rhs.exponent_);
    numerator_ = checked_add(a, b, "dyadic sum");
    exponent_ = e;
    normalize();
    return *this;
  }
  friend DyadicRational operator+(DyadicRational a, const DyadicRational& b) { return a += b; }

  friend bool operator==(const DyadicRational&, const DyadicRational&) = default;
  friend bool operator<(const DyadicRational& a, const DyadicRational& b) {
    const int e = a.exponent_ > b.exponent_ ? a.exponent_ : b.exponent_;
    return shifted(a.numerator_, e - a.exponent_) < shifted(b.numerator_, e - b.exponent_);
  }

  double to_double() const { return static_cast<double>(numerator_) / static_cast<double>(denominator()); }
  std::string to_string() const {
    return exponent_ == 0 ? std::to_string(numerator_) : std::to_string(numerator_) + "/" + std::to_string(denominator());
  }

 private:
  static std::uint64_t shifted(std::uint64_t v, int bits) {
    if (v == 0 || bits == 0) return v;
    if (bits >= 64 || (v >> (64 - bits)) != 0) throw OverflowError("overflow in dyadic shift");
    return v << bits;
  }

  void normalize() {
    if (numerator_ == 0) {
      exponent_ = 0;
      return;
    }
    while (exponent_ > 0 && (numerator_ & 1) == 0) {
      numerator_ >>= 1;
      --exponent_;
    }
  }

  std::uint64_t numerator_ = 0;
  int exponent_ = 0;
};

}  // namespace cubic_euler
