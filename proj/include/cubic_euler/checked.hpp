#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cubic_euler {

// Thrown whenever an exact counter or product leaves the 64-bit range.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b, const char* what = "addition") {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError(std::string("overflow in ") + what);
  return r;
}

inline std::uint64_t checked_sub(std::uint64_t a, std::uint64_t b, const char* what = "subtraction") {
  std::uint64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError(std::string("underflow in ") + what);
  return r;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what = "multiplication") {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError(std::string("overflow in ") + what);
  return r;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b, const char* what = "addition") {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError(std::string("overflow in ") + what);
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b, const char* what = "multiplication") {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError(std::string("overflow in ") + what);
  return r;
}

inline std::uint64_t checked_pow2(int exponent, const char* what = "power of two") {
  if (exponent < 0 || exponent > 63) throw OverflowError(std::string("overflow in ") + what);
  return std::uint64_t{1} << exponent;
}

inline std::uint64_t checked_pow(std::uint64_t base, int exponent, const char* what = "power") {
  std::uint64_t r = 1;
  for (int i = 0; i < exponent; ++i) r = checked_mul(r, base, what);
  return r;
}

}  // namespace cubic_euler
