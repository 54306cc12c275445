#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace circdiv {

// Every precision-sensitive constant lives here. Both are held to the full
// 19-digit long double mantissa, well beyond the 15 digits the main terms need.
inline constexpr long double kEulerGamma = 0.57721566490153286060651209008240243L;
inline constexpr long double kPi = std::numbers::pi_v<long double>;

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Exact floor(sqrt(n)); no floating round trip survives the final correction.
constexpr std::uint64_t isqrt(std::uint64_t n) {
  if (n < 2) return n;
  std::uint64_t x = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  // x*x may overflow near 2^64, so compare through division.
  while (x > n / x) --x;
  while ((x + 1) <= n / (x + 1)) ++x;
  return x;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b, const char* what) {
  std::int64_t out{};
  if (__builtin_add_overflow(a, b, &out)) throw OverflowError(std::string(what) + ": int64 overflow");
  return out;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b, const char* what) {
  std::int64_t out{};
  if (__builtin_mul_overflow(a, b, &out)) throw OverflowError(std::string(what) + ": int64 overflow");
  return out;
}

/// Fractional part in [0, 1).
inline double frac(double t) {
  double f = t - std::floor(t);
  return f >= 1.0 ? 0.0 : f;
}

/// ||t||: distance to the nearest integer.
inline double dist_to_int(double t) {
  double f = frac(t);
  return std::min(f, 1.0 - f);
}

/// e(t) = exp(2 pi i t), computed from the fractional part so large phases keep
/// whatever precision their fractional part still carries.
template <class Complex = std::complex<double>>
Complex unit_phase(long double t) {
  long double f = t - std::floor(t);
  long double ang = 2.0L * kPi * f;
  return Complex(static_cast<typename Complex::value_type>(std::cos(ang)),
                 static_cast<typename Complex::value_type>(std::sin(ang)));
}

/// Least non-negative residue.
constexpr std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

/// Exact value of a finite double as a rational.
inline Rational to_rational(double v) {
  if (!std::isfinite(v)) throw DomainError("to_rational: non-finite value");
  int exp = 0;
  double mant = std::frexp(v, &exp);
  // mant * 2^53 is an exact integer
  auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r = Rational(BigInt(scaled));
  if (exp > 0) {
    r *= Rational(BigInt(1) << exp);
  } else if (exp < 0) {
    r /= Rational(BigInt(1) << (-exp));
  }
  return r;
}

}  // namespace circdiv
