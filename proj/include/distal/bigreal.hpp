#pragma once

#include <compare>
#include <string>
#include <string_view>

#include <gmpxx.h>
#include <mpfr.h>

namespace distal {

// Number of mantissa bits needed to carry `digits` decimal digits plus guard bits.
mpfr_prec_t bits_for_digits(int digits);

// Owning MPFR value. Binary operations produce a result at the larger of the
// operand precisions, so mixed-precision arithmetic never silently truncates.
class BigReal {
 public:
  explicit BigReal(mpfr_prec_t bits = 256);
  BigReal(long value, mpfr_prec_t bits);
  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  ~BigReal();

  static BigReal from_string(std::string_view text, mpfr_prec_t bits);
  static BigReal from_mpz(const mpz_class& value, mpfr_prec_t bits);
  static BigReal from_mpq(const mpq_class& value, mpfr_prec_t bits);
  static BigReal from_double(double value, mpfr_prec_t bits);
  static BigReal pi(mpfr_prec_t bits);

  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }
  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

  double to_double() const;
  long double to_long_double() const;
  int sign() const;
  bool is_zero() const;

  mpz_class floor() const;
  mpz_class round() const;
  // Fractional part in [0, 1).
  BigReal frac() const;
  // Distance to the nearest integer.
  BigReal dist_to_int() const;

  // Truncated fixed-point rendering with exactly `digits` digits after the point.
  std::string to_fixed(int digits) const;
  // Scientific rendering with `digits` significant digits, for logs and reports.
  std::string to_sci(int digits) const;

  BigReal& operator+=(const BigReal& rhs);
  BigReal& operator-=(const BigReal& rhs);
  BigReal& operator*=(const BigReal& rhs);
  BigReal& operator/=(const BigReal& rhs);
  BigReal& operator*=(long rhs);

  friend BigReal operator+(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, const BigReal& b);
  friend BigReal operator/(const BigReal& a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, long b);
  friend BigReal operator-(const BigReal& a);
  friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b);
  friend bool operator==(const BigReal& a, const BigReal& b);

  friend BigReal sqrt(const BigReal& a);
  friend BigReal abs(const BigReal& a);
  friend BigReal pow10(long exponent, mpfr_prec_t bits);
  friend BigReal ldexp(const BigReal& a, long exponent);

 private:
  mpfr_t value_;
};

BigReal sqrt(const BigReal& a);
BigReal abs(const BigReal& a);
BigReal pow10(long exponent, mpfr_prec_t bits);
BigReal ldexp(const BigReal& a, long exponent);

}  // namespace distal
