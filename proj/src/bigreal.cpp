#include "distal/bigreal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace distal {

mpfr_prec_t bits_for_digits(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 64;
}

BigReal::BigReal(mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_zero(value_, 1);
}

BigReal::BigReal(long value, mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_si(value_, value, MPFR_RNDN);
}

BigReal::BigReal(const BigReal& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigReal::BigReal(BigReal&& other) noexcept {
  // Steal the limbs and leave `other` as a valid minimal-precision zero.
  value_[0] = other.value_[0];
  mpfr_init2(other.value_, MPFR_PREC_MIN);
  mpfr_set_zero(other.value_, 1);
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

BigReal::~BigReal() { mpfr_clear(value_); }

BigReal BigReal::from_string(std::string_view text, mpfr_prec_t bits) {
  BigReal r(bits);
  std::string s(text);
  char* end = nullptr;
  mpfr_strtofr(r.value_, s.c_str(), &end, 10, MPFR_RNDN);
  if (end == s.c_str() || *end != '\0') throw std::invalid_argument("not a decimal number: " + s);
  return r;
}

BigReal BigReal::from_mpz(const mpz_class& value, mpfr_prec_t bits) {
  BigReal r(bits);
  mpfr_set_z(r.value_, value.get_mpz_t(), MPFR_RNDN);
  return r;
}

BigReal BigReal::from_mpq(const mpq_class& value, mpfr_prec_t bits) {
  BigReal r(bits);
  mpfr_set_q(r.value_, value.get_mpq_t(), MPFR_RNDN);
  return r;
}

BigReal BigReal::from_double(double value, mpfr_prec_t bits) {
  BigReal r(bits);
  mpfr_set_d(r.value_, value, MPFR_RNDN);
  return r;
}

BigReal BigReal::pi(mpfr_prec_t bits) {
  BigReal r(bits);
  mpfr_const_pi(r.value_, MPFR_RNDN);
  return r;
}

double BigReal::to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
long double BigReal::to_long_double() const { return mpfr_get_ld(value_, MPFR_RNDN); }
int BigReal::sign() const { return mpfr_sgn(value_); }
bool BigReal::is_zero() const { return mpfr_zero_p(value_) != 0; }

mpz_class BigReal::floor() const {
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), value_, MPFR_RNDD);
  return z;
}

mpz_class BigReal::round() const {
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), value_, MPFR_RNDN);
  return z;
}

BigReal BigReal::frac() const {
  BigReal r(precision());
  BigReal fl(precision());
  mpfr_floor(fl.value_, value_);
  mpfr_sub(r.value_, value_, fl.value_, MPFR_RNDN);
  return r;
}

BigReal BigReal::dist_to_int() const {
  BigReal f = frac();
  BigReal one(1, precision());
  BigReal g = one - f;
  return f < g ? f : g;
}

std::string BigReal::to_fixed(int digits) const {
  BigReal scaled = abs(*this) * pow10(digits, precision() + 16);
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), scaled.value_, MPFR_RNDZ);
  std::string body = z.get_str(10);
  if (static_cast<int>(body.size()) <= digits) body.insert(0, digits + 1 - body.size(), '0');
  std::string out = sign() < 0 ? "-" : "";
  out += body.substr(0, body.size() - digits);
  if (digits > 0) out += "." + body.substr(body.size() - digits);
  return out;
}

std::string BigReal::to_sci(int digits) const {
  std::string buf(static_cast<std::size_t>(digits) + 32, '\0');
  int n = mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits - 1, value_);
  buf.resize(static_cast<std::size_t>(std::max(n, 0)));
  return buf;
}

static mpfr_prec_t max_prec(const BigReal& a, const BigReal& b) {
  return std::max(a.precision(), b.precision());
}

BigReal& BigReal::operator+=(const BigReal& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), MPFR_RNDN);
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator-=(const BigReal& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), MPFR_RNDN);
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator*=(const BigReal& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), MPFR_RNDN);
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator/=(const BigReal& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), MPFR_RNDN);
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator*=(long rhs) {
  mpfr_mul_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

BigReal operator+(const BigReal& a, const BigReal& b) {
  BigReal r(max_prec(a, b));
  mpfr_add(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

BigReal operator-(const BigReal& a, const BigReal& b) {
  BigReal r(max_prec(a, b));
  mpfr_sub(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

BigReal operator*(const BigReal& a, const BigReal& b) {
  BigReal r(max_prec(a, b));
  mpfr_mul(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

BigReal operator/(const BigReal& a, const BigReal& b) {
  BigReal r(max_prec(a, b));
  mpfr_div(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

BigReal operator*(const BigReal& a, long b) {
  BigReal r(a.precision());
  mpfr_mul_si(r.value_, a.value_, b, MPFR_RNDN);
  return r;
}

BigReal operator-(const BigReal& a) {
  BigReal r(a.precision());
  mpfr_neg(r.value_, a.value_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }

BigReal sqrt(const BigReal& a) {
  BigReal r(a.precision());
  mpfr_sqrt(r.value_, a.value_, MPFR_RNDN);
  return r;
}

BigReal abs(const BigReal& a) {
  BigReal r(a.precision());
  mpfr_abs(r.value_, a.value_, MPFR_RNDN);
  return r;
}

BigReal pow10(long exponent, mpfr_prec_t bits) {
  BigReal r(bits);
  mpfr_set_ui(r.value_, 10, MPFR_RNDN);
  mpfr_pow_si(r.value_, r.value_, exponent, MPFR_RNDN);
  return r;
}

BigReal ldexp(const BigReal& a, long exponent) {
  BigReal r(a.precision());
  mpfr_mul_2si(r.value_, a.value_, exponent, MPFR_RNDN);
  return r;
}

}  // namespace distal
