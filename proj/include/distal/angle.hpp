#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "distal/bigreal.hpp"
#include "distal/torus.hpp"

namespace distal {

// p/q convergent of a rotation angle together with ||q alpha||.
struct Convergent {
  mpz_class p;
  mpz_class q;
  long double dist = 0;  // distance from q*alpha to the nearest integer
};

struct BestApproxError {
  std::size_t k = 0;
  long double dist = 0;
};

// An irrational rotation number held at high precision: the decimal it was
// built from, its quantization onto the 2^-128 lattice, and a certified prefix
// of its continued fraction. Every stored partial quotient is valid for every
// real number compatible with the decimal's precision.
class RotationAngle {
 public:
  const std::string& label() const { return label_; }
  const std::string& decimal() const { return decimal_; }
  int digits() const { return digits_; }
  Frac128 frac() const { return frac_; }
  double to_double() const { return frac_.to_double(); }
  const std::vector<mpz_class>& cf() const { return cf_; }
  const std::vector<Convergent>& convergents() const { return convergents_; }

  // Upper bound on sum ||q alpha|| over the best-approximation denominators
  // lying beyond the stored convergents, when the angle's construction knows
  // one (Liouville series). nullopt means no a priori bound is available.
  std::optional<long double> tail_norm_bound() const { return tail_norm_bound_; }

  // The decimal as a high-precision real; `digits` defaults to the stored ones.
  BigReal value(int digits = 0) const;

  BestApproxError best_approx_error(std::size_t k) const;

  friend RotationAngle continued_fraction(std::string_view decimal, std::size_t terms);
  friend RotationAngle liouville_angle(int terms, int base);
  friend RotationAngle angle_from_expression(std::string_view expr, int digits);
  friend RotationAngle lattice_angle(Frac128 value);
  friend RotationAngle scaled_angle(const RotationAngle& rate, std::string_view factor, int digits);

 private:
  std::string label_;
  std::string decimal_;
  int digits_ = 0;
  Frac128 frac_;
  std::vector<mpz_class> cf_;
  std::vector<Convergent> convergents_;
  std::optional<long double> tail_norm_bound_;
};

inline constexpr int kMinDecimalDigits = 40;

// Expands a decimal in (0,1) into `terms` certified partial quotients
// a_0..a_{terms-1}. Errors: torus.rational_angle when the expansion of the
// given decimal terminates first, torus.precision when the decimal's
// uncertainty no longer determines a quotient, torus.parse otherwise.
RotationAngle continued_fraction(std::string_view decimal, std::size_t terms);

// sum_{k=1}^{terms} base^{-k!} carrying the implicit tail of the infinite
// series. The stored quotients are those shared by every number in
// [S, S + 2 base^{-(terms+1)!}], which contains the full series.
RotationAngle liouville_angle(int terms, int base = 10);

// Builds an angle from a small expression language reduced mod 1:
//   golden, pi, e, sqrt(n), frac(x), + - * / and parentheses,
//   or liouville(terms[, base]) at top level.
RotationAngle angle_from_expression(std::string_view expr, int digits = 200);

// A lattice point used as a rotation number, possibly rational (e.g. 0).
RotationAngle lattice_angle(Frac128 value);

// rate * factor mod 1 at `digits` precision, factor being an expression.
// Used to sample R-flows: rotation by omega * dt.
RotationAngle scaled_angle(const RotationAngle& rate, std::string_view factor, int digits = 200);

// Evaluates an expression at the given precision without reducing mod 1.
BigReal evaluate_expression(std::string_view expr, int digits);

// Low 128 bits of q: multiplication of a Frac128 by q only depends on them.
u128 mod_2_128(const mpz_class& q);

}  // namespace distal
