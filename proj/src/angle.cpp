#include "distal/angle.hpp"

#include <cctype>
#include <cmath>
#include <utility>

#include "distal/error.hpp"

namespace distal {

namespace {

constexpr std::size_t kAutoTermsCap = 64;

// Partial quotients shared by every real in [lo, hi].
std::vector<mpz_class> common_prefix(mpq_class lo, mpq_class hi, std::size_t max_terms) {
  std::vector<mpz_class> out;
  while (out.size() < max_terms) {
    mpz_class a, b;
    mpz_fdiv_q(a.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
    mpz_fdiv_q(b.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
    if (a != b) break;
    out.push_back(a);
    lo -= a;
    hi -= a;
    if (lo == 0 || hi == 0) break;
    mpq_class new_lo = 1 / hi;
    mpq_class new_hi = 1 / lo;
    lo = std::move(new_lo);
    hi = std::move(new_hi);
  }
  return out;
}

std::size_t exact_length(mpq_class x, std::size_t cap) {
  std::size_t n = 0;
  while (n < cap) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    ++n;
    x -= a;
    if (x == 0) return n;
    x = 1 / x;
  }
  return n + 1;  // at least this long
}

struct ParsedDecimal {
  mpq_class value;
  int digits = 0;
};

ParsedDecimal parse_decimal(std::string_view text) {
  std::string s(text);
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  std::size_t end = s.size();
  while (end > start && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  s = s.substr(start, end - start);
  std::size_t dot = s.find('.');
  std::string int_part = dot == std::string::npos ? s : s.substr(0, dot);
  std::string frac_part = dot == std::string::npos ? "" : s.substr(dot + 1);
  if (int_part.empty()) int_part = "0";
  auto all_digits = [](const std::string& t) {
    for (char c : t)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  if (s.empty() || !all_digits(int_part) || !all_digits(frac_part)) {
    throw Error("torus.parse", "not a plain decimal: " + std::string(text));
  }
  ParsedDecimal out;
  out.digits = static_cast<int>(frac_part.size());
  mpz_class num(int_part + frac_part, 10);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(out.digits));
  out.value = mpq_class(num, den);
  out.value.canonicalize();
  return out;
}

Frac128 quantize(const BigReal& x) {
  BigReal scaled = ldexp(x.frac(), 128);
  return Frac128::from_raw(mod_2_128(scaled.round()));
}

std::vector<Convergent> build_convergents(const std::vector<mpz_class>& cf, const BigReal& value) {
  std::vector<Convergent> out;
  out.reserve(cf.size());
  mpz_class p_prev = 1, q_prev = 0, p = cf.empty() ? mpz_class(0) : cf[0], q = 1;
  for (std::size_t k = 0; k < cf.size(); ++k) {
    if (k > 0) {
      mpz_class p_next = cf[k] * p + p_prev;
      mpz_class q_next = cf[k] * q + q_prev;
      p_prev = p;
      q_prev = q;
      p = p_next;
      q = q_next;
    }
    BigReal qa = BigReal::from_mpz(q, value.precision()) * value;
    out.push_back(Convergent{p, q, qa.dist_to_int().to_long_double()});
  }
  return out;
}

long double liouville_tail(int terms, int base) {
  long double sum = 0;
  long double log_b = std::log10(static_cast<long double>(base));
  long double fact = 1;
  for (int k = 2; k <= terms + 1; ++k) fact *= k;  // (terms+1)!
  for (int k = terms + 1; k <= terms + 3; ++k) {
    long double next = fact * (k + 1);
    sum += 2.0L * std::pow(10.0L, (fact - next) * log_b);
    fact = next;
  }
  return sum;
}

// Recursive-descent evaluator for angle expressions.
class ExprParser {
 public:
  ExprParser(std::string_view text, mpfr_prec_t bits) : text_(text), bits_(bits) {}

  BigReal parse() {
    BigReal v = expr();
    skip();
    if (pos_ != text_.size()) fail("trailing input");
    return v;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw Error("torus.parse", why + " in expression '" + std::string(text_) + "'");
  }

  BigReal expr() {
    BigReal v = term();
    for (;;) {
      if (eat('+')) v += term();
      else if (eat('-')) v -= term();
      else return v;
    }
  }
  BigReal term() {
    BigReal v = factor();
    for (;;) {
      if (eat('*')) v *= factor();
      else if (eat('/')) {
        BigReal d = factor();
        if (d.is_zero()) fail("division by zero");
        v /= d;
      } else return v;
    }
  }
  BigReal factor() {
    skip();
    if (eat('-')) return -factor();
    if (eat('(')) {
      BigReal v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
      return BigReal::from_string(text_.substr(start, pos_ - start), bits_);
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    if (name == "golden") return (sqrt(BigReal(5, bits_)) - BigReal(1, bits_)) / BigReal(2, bits_);
    if (name == "pi") return BigReal::pi(bits_);
    if (name == "e") {
      BigReal r(bits_);
      BigReal one(1, bits_);
      mpfr_exp(r.get(), one.get(), MPFR_RNDN);
      return r;
    }
    if (name == "sqrt" || name == "frac") {
      if (!eat('(')) fail("expected '(' after " + name);
      BigReal arg = expr();
      if (!eat(')')) fail("missing ')'");
      if (name == "frac") return arg.frac();
      if (arg.sign() < 0) fail("sqrt of a negative number");
      return sqrt(arg);
    }
    if (name.empty()) fail("unexpected character");
    fail("unknown name '" + name + "'");
  }

  std::string_view text_;
  mpfr_prec_t bits_;
  std::size_t pos_ = 0;
};

RotationAngle angle_from_value(const BigReal& value, std::string label, int digits);

}  // namespace

u128 mod_2_128(const mpz_class& q) {
  mpz_class r;
  mpz_class two128 = mpz_class(1) << 128;
  mpz_fdiv_r(r.get_mpz_t(), q.get_mpz_t(), two128.get_mpz_t());
  mpz_class hi = r >> 64;
  mpz_class lo = r - (hi << 64);
  auto to_u64 = [](const mpz_class& z) {
    std::uint64_t v = 0;
    mpz_export(&v, nullptr, -1, sizeof v, 0, 0, z.get_mpz_t());
    return v;
  };
  return (static_cast<u128>(to_u64(hi)) << 64) | to_u64(lo);
}

BigReal RotationAngle::value(int digits) const {
  int d = digits > 0 ? digits : digits_;
  return BigReal::from_string(decimal_, bits_for_digits(std::max(d, digits_)));
}

BestApproxError RotationAngle::best_approx_error(std::size_t k) const {
  if (k >= convergents_.size()) throw Error("torus.range", "convergent index out of range");
  return BestApproxError{k, convergents_[k].dist};
}

RotationAngle continued_fraction(std::string_view decimal, std::size_t terms) {
  if (terms == 0) throw Error("torus.parse", "continued_fraction needs at least one term");
  ParsedDecimal parsed = parse_decimal(decimal);
  if (parsed.value <= 0 || parsed.value >= 1) {
    if (parsed.value == 0) throw Error("torus.rational_angle", "angle 0 is rational");
    throw Error("torus.parse", "angle decimal must lie in (0,1)");
  }
  if (exact_length(parsed.value, terms) < terms) {
    throw Error("torus.rational_angle",
                "continued fraction of " + std::string(decimal) + " terminates before " + std::to_string(terms) + " terms");
  }
  if (parsed.digits < kMinDecimalDigits) {
    throw Error("torus.precision", "decimal angles need at least 40 digits");
  }
  mpz_class ulp_den;
  mpz_ui_pow_ui(ulp_den.get_mpz_t(), 10, static_cast<unsigned long>(parsed.digits));
  mpq_class ulp(1, ulp_den);
  std::vector<mpz_class> cf = common_prefix(parsed.value - ulp, parsed.value + ulp, terms);
  if (cf.size() < terms) {
    throw Error("torus.precision", "only " + std::to_string(cf.size()) + " partial quotients are determined by " +
                                       std::to_string(parsed.digits) + " digits");
  }
  RotationAngle angle;
  angle.label_ = std::string(decimal);
  angle.digits_ = parsed.digits;
  BigReal v = BigReal::from_mpq(parsed.value, bits_for_digits(parsed.digits));
  angle.decimal_ = v.to_fixed(parsed.digits);
  angle.frac_ = quantize(v);
  angle.convergents_ = build_convergents(cf, v);
  angle.cf_ = std::move(cf);
  return angle;
}

RotationAngle liouville_angle(int terms, int base) {
  if (base < 2) throw Error("torus.parse", "Liouville base must be at least 2");
  if (terms < 2 || terms > 6) {
    throw Error("torus.precision", "liouville_angle supports 2..6 terms; beyond 6 the k! exponents overflow precision");
  }
  auto factorial = [](int n) {
    long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  mpz_class b(base);
  auto inv_pow = [&](long e) {
    mpz_class d;
    mpz_pow_ui(d.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
    return mpq_class(1, d);
  };
  mpq_class partial = 0;
  for (int k = 1; k <= terms; ++k) partial += inv_pow(factorial(k));
  partial.canonicalize();
  mpq_class next_term = inv_pow(factorial(terms + 1));
  mpq_class upper = partial + 2 * next_term;
  upper.canonicalize();

  std::vector<mpz_class> cf = common_prefix(partial, upper, std::size_t(-1));
  std::string label = base == 10 ? "liouville(" + std::to_string(terms) + ")"
                                 : "liouville(" + std::to_string(terms) + "," + std::to_string(base) + ")";
  constexpr std::size_t kMinQuotients = 4;
  if (cf.size() < kMinQuotients) {
    throw Error("torus.rational_angle", label + ": truncation exposes termination after " + std::to_string(cf.size()) +
                                            " partial quotients");
  }

  double log_b = std::log10(static_cast<double>(base));
  int digits = static_cast<int>(std::ceil(static_cast<double>(factorial(terms + 1)) * log_b)) + 20;
  digits = std::max(digits, kMinDecimalDigits);
  mpq_class model = partial + next_term;
  model.canonicalize();
  BigReal v = BigReal::from_mpq(model, bits_for_digits(digits));

  RotationAngle angle;
  angle.label_ = std::move(label);
  angle.digits_ = digits;
  angle.decimal_ = v.to_fixed(digits);
  BigReal truncated = BigReal::from_string(angle.decimal_, bits_for_digits(digits));
  angle.frac_ = quantize(truncated);
  angle.convergents_ = build_convergents(cf, truncated);
  angle.cf_ = std::move(cf);
  angle.tail_norm_bound_ = liouville_tail(terms, base);
  return angle;
}

BigReal evaluate_expression(std::string_view expr, int digits) {
  return ExprParser(expr, bits_for_digits(digits + 20)).parse();
}

namespace {

RotationAngle angle_from_value(const BigReal& value, std::string label, int digits) {
  BigReal reduced = value.frac();
  std::string decimal = reduced.to_fixed(digits);
  ParsedDecimal parsed = parse_decimal(decimal);
  if (parsed.value == 0) throw Error("torus.rational_angle", label + " is an integer");
  mpz_class ulp_den;
  mpz_ui_pow_ui(ulp_den.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  mpq_class ulp(1, ulp_den);
  std::vector<mpz_class> cf = common_prefix(parsed.value - ulp, parsed.value + ulp, kAutoTermsCap);
  if (exact_length(parsed.value, cf.size() + 2) <= cf.size() + 1) {
    throw Error("torus.rational_angle", label + " is rational at " + std::to_string(digits) + " digits");
  }
  if (cf.size() < 2) throw Error("torus.precision", label + ": too few digits to expand");
  RotationAngle angle = continued_fraction(decimal, cf.size());
  return angle;
}

}  // namespace

RotationAngle angle_from_expression(std::string_view expr, int digits) {
  std::string text(expr);
  std::string compact;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
  if (compact.rfind("liouville(", 0) == 0 && compact.back() == ')') {
    std::string args = compact.substr(10, compact.size() - 11);
    std::size_t comma = args.find(',');
    try {
      int terms = std::stoi(args.substr(0, comma));
      int base = comma == std::string::npos ? 10 : std::stoi(args.substr(comma + 1));
      return liouville_angle(terms, base);
    } catch (const std::logic_error&) {
      throw Error("torus.parse", "bad liouville arguments: " + text);
    }
  }
  if (digits < kMinDecimalDigits) throw Error("torus.precision", "expression angles need at least 40 digits");
  RotationAngle angle = angle_from_value(evaluate_expression(compact, digits), compact, digits);
  angle.label_ = compact;
  return angle;
}

RotationAngle lattice_angle(Frac128 value) {
  mpz_class raw = (mpz_class(static_cast<unsigned long>(value.hi())) << 64) + mpz_class(static_cast<unsigned long>(value.lo()));
  mpq_class q(raw, mpz_class(1) << 128);
  q.canonicalize();
  RotationAngle angle;
  angle.label_ = "lattice:" + value.to_hex();
  angle.digits_ = 128;
  BigReal v = BigReal::from_mpq(q, bits_for_digits(128));
  angle.decimal_ = v.to_fixed(128);
  angle.frac_ = value;
  std::vector<mpz_class> cf;
  mpq_class x = q;
  for (;;) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    cf.push_back(a);
    x -= a;
    if (x == 0) break;
    x = 1 / x;
  }
  angle.convergents_ = build_convergents(cf, v);
  angle.cf_ = std::move(cf);
  return angle;
}

RotationAngle scaled_angle(const RotationAngle& rate, std::string_view factor, int digits) {
  int d = std::max(digits, kMinDecimalDigits);
  BigReal product = rate.value(d) * evaluate_expression(factor, d);
  std::string label = "(" + rate.label() + ")*(" + std::string(factor) + ")";
  RotationAngle angle = angle_from_value(product, label, std::min(d, rate.digits()));
  angle.label_ = std::move(label);
  return angle;
}

}  // namespace distal
