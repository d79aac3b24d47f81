#include "distal/disjointness.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "distal/error.hpp"

namespace distal {

namespace {

using Matrix = std::vector<std::vector<BigReal>>;
using IntMatrix = std::vector<std::vector<mpz_class>>;

BigReal mul(const BigReal& a, const mpz_class& t) { return a * BigReal::from_mpz(t, a.precision()); }

void normalize_sign(std::vector<mpz_class>& c) {
  for (const auto& v : c) {
    if (v == 0) continue;
    if (v < 0)
      for (auto& w : c) w = -w;
    return;
  }
}

std::vector<BigReal> family_values(const std::vector<RotationAngle>& angles, int digits, bool prepend_one) {
  mpfr_prec_t bits = bits_for_digits(digits);
  std::vector<BigReal> xs;
  if (prepend_one) xs.emplace_back(1, bits);
  for (const auto& a : angles) {
    if (a.digits() < digits) {
      throw Error("disjointness.precision", "angle " + a.label() + " carries " + std::to_string(a.digits()) +
                                                " digits, " + std::to_string(digits) + " requested");
    }
    xs.push_back(a.value(digits));
  }
  return xs;
}

}  // namespace

std::string format_coeffs(const std::vector<mpz_class>& coeffs) {
  std::string s = "(";
  for (std::size_t i = 0; i < coeffs.size(); ++i) s += (i ? "," : "") + coeffs[i].get_str();
  return s + ")";
}

BigReal relation_residual(const std::vector<mpz_class>& coeffs, const std::vector<BigReal>& xs) {
  if (coeffs.size() != xs.size()) throw Error("disjointness.size", "coefficient count mismatch");
  mpfr_prec_t bits = 64;
  for (const auto& x : xs) bits = std::max(bits, x.precision());
  BigReal s(0, bits);
  for (std::size_t i = 0; i < xs.size(); ++i) s += mul(xs[i], coeffs[i]);
  return abs(s);
}

IndependenceVerdict integer_relation(const std::vector<BigReal>& xs, const mpz_class& max_coeff, int digits) {
  const std::size_t n = xs.size();
  if (n < 2 || n > 12) throw Error("disjointness.size", "integer relation needs 2 to 12 numbers");
  if (digits < 10 * static_cast<int>(n) + 20) {
    throw Error("disjointness.precision", "insufficient precision: " + std::to_string(digits) + " digits for " +
                                              std::to_string(n) + " numbers");
  }
  if (max_coeff <= 0) throw Error("disjointness.range", "max_coeff must be positive");
  const mpfr_prec_t bits = bits_for_digits(digits);

  IndependenceVerdict out;
  out.max_coeff = max_coeff;
  out.digits = digits;

  auto accept = [&](std::vector<mpz_class> c) {
    normalize_sign(c);
    RelationCertificate cert;
    cert.residual = relation_residual(c, xs);
    cert.residual_log10 = cert.residual.is_zero()
                              ? -static_cast<double>(bits) * std::log10(2.0)
                              : static_cast<double>(mpfr_get_exp(cert.residual.get())) * std::log10(2.0);
    cert.coeffs = std::move(c);
    out.status = IndependenceVerdict::Status::Dependent;
    out.certificate = std::move(cert);
    return out;
  };

  // Exact zeros and trivial relations.
  for (std::size_t i = 0; i < n; ++i) {
    if (xs[i].is_zero() || abs(xs[i]) < pow10(-digits, bits)) {
      std::vector<mpz_class> c(n, 0);
      c[i] = 1;
      return accept(c);
    }
  }

  std::vector<BigReal> x;
  for (const auto& v : xs) {
    BigReal w(bits);
    mpfr_set(w.get(), v.get(), MPFR_RNDN);
    x.push_back(w);
  }

  // s_k = sqrt(sum_{j >= k} x_j^2), y = x / s_0.
  std::vector<BigReal> s(n, BigReal(bits));
  {
    BigReal acc(0, bits);
    for (std::size_t k = n; k-- > 0;) {
      acc += x[k] * x[k];
      s[k] = sqrt(acc);
    }
  }
  std::vector<BigReal> y;
  for (std::size_t k = 0; k < n; ++k) y.push_back(x[k] / s[0]);
  {
    BigReal acc(0, bits);
    for (std::size_t k = n; k-- > 0;) {
      acc += y[k] * y[k];
      s[k] = sqrt(acc);
    }
  }

  Matrix h(n, std::vector<BigReal>(n - 1, BigReal(0, bits)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n - 1 && j <= i; ++j) {
      if (i == j) {
        h[i][j] = s[j + 1] / s[j];
      } else {
        h[i][j] = -(y[i] * y[j]) / (s[j] * s[j + 1]);
      }
    }
  IntMatrix a(n, std::vector<mpz_class>(n, 0)), b(n, std::vector<mpz_class>(n, 0));
  for (std::size_t i = 0; i < n; ++i) a[i][i] = b[i][i] = 1;

  auto reduce_entry = [&](std::size_t i, std::size_t j) {
    if (h[j][j].is_zero()) return;
    mpz_class t = (h[i][j] / h[j][j]).round();
    if (t == 0) return;
    BigReal tr = BigReal::from_mpz(t, bits);
    y[j] += tr * y[i];
    for (std::size_t k = 0; k <= j; ++k) h[i][k] -= tr * h[j][k];
    for (std::size_t k = 0; k < n; ++k) {
      a[i][k] -= t * a[j][k];
      b[k][j] += t * b[k][i];
    }
  };

  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = i; j-- > 0;) reduce_entry(i, j);

  const BigReal gamma = sqrt(BigReal(4, bits) / BigReal(3, bits)) + pow10(-2, bits);
  const BigReal detect = pow10(-(digits - 12), bits);
  const BigReal max_entry = pow10(digits - 10, bits);
  const BigReal coeff_limit = BigReal::from_mpz(max_coeff, bits) * sqrt(BigReal(static_cast<long>(n), bits));
  const std::size_t max_iter = 200000;

  for (std::size_t iter = 1; iter <= max_iter; ++iter) {
    out.iterations = iter;
    // Pick the row with the largest gamma^i |h_ii|.
    std::size_t m = 0;
    BigReal best(0, bits), g(1, bits);
    for (std::size_t i = 0; i < n - 1; ++i) {
      g *= gamma;
      BigReal v = g * abs(h[i][i]);
      if (v > best) {
        best = v;
        m = i;
      }
    }
    std::swap(y[m], y[m + 1]);
    std::swap(a[m], a[m + 1]);
    std::swap(h[m], h[m + 1]);
    for (std::size_t k = 0; k < n; ++k) std::swap(b[k][m], b[k][m + 1]);
    if (m + 2 < n) {
      BigReal t0 = sqrt(h[m][m] * h[m][m] + h[m][m + 1] * h[m][m + 1]);
      BigReal t1 = h[m][m] / t0;
      BigReal t2 = h[m][m + 1] / t0;
      for (std::size_t i = m; i < n; ++i) {
        BigReal t3 = h[i][m], t4 = h[i][m + 1];
        h[i][m] = t1 * t3 + t2 * t4;
        h[i][m + 1] = t1 * t4 - t2 * t3;
      }
    }
    for (std::size_t i = m + 1; i < n; ++i)
      for (std::size_t j = std::min(i - 1, m + 1) + 1; j-- > 0;) reduce_entry(i, j);

    // A relation shows up as a vanishing entry of y; the matching column of B.
    std::size_t zero = n;
    BigReal smallest = abs(y[0]);
    for (std::size_t j = 0; j < n; ++j) {
      BigReal v = abs(y[j]);
      if (v <= smallest) {
        smallest = v;
        zero = j;
      }
    }
    if (smallest < detect) {
      std::vector<mpz_class> c(n);
      for (std::size_t k = 0; k < n; ++k) c[k] = b[k][zero];
      mpz_class biggest = 0;
      for (const auto& v : c) biggest = std::max<mpz_class>(biggest, abs(v));
      if (biggest > max_coeff) {
        out.status = IndependenceVerdict::Status::IndependentUpTo;
        return out;
      }
      return accept(std::move(c));
    }

    BigReal hmax(0, bits);
    for (std::size_t j = 0; j < n - 1; ++j) hmax = std::max(hmax, abs(h[j][j]));
    if (hmax.is_zero()) throw Error("disjointness.precision", "reduction degenerated");
    BigReal bound = BigReal(1, bits) / hmax;
    out.norm_bound = bound.to_double();
    if (bound > coeff_limit) {
      out.status = IndependenceVerdict::Status::IndependentUpTo;
      return out;
    }
    for (const auto& row : a)
      for (const auto& v : row)
        if (BigReal::from_mpz(abs(v), bits) > max_entry) {
          throw Error("disjointness.precision", "integer relation search exhausted the working precision");
        }
  }
  throw Error("disjointness.precision", "integer relation search did not converge");
}

IndependenceVerdict rotation_family_verdict(const std::vector<RotationAngle>& angles, const mpz_class& max_coeff,
                                            int digits) {
  if (angles.empty()) throw Error("disjointness.size", "empty family");
  for (const auto& a : angles)
    if (a.cf().size() < 2) throw Error("torus.rational_angle", "angle " + a.label() + " is rational");
  return integer_relation(family_values(angles, digits, true), max_coeff, digits);
}

IndependenceVerdict frequency_family_verdict(const std::vector<RotationAngle>& rates, const mpz_class& max_coeff,
                                             int digits) {
  if (rates.size() < 2) {
    IndependenceVerdict v;
    v.max_coeff = max_coeff;
    v.digits = digits;
    if (rates.empty()) throw Error("disjointness.size", "empty family");
    return v;
  }
  return integer_relation(family_values(rates, digits, false), max_coeff, digits);
}

ExtendResult extend_independent_family(const std::vector<RotationAngle>& current,
                                       const std::vector<RotationAngle>& candidates, const mpz_class& max_coeff,
                                       int digits) {
  if (!current.empty() && rotation_family_verdict(current, max_coeff, digits).dependent()) {
    throw Error("disjointness.not_independent", "the starting family already has an integer relation");
  }
  ExtendResult out;
  out.family = current;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto trial = out.family;
    trial.push_back(candidates[i]);
    try {
      if (rotation_family_verdict(trial, max_coeff, digits).dependent()) {
        out.rejected.push_back(i);
      } else {
        out.family = std::move(trial);
        out.accepted.push_back(i);
      }
    } catch (const Error& e) {
      out.aborted = true;
      out.abort_reason = e.what();
      break;
    }
  }
  return out;
}

CrossValidation cross_validate(const std::vector<RotationAngle>& angles, std::uint64_t steps, std::uint64_t grid,
                               const mpz_class& max_coeff, int digits) {
  if (angles.empty() || angles.size() > 4) throw Error("disjointness.size", "cross validation takes 1 to 4 angles");
  std::vector<FlowSpec> rotations;
  for (const auto& a : angles) rotations.push_back(FlowSpec::rotation(a));
  FlowSpec flow = rotations.size() == 1 ? rotations[0] : FlowSpec::product(rotations);
  auto probe = std::async(std::launch::async, [&] { return density_probe(flow, TorusPoint(flow.dim()), steps, grid); });
  CrossValidation out;
  out.verdict = rotation_family_verdict(angles, max_coeff, digits);
  out.coverage = probe.get();
  bool full = out.coverage.visited == out.coverage.cells;
  out.agree = out.verdict.dependent() ? !full : full;
  return out;
}

}  // namespace distal
