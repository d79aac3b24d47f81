#include "distal/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "distal/error.hpp"
#include "distal/parallel.hpp"

namespace distal {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> unit_phase(double turns) { return std::polar(1.0, kTwoPi * turns); }

CocycleTerm make_term(const RotationAngle& alpha, const mpz_class& q, long double dist, double a) {
  CocycleTerm t;
  t.q = q;
  t.q_low = mod_2_128(q);
  t.a = a;
  t.dist = dist;
  t.lattice_dist = alpha.frac().times(t.q_low).norm();
  return t;
}

Frac128 grid_point(std::size_t i, std::size_t grid) {
  u128 step = (~u128{0}) / grid + 1;
  return Frac128::from_raw(step * i);
}

}  // namespace

double CoeffRule::coefficient(std::size_t k) const {
  return kind == Kind::Unit ? 1.0 : std::pow(ratio, static_cast<double>(k));
}

std::string CoeffRule::id() const {
  if (kind == Kind::Unit) return "unit";
  char buf[64];
  std::snprintf(buf, sizeof buf, "geometric(%.17g)", ratio);
  return buf;
}

CoeffRule CoeffRule::parse(const std::string& id) {
  if (id == "unit") return unit();
  if (id.rfind("geometric(", 0) == 0 && id.back() == ')') {
    try {
      return geometric(std::stod(id.substr(10, id.size() - 11)));
    } catch (const std::logic_error&) {
    }
  }
  throw Error("cocycle.parse", "unknown coefficient rule '" + id + "'");
}

CocycleSpec::CocycleSpec(RotationAngle alpha, std::vector<CocycleTerm> terms, long double tail_bound, Frac128 shift)
    : alpha_(std::move(alpha)), terms_(std::move(terms)), tail_bound_(tail_bound), shift_(shift) {}

double CocycleSpec::coefficient_sum() const {
  double s = 0;
  for (const auto& t : terms_) s += t.a;
  return s;
}

long double CocycleSpec::weighted_sum() const {
  long double s = 0;
  for (const auto& t : terms_) s += static_cast<long double>(t.a) * t.dist;
  return s;
}

double CocycleSpec::sup_bound() const {
  double s = shift_.norm();
  for (const auto& t : terms_) s += kTwoPi * std::abs(t.a) * t.lattice_dist;
  return s;
}

double CocycleSpec::potential(Frac128 x, std::size_t k) const {
  double g = 0;
  std::size_t n = std::min(k, terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = terms_[i];
    g += t.a * std::sin(kTwoPi * x.times(t.q_low).to_double());
  }
  return g;
}

double CocycleSpec::phi(Frac128 x) const {
  double v = potential(x + alpha_.frac()) - potential(x);
  if (shift_ != Frac128{}) {
    double s = shift_.to_double();
    v += s > 0.5 ? s - 1.0 : s;
  }
  return v;
}

CocycleSpec CocycleSpec::truncated(std::size_t k) const {
  std::size_t n = std::min(k, terms_.size());
  std::vector<CocycleTerm> kept(terms_.begin(), terms_.begin() + static_cast<std::ptrdiff_t>(n));
  long double tail = tail_bound_;
  for (std::size_t i = n; i < terms_.size(); ++i) tail += 2.0L * std::numbers::pi_v<long double> * terms_[i].a * terms_[i].dist;
  CocycleSpec out(alpha_, std::move(kept), tail, shift_);
  out.badly_approximable_ = badly_approximable_;
  return out;
}

bool is_liouville_quality(const Convergent& c) {
  long double q = mpz_get_d(c.q.get_mpz_t());
  if (q < 2) return false;
  long double limit = std::min(1.0L / (32.0L * q), std::pow(q, -1.5L));
  return c.dist <= limit;
}

CocycleSpec build_cocycle(const RotationAngle& alpha, std::size_t count, CoeffRule rule) {
  const auto& conv = alpha.convergents();
  if (count == 0) return CocycleSpec(alpha, {}, 0);
  if (conv.empty()) throw Error("cocycle.range", "angle has no convergents");
  const mpz_class q_limit = mpz_class(1) << 96;

  std::vector<std::size_t> usable;
  for (std::size_t j = 0; j < conv.size(); ++j) {
    if (conv[j].q >= q_limit) break;
    if (!usable.empty() && conv[usable.back()].q == conv[j].q) continue;
    usable.push_back(j);
  }

  std::vector<std::size_t> picked{usable.front()};
  for (std::size_t idx = 1; idx < usable.size() && picked.size() < count; ++idx) {
    if (is_liouville_quality(conv[usable[idx]])) picked.push_back(usable[idx]);
  }
  bool badly_approximable = false;
  if (picked.size() < count) {
    badly_approximable = true;
    for (std::size_t idx = 1; idx < usable.size() && picked.size() < count; ++idx) {
      if (std::find(picked.begin(), picked.end(), usable[idx]) == picked.end()) picked.push_back(usable[idx]);
    }
    std::sort(picked.begin(), picked.end());
  }
  if (picked.size() < count) {
    throw Error("cocycle.range", "angle has only " + std::to_string(picked.size()) + " usable convergents, need " +
                                     std::to_string(count));
  }

  std::vector<CocycleTerm> terms;
  for (std::size_t k = 0; k < picked.size(); ++k) {
    const auto& c = conv[picked[k]];
    terms.push_back(make_term(alpha, c.q, c.dist, rule.coefficient(k + 1)));
  }
  if (terms.size() >= 2) {
    long double last = terms.back().a * terms.back().dist;
    long double prev = terms[terms.size() - 2].a * terms[terms.size() - 2].dist;
    if (last >= prev) {
      throw Error("cocycle.not_continuous", "cocycle not continuous at this truncation: a_k ||q_k alpha|| grows from " +
                                                std::to_string(static_cast<double>(prev)) + " to " +
                                                std::to_string(static_cast<double>(last)));
    }
  }

  // Omitted terms: later Liouville-quality convergents, then the angle's own
  // a priori tail beyond its stored expansion.
  long double tail = 0;
  std::size_t k = terms.size();
  if (!badly_approximable) {
    for (std::size_t j = picked.back() + 1; j < conv.size(); ++j) {
      if (!is_liouville_quality(conv[j])) continue;
      ++k;
      tail += rule.coefficient(k) * conv[j].dist;
    }
    if (auto beyond = alpha.tail_norm_bound()) tail += rule.coefficient(k + 1) * *beyond;
  }
  tail *= 2.0L * std::numbers::pi_v<long double>;
  CocycleSpec spec(alpha, std::move(terms), tail);
  spec.set_badly_approximable(badly_approximable);
  return spec;
}

CocycleSpec make_cocycle(const RotationAngle& alpha, const std::vector<std::pair<mpz_class, double>>& terms,
                         long double tail_bound, Frac128 shift) {
  std::vector<CocycleTerm> out;
  mpfr_prec_t bits = bits_for_digits(alpha.digits());
  BigReal value = alpha.value();
  for (const auto& [q, a] : terms) {
    if (q <= 0) throw Error("cocycle.parse", "cocycle frequencies must be positive");
    long double dist = (BigReal::from_mpz(q, bits) * value).dist_to_int().to_long_double();
    out.push_back(make_term(alpha, q, dist, a));
  }
  return CocycleSpec(alpha, std::move(out), tail_bound, shift);
}

double eval_phi(const CocycleSpec& c, Frac128 x, double tau) {
  if (static_cast<long double>(tau) < c.tail_bound()) {
    throw Error("cocycle.tolerance", "tolerance below the cocycle's tail bound");
  }
  return c.phi(x);
}

std::complex<double> FourierPoly::operator()(Frac128 x) const {
  std::complex<double> s{0.0, 0.0};
  for (const auto& [j, coeff] : terms) s += coeff * unit_phase(x.times_signed(j).to_double());
  return s;
}

namespace {

double eq1_sup(const std::vector<double>& phis, const std::vector<std::complex<double>>& ratios, int m) {
  double worst = 0;
  for (std::size_t i = 0; i < phis.size(); ++i) {
    std::complex<double> tm = unit_phase(m * phis[i]);
    worst = std::max(worst, std::abs(ratios[i] - tm));
  }
  return worst;
}

}  // namespace

double residual_eq1(const CocycleSpec& c, const FourierPoly& f, int m, std::size_t grid) {
  if (m == 0) throw Error("cocycle.zero_power", "the minimality equation needs a nonzero power m");
  if (grid == 0) throw Error("cocycle.range", "empty grid");
  std::vector<double> phis(grid);
  std::vector<std::complex<double>> ratios(grid);
  const Frac128 alpha = c.alpha().frac();
  for (std::size_t i = 0; i < grid; ++i) {
    Frac128 x = grid_point(i, grid);
    std::complex<double> fx = f(x);
    std::complex<double> fy = f(x + alpha);
    if (std::abs(fx) < 1e-12 || std::abs(fy) < 1e-12) {
      throw Error("cocycle.non_unimodular", "test function vanishes on the grid");
    }
    ratios[i] = (fy / std::abs(fy)) / (fx / std::abs(fx));
    phis[i] = c.phi(x);
  }
  return eq1_sup(phis, ratios, m);
}

Eq1Search residual_eq1_search(const CocycleSpec& c, std::int64_t max_frequency, const std::vector<int>& powers,
                              std::size_t grid) {
  for (int m : powers)
    if (m == 0) throw Error("cocycle.zero_power", "the minimality equation needs a nonzero power m");
  std::vector<double> phis(grid);
  parallel_chunks(grid, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) phis[i] = c.phi(grid_point(i, grid));
  });

  // For a character f_j the ratio f(x+alpha)/f(x) is the constant e^{2 pi i j alpha}.
  std::vector<std::pair<std::int64_t, int>> candidates;
  for (std::int64_t j = -max_frequency; j <= max_frequency; ++j)
    for (int m : powers) candidates.emplace_back(j, m);
  std::vector<double> sups(candidates.size());
  parallel_chunks(candidates.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t idx = b; idx < e; ++idx) {
      auto [j, m] = candidates[idx];
      std::complex<double> ratio = unit_phase(c.alpha().frac().times_signed(j).to_double());
      double worst = 0;
      for (double p : phis) worst = std::max(worst, std::abs(ratio - unit_phase(m * p)));
      sups[idx] = worst;
    }
  });
  Eq1Search out;
  out.candidates = candidates.size();
  out.min_sup_residual = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
    if (sups[idx] < out.min_sup_residual) {
      out.min_sup_residual = sups[idx];
      out.best_frequency = candidates[idx].first;
      out.best_power = candidates[idx].second;
    }
  }
  return out;
}

std::complex<double> MeasurableSolution::operator()(Frac128 x) const { return unit_phase(potential(x)); }

ResidualSummary residual_eq2(const CocycleSpec& c, std::size_t k, int n, std::size_t samples, std::uint64_t seed) {
  if (n == 0) throw Error("cocycle.zero_power", "the coboundary equation needs a nonzero power n");
  MeasurableSolution g(c, k);
  std::mt19937_64 rng(seed);
  std::vector<double> residuals(samples);
  const Frac128 alpha = c.alpha().frac();
  for (std::size_t s = 0; s < samples; ++s) {
    std::uint64_t hi = rng();
    std::uint64_t lo = rng();
    Frac128 x = Frac128::from_words(hi, lo);
    std::complex<double> lhs = g(x + alpha) / g(x);
    std::complex<double> rhs = unit_phase(n * c.phi(x));
    residuals[s] = std::abs(lhs - rhs);
  }
  ResidualSummary out;
  out.samples = samples;
  if (samples == 0) return out;
  double sum = 0;
  for (double r : residuals) sum += r;
  out.mean = sum / static_cast<double>(samples);
  std::sort(residuals.begin(), residuals.end());
  out.min = residuals.front();
  out.max = residuals.back();
  out.median = residuals[samples / 2];
  return out;
}

double solution_oscillation(const CocycleSpec& c, std::size_t k, std::size_t grid) {
  if (k == 0 || k > c.terms().size()) throw Error("cocycle.range", "truncation out of range");
  double q_real = mpz_get_d(c.terms()[k - 1].q.get_mpz_t());
  // Probe points i * golden rather than a dyadic grid: when 2^j divides q, a
  // dyadic grid sees a single phase of sin(2 pi q x).
  const Frac128 golden = Frac128::from_words(0x9e3779b97f4a7c15ULL, 0xf39cc0605cedc834ULL);
  double worst = 0;
  for (int step = 1; step <= 8; ++step) {
    Frac128 offset = Frac128::from_double(step / (8.0 * q_real));
    for (std::size_t i = 0; i < grid; ++i) {
      Frac128 x = golden.times(i + 1);
      worst = std::max(worst, std::abs(c.potential(x + offset, k) - c.potential(x, k)));
    }
  }
  return worst;
}

}  // namespace distal
