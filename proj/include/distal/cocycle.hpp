#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "distal/angle.hpp"
#include "distal/torus.hpp"

namespace distal {

struct CoeffRule {
  enum class Kind { Unit, Geometric };
  Kind kind = Kind::Unit;
  double ratio = 1.0;

  static CoeffRule unit() { return {}; }
  static CoeffRule geometric(double r) { return {Kind::Geometric, r}; }
  // a_k for the k-th selected term, k starting at 1.
  double coefficient(std::size_t k) const;
  std::string id() const;
  static CoeffRule parse(const std::string& id);
};

struct CocycleTerm {
  mpz_class q;
  u128 q_low = 0;            // q mod 2^128, all that Frac128 multiplication needs
  double a = 0;
  long double dist = 0;      // ||q alpha|| at full precision
  double lattice_dist = 0;   // ||q alpha|| for the quantized angle actually iterated
};

// phi(x) = shift + sum_k a_k [sin(2 pi q_k (x + alpha)) - sin(2 pi q_k x)], the
// additive form of t(x) = e^{2 pi i phi(x)}. phi is evaluated as
// G(x + alpha) - G(x) with G(x) = sum_k a_k sin(2 pi q_k x), so the telescoping
// identity holds term for term in floating point.
class CocycleSpec {
 public:
  CocycleSpec(RotationAngle alpha, std::vector<CocycleTerm> terms, long double tail_bound, Frac128 shift = {});

  const RotationAngle& alpha() const { return alpha_; }
  const std::vector<CocycleTerm>& terms() const { return terms_; }
  long double tail_bound() const { return tail_bound_; }
  Frac128 shift() const { return shift_; }
  bool badly_approximable() const { return badly_approximable_; }
  void set_badly_approximable(bool v) { badly_approximable_ = v; }

  double coefficient_sum() const;
  // sum_k a_k ||q_k alpha|| over the stored terms.
  long double weighted_sum() const;
  // sup |phi| <= |shift| + sum_k 2 pi a_k ||q_k alpha|| for the iterated angle.
  double sup_bound() const;

  // G truncated to the first `k` terms (all terms when k exceeds the count).
  double potential(Frac128 x, std::size_t k = static_cast<std::size_t>(-1)) const;
  double phi(Frac128 x) const;

  // A copy restricted to the first k terms; omitted terms move into the tail.
  CocycleSpec truncated(std::size_t k) const;

 private:
  RotationAngle alpha_;
  std::vector<CocycleTerm> terms_;
  long double tail_bound_ = 0;
  Frac128 shift_;
  bool badly_approximable_ = false;
};

// A continuous function of the Furstenberg family above rotation by alpha.
// The first convergent q_0 = 1 always contributes the base term; further
// terms come from convergents whose approximation has Liouville quality
// (||q alpha|| <= min(1/(32 q), q^{-3/2})), in increasing order, up to `count`.
// Angles without enough such convergents (badly approximable ones) are filled
// with consecutive convergents and flagged. Errors: cocycle.not_continuous
// when a_k ||q_k alpha|| stops shrinking at the truncation point.
CocycleSpec build_cocycle(const RotationAngle& alpha, std::size_t count, CoeffRule rule = CoeffRule::unit());

// Cocycle from explicit (q, a) pairs; tail_bound as given.
CocycleSpec make_cocycle(const RotationAngle& alpha, const std::vector<std::pair<mpz_class, double>>& terms,
                         long double tail_bound = 0, Frac128 shift = {});

// Convergent index test used by build_cocycle.
bool is_liouville_quality(const Convergent& c);

// phi(x) within tolerance tau of the untruncated series. Errors:
// cocycle.tolerance when tau < tail_bound.
double eval_phi(const CocycleSpec& c, Frac128 x, double tau);

// Finite Fourier polynomial on the circle.
struct FourierPoly {
  std::vector<std::pair<std::int64_t, std::complex<double>>> terms;

  static FourierPoly character(std::int64_t j) { return FourierPoly{{{j, {1.0, 0.0}}}}; }
  std::complex<double> operator()(Frac128 x) const;
};

// max over a uniform grid of |f(x+alpha)/f(x) - t(x)^m| with f normalized to
// modulus one. Errors: cocycle.zero_power for m == 0, cocycle.non_unimodular
// when |f| vanishes on the grid.
double residual_eq1(const CocycleSpec& c, const FourierPoly& f, int m, std::size_t grid);

struct Eq1Search {
  double min_sup_residual = 0;
  std::int64_t best_frequency = 0;
  int best_power = 0;
  std::size_t candidates = 0;
};

// Refutation search over characters e^{2 pi i j x}, |j| <= max_frequency, and
// the given powers m.
Eq1Search residual_eq1_search(const CocycleSpec& c, std::int64_t max_frequency, const std::vector<int>& powers,
                              std::size_t grid);

// The measurable solution g_K(x) = e^{2 pi i G_K(x)} of g(x+alpha)/g(x) = t(x).
class MeasurableSolution {
 public:
  MeasurableSolution(const CocycleSpec& c, std::size_t k) : cocycle_(&c), k_(k) {}
  std::size_t truncation() const { return k_; }
  double potential(Frac128 x) const { return cocycle_->potential(x, k_); }
  std::complex<double> operator()(Frac128 x) const;

 private:
  const CocycleSpec* cocycle_;
  std::size_t k_;
};

struct ResidualSummary {
  std::size_t samples = 0;
  double min = 0;
  double median = 0;
  double mean = 0;
  double max = 0;
};

// Distribution of |g_K(x+alpha)/g_K(x) - t(x)^n| over pseudo-random samples.
ResidualSummary residual_eq2(const CocycleSpec& c, std::size_t k, int n, std::size_t samples,
                             std::uint64_t seed = 0x5eed);

// max |G_K(x) - G_K(x')| over pairs at distance <= 1/q_K, probed on a grid.
double solution_oscillation(const CocycleSpec& c, std::size_t k, std::size_t grid = 4096);

}  // namespace distal
