#include <doctest.h>

#include <cmath>
#include <numbers>

#include "distal/cocycle.hpp"
#include "distal/error.hpp"

using namespace distal;

namespace {

std::string error_code(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

const CocycleSpec& default_cocycle() {
  static const CocycleSpec c = build_cocycle(liouville_angle(4), 3);
  return c;
}

}  // namespace

TEST_SUITE("cocycle") {

TEST_CASE("default selection: base term plus Liouville-quality convergents") {
  const auto& c = default_cocycle();
  REQUIRE(c.terms().size() == 3);
  CHECK(c.terms()[0].q == 1);
  CHECK(c.terms()[1].q == 100);
  CHECK(c.terms()[2].q == 1000000);
  CHECK_FALSE(c.badly_approximable());
  // 9, 9909, 10009 and 109999 are convergents but approximate too poorly.
  const auto& conv = c.alpha().convergents();
  CHECK_FALSE(is_liouville_quality(conv[1]));
  CHECK(is_liouville_quality(conv[2]));
  CHECK_FALSE(is_liouville_quality(conv[3]));
  CHECK(c.terms()[2].lattice_dist == doctest::Approx(1e-18).epsilon(1e-6));
}

TEST_CASE("phi and G against a 80-digit evaluation") {
  // mpmath: phi(3/8) and G(3/8) for q in {1, 100, 10^6} with the lattice angle.
  const auto& c = default_cocycle();
  Frac128 x = Frac128::from_dyadic(3, 3);
  CHECK(c.phi(x) == doctest::Approx(-0.61363304165957542027).epsilon(1e-12));
  CHECK(c.potential(x) == doctest::Approx(0.7071067811865475244).epsilon(1e-12));
  CHECK(c.potential(x, 1) == doctest::Approx(std::sin(2 * std::numbers::pi * 0.375)).epsilon(1e-15));
}

TEST_CASE("phi telescopes: phi(x) = G(x + alpha) - G(x)") {
  const auto& c = default_cocycle();
  for (int i = 0; i < 64; ++i) {
    Frac128 x = Frac128::from_dyadic(static_cast<std::uint64_t>(i) * 37 + 5, 12);
    CHECK(c.phi(x) == doctest::Approx(c.potential(x + c.alpha().frac()) - c.potential(x)).epsilon(1e-14));
  }
}

TEST_CASE("coboundary identity at matching truncation") {
  auto r = residual_eq2(default_cocycle(), 3, 1, 10000);
  CHECK(r.samples == 10000);
  CHECK(r.max < 1e-12);
}

TEST_CASE("dropping the last term costs at most 4 pi^2 a ||q alpha||") {
  const auto& c = default_cocycle();
  const auto& last = c.terms().back();
  double bound = 4 * std::numbers::pi * std::numbers::pi * last.a * last.lattice_dist;
  // Below double resolution; the residual is rounding noise.
  CHECK(residual_eq2(c, 2, 1, 10000).max <= bound + 1e-13);
  // Dropping the q=100 term too leaves a visible error of size ~ 4 pi^2 * 10^-4 * ... bounded by the sum.
  const auto& mid = c.terms()[1];
  double bound2 = 4 * std::numbers::pi * std::numbers::pi * (mid.a * mid.lattice_dist + last.a * last.lattice_dist);
  double r1 = residual_eq2(c, 1, 1, 10000).max;
  CHECK(r1 <= bound2 + 1e-13);
  CHECK(r1 > 1e-6);
}

TEST_CASE("n = 2 does not solve the equation") {
  auto r = residual_eq2(default_cocycle(), 3, 2, 10000);
  CHECK(r.median > 0.1);
}

TEST_CASE("no character solves the minimality equation") {
  auto s = residual_eq1_search(default_cocycle(), 10, {1, -1, 2, -2}, 4096);
  CHECK(s.candidates == 84);
  CHECK(s.min_sup_residual >= 0.5);
  CHECK(error_code([] { residual_eq1(default_cocycle(), FourierPoly::character(1), 0, 64); }) ==
        "cocycle.zero_power");
}

TEST_CASE("a genuine coboundary is detected by the residual") {
  // t(x) = e(x + alpha) / e(x) = e(alpha) is a constant: the cocycle with no
  // terms and shift alpha solves f(x+alpha)/f(x) = t with f = e(x).
  RotationAngle a = angle_from_expression("sqrt(2)-1");
  CocycleSpec c = make_cocycle(a, {}, 0, a.frac());
  CHECK(residual_eq1(c, FourierPoly::character(1), 1, 1024) < 1e-12);
  CHECK(residual_eq1(c, FourierPoly::character(2), 1, 1024) > 0.5);
}

TEST_CASE("geometric coefficients and truncation") {
  CoeffRule g = CoeffRule::geometric(0.5);
  // a_k = r^k with k counted from 1.
  CHECK(g.coefficient(1) == 0.5);
  CHECK(g.coefficient(3) == 0.125);
  CHECK(CoeffRule::parse(g.id()).ratio == 0.5);
  CocycleSpec c = build_cocycle(liouville_angle(4), 3, g);
  CHECK(c.terms()[2].a == 0.125);
  CocycleSpec t = c.truncated(2);
  CHECK(t.terms().size() == 2);
  CHECK(t.tail_bound() >= c.tail_bound());
  CHECK(error_code([&] { eval_phi(t, Frac128(), 0.0); }) == "cocycle.tolerance");
}

TEST_CASE("the measurable solution is not equicontinuous") {
  // Over x-pairs at distance <= 1/q_K the oscillation of G_K stays near 2
  // while 1/q_K shrinks by a factor 10^24 across the sequence. It is not
  // monotone in K: 2, 2.031, 2.0003 (the q=100 term adds to the base term).
  CocycleSpec c = build_cocycle(liouville_angle(5), 4);
  for (std::size_t k = 1; k <= 4; ++k) CHECK(solution_oscillation(c, k) > 1.9);
  CHECK(solution_oscillation(c, 2) > solution_oscillation(c, 3));
  CHECK(error_code([&] { solution_oscillation(c, 5); }) == "cocycle.range");
}

TEST_CASE("sup bound holds") {
  const auto& c = default_cocycle();
  double sup = 0;
  for (std::uint64_t i = 0; i < 4096; ++i) sup = std::max(sup, std::abs(c.phi(Frac128::from_dyadic(i, 12))));
  CHECK(sup <= c.sup_bound());
}

}
