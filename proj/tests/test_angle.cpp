#include <doctest.h>

#include "distal/angle.hpp"
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

}  // namespace

TEST_SUITE("angle") {

TEST_CASE("lattice quantization matches an independent 300-digit evaluation") {
  // floor(alpha * 2^128) computed separately with mpmath at 300 digits.
  CHECK(angle_from_expression("sqrt(2)-1").frac().to_hex() == "6a09e667f3bcc908b2fb1366ea957d3e");
  CHECK(angle_from_expression("golden").frac().to_hex() == "9e3779b97f4a7c15f39cc0605cedc834");
}

TEST_CASE("Liouville convergents") {
  // Denominators of sum_{k<=5} 10^{-k!} from an mpmath expansion.
  RotationAngle a = liouville_angle(4);
  std::vector<std::string> want{"1", "9", "100", "9909", "10009", "109999", "1000000"};
  REQUIRE(a.convergents().size() >= want.size());
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(a.convergents()[i].q.get_str() == want[i]);
  CHECK(a.cf()[1] == 9);
  CHECK(a.cf()[3] == 99);
  CHECK(a.tail_norm_bound().has_value());
  // 10^6 * alpha is an integer plus 10^{6-24}.
  CHECK(a.convergents()[6].dist == doctest::Approx(1e-18L).epsilon(1e-9));
}

TEST_CASE("golden ratio has all-ones quotients") {
  RotationAngle g = angle_from_expression("golden");
  REQUIRE(g.cf().size() > 30);
  for (std::size_t i = 1; i < 30; ++i) CHECK(g.cf()[i] == 1);
  // Fibonacci denominators.
  CHECK(g.convergents()[10].q == 89);
}

TEST_CASE("sqrt 2 minus 1 has quotients 2") {
  RotationAngle a = angle_from_expression("sqrt(2)-1");
  for (std::size_t i = 1; i < 40; ++i) CHECK(a.cf()[i] == 2);
}

TEST_CASE("continued fraction errors") {
  CHECK(error_code([] { continued_fraction("0.5", 5); }) == "torus.rational_angle");
  CHECK(error_code([] { continued_fraction("0.4142135623", 40); }) == "torus.rational_angle");
  CHECK(error_code([] { continued_fraction("0.4142135623", 5); }) == "torus.precision");
  // 45 digits pin down roughly 58 quotients of sqrt(2)-1, not 80.
  CHECK(error_code([] { continued_fraction("0.414213562373095048801688724209698078569671875", 80); }) ==
        "torus.precision");
  CHECK(continued_fraction("0.414213562373095048801688724209698078569671875", 40).cf().size() == 40);
  CHECK(error_code([] { angle_from_expression("sqrt(2"); }) == "torus.parse");
}

TEST_CASE("scaled angle") {
  RotationAngle a = angle_from_expression("sqrt(2)-1");
  RotationAngle three = scaled_angle(a, "3");
  CHECK(three.frac() == angle_from_expression("frac(3*(sqrt(2)-1))").frac());
  CHECK(three.to_double() == doctest::Approx(3 * 0.41421356237309503 - 1));
}

TEST_CASE("lattice angles may be rational") {
  RotationAngle q = lattice_angle(Frac128::from_dyadic(1, 2));
  CHECK(q.frac() == Frac128::from_dyadic(1, 2));
  CHECK(q.cf().back() == 4);
}

}
