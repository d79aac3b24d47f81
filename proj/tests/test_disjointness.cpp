#include <doctest.h>

#include <cmath>

#include "distal/disjointness.hpp"
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

std::vector<BigReal> reals(std::initializer_list<const char*> exprs, int digits) {
  std::vector<BigReal> out;
  for (const char* e : exprs) out.push_back(evaluate_expression(e, digits));
  return out;
}

std::vector<std::string> coeff_strings(const IndependenceVerdict& v) {
  std::vector<std::string> out;
  for (const auto& c : v.certificate->coeffs) out.push_back(c.get_str());
  return out;
}

// Smallest |c . x| over the nonzero integer box |c_i| <= r, in doubles. A true
// relation inside the box shows up as an exact-looking zero.
double box_minimum(const std::vector<double>& x, int r) {
  double best = 1e300;
  std::vector<int> c(x.size(), -r);
  while (true) {
    bool nonzero = false;
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      nonzero = nonzero || c[i] != 0;
      s += c[i] * x[i];
    }
    if (nonzero) best = std::min(best, std::abs(s));
    std::size_t i = 0;
    while (i < c.size() && c[i] == r) c[i++] = -r;
    if (i == c.size()) break;
    ++c[i];
  }
  return best;
}

}  // namespace

TEST_SUITE("disjointness") {

TEST_CASE("small relations") {
  auto v = integer_relation(reals({"1", "1/2"}, 60), 1000000, 60);
  REQUIRE(v.dependent());
  CHECK(coeff_strings(v) == std::vector<std::string>{"1", "-2"});
  auto w = integer_relation(reals({"1", "sqrt(2)", "sqrt(8)"}, 120), 1000000, 120);
  REQUIRE(w.dependent());
  CHECK(coeff_strings(w) == std::vector<std::string>{"0", "2", "-1"});
}

TEST_CASE("relation found by mpmath pslq is recovered") {
  // mpmath.pslq([1, sqrt2, 3 sqrt2 + 5/7]) = [5, 21, -7].
  auto v = integer_relation(reals({"1", "sqrt(2)", "3*sqrt(2)+5/7"}, 120), 1000000, 120);
  REQUIRE(v.dependent());
  CHECK(coeff_strings(v) == std::vector<std::string>{"5", "21", "-7"});
  // The brute-force box search sees the same relation.
  CHECK(box_minimum({1.0, std::sqrt(2.0), 3 * std::sqrt(2.0) + 5.0 / 7}, 21) < 1e-12);
}

TEST_CASE("certificates re-verify at twice the precision") {
  auto v = integer_relation(reals({"1", "sqrt(2)", "sqrt(8)"}, 120), 1000000, 120);
  auto hi = reals({"1", "sqrt(2)", "sqrt(8)"}, 240);
  BigReal r = relation_residual(v.certificate->coeffs, hi);
  CHECK(r < pow10(-60, r.precision()));
  CHECK(v.certificate->residual_log10 < -60);
}

TEST_CASE("sqrt 2 and sqrt 3 are independent up to the bound") {
  auto v = integer_relation(reals({"1", "sqrt(2)", "sqrt(3)"}, 120), 1000000, 120);
  CHECK_FALSE(v.dependent());
  CHECK(v.norm_bound > 1e6 * std::sqrt(3.0));
  // mpmath.pslq(..., maxcoeff=10^6) returns None as well; the box search finds
  // nothing close to zero among small coefficients.
  CHECK(box_minimum({1.0, std::sqrt(2.0), std::sqrt(3.0)}, 30) > 1e-6);
}

TEST_CASE("rotation families") {
  RotationAngle a = angle_from_expression("sqrt(2)-1");
  RotationAngle a2 = angle_from_expression("frac(2*(sqrt(2)-1))");
  auto dep = rotation_family_verdict({a, a2});
  REQUIRE(dep.dependent());
  CHECK(coeff_strings(dep) == std::vector<std::string>{"0", "2", "-1"});
  CHECK_FALSE(rotation_family_verdict({angle_from_expression("golden")}).dependent());
  auto triple = rotation_family_verdict(
      {a, angle_from_expression("sqrt(3)-1"), angle_from_expression("sqrt(5)-2")}, 10000, 120);
  CHECK_FALSE(triple.dependent());
  // Subsets of an independent family stay independent.
  CHECK_FALSE(rotation_family_verdict({a, angle_from_expression("sqrt(5)-2")}, 10000, 120).dependent());
}

TEST_CASE("frequency families have no constant") {
  // 1/2 and 1 are rationally related as frequencies, but as rotations only
  // modulo the integers; sqrt2 and sqrt8 are related either way.
  RotationAngle s2 = angle_from_expression("sqrt(2)-1");
  RotationAngle s3 = angle_from_expression("sqrt(3)-1");
  CHECK_FALSE(frequency_family_verdict({s2, s3}).dependent());
  auto v = frequency_family_verdict({angle_from_expression("sqrt(2)-1"), angle_from_expression("2*sqrt(2)-2")});
  REQUIRE(v.dependent());
  CHECK(coeff_strings(v) == std::vector<std::string>{"2", "-1"});
}

TEST_CASE("precision and size errors") {
  CHECK(error_code([] { integer_relation(reals({"1"}, 60), 10, 60); }) == "disjointness.size");
  CHECK(error_code([] { integer_relation(reals({"1", "sqrt(2)", "sqrt(3)"}, 40), 10, 40); }) ==
        "disjointness.precision");
  // Asking for more digits than the angle carries.
  CHECK(error_code([] { rotation_family_verdict({angle_from_expression("golden", 60)}, 1000, 120); }) ==
        "disjointness.precision");
  std::vector<RotationAngle> five(5, angle_from_expression("golden"));
  CHECK(error_code([&] { cross_validate(five, 10, 4); }) == "disjointness.size");
}

TEST_CASE("greedy extension") {
  RotationAngle a = angle_from_expression("sqrt(2)-1");
  auto r = extend_independent_family({a}, {angle_from_expression("2*sqrt(2)-2"), angle_from_expression("sqrt(3)-1")});
  REQUIRE(r.family.size() == 2);
  CHECK(r.family[1].label() == "sqrt(3)-1");
  CHECK(r.accepted == std::vector<std::size_t>{1});
  CHECK(r.rejected == std::vector<std::size_t>{0});
  CHECK_FALSE(r.aborted);
  CHECK(extend_independent_family({}, {angle_from_expression("golden")}).family.size() == 1);
  CHECK(extend_independent_family({a}, {}).family.size() == 1);
  CHECK(error_code([&] { extend_independent_family({a, angle_from_expression("2*sqrt(2)-2")}, {}); }) ==
        "disjointness.not_independent");
}

TEST_CASE("cross validation agrees on the regression corpus") {
  auto dep = cross_validate({angle_from_expression("sqrt(2)-1"), angle_from_expression("frac(2*(sqrt(2)-1))")},
                            1000000, 32);
  CHECK(dep.agree);
  CHECK(dep.coverage.coverage <= 0.1);
  auto ind = cross_validate({angle_from_expression("sqrt(2)-1"), angle_from_expression("sqrt(3)-1")}, 1000000, 32);
  CHECK(ind.agree);
  CHECK(ind.coverage.coverage == 1.0);
  auto one = cross_validate({angle_from_expression("golden")}, 10000, 32);
  CHECK(one.agree);
}

TEST_CASE("coefficient formatting") { CHECK(format_coeffs({0, 2, -1}) == "(0,2,-1)"); }

}
