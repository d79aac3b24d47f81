#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "distal/error.hpp"
#include "distal/interp.hpp"

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

DistalSequence random_sequence(std::uint64_t seed, std::int64_t n_min, std::size_t len) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> v(len);
  for (auto& x : v) x = u(rng);
  return DistalSequence(n_min, v);
}

// Midpoint rule; exact on each linear piece when the step divides the unit.
double riemann(const InterpolatedFunction& f, double a, int per_unit) {
  double step = 1.0 / per_unit, s = 0;
  auto n = static_cast<long>(std::llround(a * per_unit));
  for (long k = 0; k < n; ++k) s += f((k + 0.5) * step);
  return s * step;
}

}  // namespace

TEST_SUITE("interp") {

TEST_CASE("sequence access") {
  DistalSequence h(-2, {1, -3, 2});
  CHECK(h.n_max() == 0);
  CHECK(h(-1) == -3);
  CHECK(h.sup() == 3);
  CHECK(h.contains(0));
  CHECK_FALSE(h.contains(1));
  CHECK(error_code([&] { h(5); }) == "interp.range");
}

TEST_CASE("interpolation is piecewise linear through h") {
  DistalSequence h = random_sequence(1, -10, 41);
  InterpolatedFunction f = interpolate(h);
  for (std::int64_t n = -10; n < 30; ++n) {
    CHECK(f(static_cast<double>(n)) == h(n));
    CHECK(f(n + 0.25) == doctest::Approx(0.75 * h(n) + 0.25 * h(n + 1)).epsilon(1e-14));
  }
  CHECK(f.sup() == h.sup());
}

TEST_CASE("exact integral against a Riemann sum") {
  DistalSequence h = random_sequence(2, 0, 200);
  InterpolatedFunction f = interpolate(h);
  for (double a : {1.0, 7.5, 50.25, 199.0}) {
    CHECK(f.integral(a) == doctest::Approx(riemann(f, a, 64)).epsilon(1e-10));
  }
  // Trapezoid identity at integers: int_0^N f = sum_{n<N} h(n) - (h(0) - h(N)) / 2.
  double s = 0;
  for (int n = 0; n < 100; ++n) s += h(n);
  CHECK(f.integral(100) == doctest::Approx(s - (h(0) - h(100)) / 2).epsilon(1e-12));
}

TEST_CASE("Lipschitz constant") {
  DistalSequence h(0, {0, 1, -1, 0.5});
  auto r = equicontinuity_check(h);
  CHECK(r.lipschitz == 2);
  CHECK(r.within_bound);
  CHECK_FALSE(r.within_nominal_constant);
}

TEST_CASE("even-zero normalization") {
  DistalSequence h(0, {5, 1, 5, 1, 5, 1, 5});
  auto r = even_zero_normalize(h, {2}, {6});
  for (std::int64_t n = 0; n <= r.h.n_max(); n += 2) CHECK(r.h(n) == 0);
  // With h vanishing on evens, continuous means at even A equal discrete ones.
  InterpolatedFunction f = interpolate(r.h);
  double s = 0;
  for (std::int64_t n = 0; n < 6; ++n) s += r.h(n);
  CHECK(f.integral(6) == doctest::Approx(s).epsilon(1e-14));
}

TEST_CASE("divergent means need even scales in range") {
  InterpolatedFunction f = interpolate(random_sequence(3, 0, 20));
  CHECK(error_code([&] { divergent_means(f, {3}, {8}); }) == "interp.odd_scale");
  CHECK(error_code([&] { divergent_means(f, {4}, {40}); }) == "interp.range");
  auto r = divergent_means(f, {4}, {10});
  CHECK(r.pairs.size() == 1);
  CHECK(r.pairs[0].first.kind == MeanEstimate::Kind::Continuous);
}

TEST_CASE("no divergent part on a uniquely ergodic flow") {
  FlowSpec rot = FlowSpec::product({FlowSpec::rotation(angle_from_expression("sqrt(2)-1")),
                                    FlowSpec::rotation(angle_from_expression("golden"))});
  CHECK(error_code([&] {
          generate_h(rot, TorusPoint(2), TestFunction::character({1, 1}), GenerateOptions{{100}, {9910}, 0});
        }) == "interp.no_divergent_part");
}

TEST_CASE("sequence from the default skew product") {
  FlowSpec f = FlowSpec::skew(build_cocycle(liouville_angle(4), 3));
  DistalSequence h =
      generate_h(f, TorusPoint(2), TestFunction::parse("e(-49,-10)", 2), GenerateOptions{{100}, {9910}, 0});
  CHECK(h.n_min() == -9912);
  CHECK(h.n_max() == 9912);
  CHECK(h.sup() <= 1.0);
  // h(-1) comes from the inverse map.
  TorusPoint back = step_inverse(f, TorusPoint(2));
  double im = TestFunction::parse("e(-49,-10)", 2)(back).imag();
  double re = TestFunction::parse("e(-49,-10)", 2)(back).real();
  CHECK((h(-1) == im || h(-1) == re));
  CHECK(h.provenance().f_id == "e(-49,-10)");
  auto norm = even_zero_normalize(h, {100}, {9910});
  CHECK(norm.ratio >= 0.5);
  InterpolatedFunction fn = interpolate(norm.h);
  CHECK(divergent_means(fn, {100}, {9910}).gap == doctest::Approx(sequence_scan(norm.h, {100}, {9910}).gap));
}

TEST_CASE("csv output") {
  DistalSequence h(-1, {0.5, 0, -0.25});
  std::ostringstream os;
  write_sequence_csv(os, h);
  CHECK(os.str() == "n,h\n-1,0.5\n0,0\n1,-0.25\n");
  std::ostringstream fs;
  write_function_csv(fs, interpolate(h), 2);
  CHECK(fs.str().rfind("t,f\n-1,0.5\n-0.5,0.25\n", 0) == 0);
}

}
