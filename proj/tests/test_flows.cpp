#include <doctest.h>

#include <random>

#include "distal/error.hpp"
#include "distal/ergodic.hpp"
#include "distal/flows.hpp"

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

FlowSpec default_skew() { return FlowSpec::skew(build_cocycle(liouville_angle(4), 3)); }

TorusPoint random_point(std::mt19937_64& rng, std::size_t dim) {
  TorusPoint x(dim);
  for (std::size_t i = 0; i < dim; ++i) x[i] = Frac128::from_words(rng(), rng());
  return x;
}

}  // namespace

TEST_SUITE("flows") {

TEST_CASE("one skew step against an 80-digit evaluation") {
  // (3/8, 1/16) -> (3/8 + alpha, 1/16 + phi(3/8)), computed with mpmath.
  FlowSpec f = default_skew();
  TorusPoint x{Frac128::from_dyadic(3, 3), Frac128::from_dyadic(1, 4)};
  TorusPoint y = step(f, x);
  CHECK(y[0].to_double() == doctest::Approx(0.485001000000000000000001).epsilon(1e-15));
  CHECK(y[1].to_double() == doctest::Approx(0.44886695834042457973).epsilon(1e-12));
}

TEST_CASE("step_inverse undoes step exactly") {
  std::mt19937_64 rng(11);
  FlowSpec skew = default_skew();
  FlowSpec prod = FlowSpec::product({skew, FlowSpec::rotation(angle_from_expression("golden"))});
  for (const FlowSpec& f : {skew, prod}) {
    for (int i = 0; i < 200; ++i) {
      TorusPoint x = random_point(rng, f.dim());
      CHECK(step_inverse(f, step(f, x)) == x);
      CHECK(step(f, step_inverse(f, x)) == x);
    }
  }
}

TEST_CASE("orbit stream reproduces step bit for bit") {
  FlowSpec f = FlowSpec::product({default_skew(), FlowSpec::rotation(angle_from_expression("sqrt(3)-1"))});
  std::mt19937_64 rng(5);
  TorusPoint x = random_point(rng, f.dim());
  OrbitStream s(f, x);
  for (int n = 0; n < 20000; ++n) {
    x = step(f, x);
    s.advance();
    REQUIRE(s.current() == x);
  }
  CHECK(s.step_index() == 20000);
  CHECK(advance(f, TorusPoint(f.dim()), 1234) == [&] {
    TorusPoint z(f.dim());
    for (int i = 0; i < 1234; ++i) z = step(f, z);
    return z;
  }());
}

TEST_CASE("rotation advance jumps directly by n alpha") {
  RotationAngle a = angle_from_expression("golden");
  FlowSpec f = FlowSpec::rotation(a);
  TorusPoint x = advance(f, TorusPoint(1), 10000000000ULL);
  CHECK(x[0] == a.frac().times(10000000000ULL));
}

TEST_CASE("product coordinates and factors") {
  FlowSpec f = FlowSpec::product({FlowSpec::rotation(angle_from_expression("golden")), default_skew()});
  CHECK(f.dim() == 3);
  auto fs = f.factors();
  REQUIRE(fs.size() == 2);
  CHECK(fs[1].second == 1);
  auto iso = f.isometric_coords();
  CHECK(iso == std::vector<bool>{true, true, false});
  TorusPoint x{Frac128::from_double(0.1), Frac128::from_double(0.2), Frac128::from_double(0.3)};
  TorusPoint p = project(step(f, x), 1, 2);
  CHECK(p == step(default_skew(), project(x, 1, 2)));
  CHECK(error_code([] { FlowSpec::product({}); }) == "flows.empty_product");
  CHECK(error_code([&] { step(f, TorusPoint(2)); }) == "flows.dimension_mismatch");
}

TEST_CASE("rational rotation visits exactly its orbit cells") {
  FlowSpec f = FlowSpec::rotation(lattice_angle(Frac128::from_dyadic(1, 2)));
  CoverageReport r = density_probe(f, TorusPoint(1), 1000, 16);
  CHECK(r.visited == 4);
  CHECK(r.coverage == doctest::Approx(0.25));
  CHECK(r.largest_empty_cluster == 3);
}

TEST_CASE("dependent pair stays on a line") {
  // x -> (x + a, y + 2a) lives on y = 2x: a 32x32 grid sees at most 64 cells.
  FlowSpec f = FlowSpec::product({FlowSpec::rotation(angle_from_expression("sqrt(2)-1")),
                                  FlowSpec::rotation(angle_from_expression("frac(2*(sqrt(2)-1))"))});
  CoverageReport r = density_probe(f, TorusPoint(2), 1000000, 32);
  CHECK(r.visited <= 64);
  CHECK(r.coverage <= 0.12);
}

TEST_CASE("coverage is monotone in N") {
  FlowSpec f = FlowSpec::skew(build_cocycle(liouville_angle(4), 3));
  std::uint64_t prev = 0;
  for (std::uint64_t n : {10ULL, 100ULL, 1000ULL, 10000ULL, 100000ULL}) {
    auto r = density_probe(f, TorusPoint(2), n, 16);
    CHECK(r.visited >= prev);
    prev = r.visited;
  }
}

TEST_CASE("cell index is row major") {
  TorusPoint x{Frac128::from_double(0.5), Frac128::from_double(0.25)};
  CHECK(cell_index(x, 4) == 2 * 4 + 1);
}

TEST_CASE("time change multiplies the per-step angle") {
  FlowSpec base = FlowSpec::rotation(angle_from_expression("sqrt(2)-1"));
  FlowSpec s = FlowSpec::sampled(base, "1/2");
  FlowSpec t = time_change(s, "3");
  CHECK(t.is_sampled_rflow());
  CHECK(t.blocks()[0].increment == angle_from_expression("frac(3*(sqrt(2)-1)/2)").frac());
  // a then b composes to a*b.
  CHECK(time_change(time_change(s, "2"), "3").blocks()[0].increment == time_change(s, "6").blocks()[0].increment);
  CHECK(error_code([&] { time_change(s, "-1"); }) == "flows.nonpositive_time_change");
  CHECK(error_code([&] { time_change(base, "2"); }) == "flows.not_sampled");
  CHECK(error_code([&] { FlowSpec::sampled(default_skew(), "1"); }) == "flows.not_sampled");
  CHECK(error_code([&] { FlowSpec::sampled(base, "0"); }) == "flows.nonpositive_step");
}

TEST_CASE("time change preserves Lebesgue measure") {
  // Both sampled flows are uniquely ergodic rotations: their empirical
  // histograms converge to the same uniform measure.
  FlowSpec s = FlowSpec::sampled(FlowSpec::rotation(angle_from_expression("sqrt(2)-1")), "1");
  FlowSpec t = time_change(s, "3");
  auto mu = empirical_measure(s, TorusPoint(1), 10000000, 32);
  auto nu = empirical_measure(t, TorusPoint(1), 10000000, 32);
  CHECK(sup_cell_gap(mu, nu) < 1e-5);
  CHECK(mu.probability(0) == doctest::Approx(1.0 / 32).epsilon(1e-4));
}

}
