#include <doctest.h>

#include <cmath>
#include <random>

#include "distal/error.hpp"
#include "distal/torus.hpp"

using namespace distal;

TEST_SUITE("torus") {

TEST_CASE("addition wraps exactly") {
  Frac128 half = Frac128::from_dyadic(1, 1);
  CHECK(half + half == Frac128());
  Frac128 x = Frac128::from_words(0xffffffffffffffffULL, 0xffffffffffffffffULL);
  CHECK(x + Frac128::from_raw(1) == Frac128());
  CHECK(-x == Frac128::from_raw(1));
}

TEST_CASE("integer multiples agree with repeated addition") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Frac128 a = Frac128::from_words(rng(), rng());
    Frac128 acc;
    for (int k = 1; k <= 200; ++k) {
      acc += a;
      REQUIRE(acc == a.times(static_cast<u128>(k)));
    }
    CHECK(a.times_signed(-7) == -(a.times(7)));
  }
}

TEST_CASE("cell index matches floor(v*m) on every 16-bit dyadic") {
  // Exhaustive: all 2^16 lattice points of the 16-bit sub-lattice.
  for (std::uint64_t m : {1ULL, 3ULL, 7ULL, 100ULL, 1000ULL}) {
    for (std::uint64_t v = 0; v < 65536; ++v) {
      Frac128 x = Frac128::from_dyadic(v, 16);
      REQUIRE(x.cell(m) == (v * m) / 65536);
    }
  }
}

TEST_CASE("16-bit dyadic arithmetic is the arithmetic of Z/2^16") {
  for (std::uint64_t a = 0; a < 65536; a += 7) {
    for (std::uint64_t b : {1ULL, 255ULL, 40000ULL, 65535ULL}) {
      REQUIRE(Frac128::from_dyadic(a, 16) + Frac128::from_dyadic(b, 16) == Frac128::from_dyadic((a + b) % 65536, 16));
    }
  }
}

TEST_CASE("hex round trip and doubles") {
  Frac128 x = Frac128::from_words(0x6a09e667f3bcc908ULL, 0xb2fb1366ea957d3eULL);
  CHECK(Frac128::from_hex(x.to_hex()) == x);
  CHECK(x.to_double() == doctest::Approx(std::sqrt(2.0) - 1).epsilon(1e-15));
  CHECK(Frac128::from_double(1.25) == Frac128::from_dyadic(1, 2));
  CHECK(Frac128::from_double(-0.25) == Frac128::from_dyadic(3, 2));
}

TEST_CASE("circle and torus distances") {
  CHECK(circle_distance(Frac128::from_double(0.05), Frac128::from_double(0.95)) == doctest::Approx(0.1));
  CHECK(Frac128::from_double(0.7).norm() == doctest::Approx(0.3));
  TorusPoint a{Frac128::from_double(0.1), Frac128::from_double(0.5)};
  TorusPoint b{Frac128::from_double(0.2), Frac128::from_double(0.9)};
  CHECK(torus_distance(a, b) == doctest::Approx(0.4));
  CHECK(torus_distance(a, a) == 0.0);
}

}
