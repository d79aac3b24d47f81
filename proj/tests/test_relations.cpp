#include <doctest.h>

#include <functional>
#include <random>
#include <sstream>

#include "distal/error.hpp"
#include "distal/relations.hpp"

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

std::shared_ptr<FiniteCarrier> random_carrier(std::mt19937_64& rng, std::size_t n, std::size_t gens) {
  auto c = std::make_shared<FiniteCarrier>();
  c->n = n;
  for (std::size_t g = 0; g < gens; ++g) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    std::shuffle(p.begin(), p.end(), rng);
    c->generators.push_back(p);
  }
  return c;
}

// Brute force: enumerate every set partition of {0..n-1} (restricted growth
// strings), keep the invariant ones that contain R, and take the one with the
// fewest related pairs. The minimal invariant equivalence is unique, so the
// smallest candidate must be it, and it must lie inside every other candidate.
std::vector<std::size_t> minimal_partition(const FiniteRelation& r) {
  const std::size_t n = r.n();
  const auto& gens = r.carrier().generators;
  std::vector<std::size_t> label(n, 0), best;
  std::size_t best_pairs = SIZE_MAX;
  std::vector<std::vector<std::size_t>> candidates;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t blocks) {
    if (i == n) {
      for (auto [a, b] : r.pairs())
        if (label[a] != label[b]) return;
      for (const auto& g : gens)
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b)
            if (label[a] == label[b] && label[g[a]] != label[g[b]]) return;
      std::size_t pairs = 0;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) pairs += label[a] == label[b];
      candidates.push_back(label);
      if (pairs < best_pairs) {
        best_pairs = pairs;
        best = label;
      }
      return;
    }
    for (std::size_t b = 0; b <= blocks; ++b) {
      label[i] = b;
      rec(i + 1, std::max(blocks, b + 1));
    }
  };
  label[0] = 0;
  rec(1, 1);
  for (const auto& c : candidates)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (best[a] == best[b]) REQUIRE(c[a] == c[b]);
  return best;
}

}  // namespace

TEST_SUITE("relations") {

TEST_CASE("closure matches brute-force partition enumeration") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 1000; ++t) {
    std::size_t n = 1 + rng() % 8;
    auto carrier = random_carrier(rng, n, rng() % 3);
    FiniteRelation r(carrier);
    std::size_t edges = rng() % (n + 1);
    for (std::size_t e = 0; e < edges; ++e) r.insert(rng() % n, rng() % n);
    FiniteRelation c = factor_closure(r);
    auto labels = minimal_partition(r);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) REQUIRE(c.contains(a, b) == (labels[a] == labels[b]));
    CHECK(c == invariant_equivalence_union_find(r));
  }
}

TEST_CASE("closure is idempotent and extensive") {
  std::mt19937_64 rng(7);
  auto carrier = random_carrier(rng, 8, 2);
  FiniteRelation r(carrier, {{0, 1}, {5, 2}});
  ClosureTrace trace;
  FiniteRelation c = factor_closure(r, &trace);
  CHECK(r.subset_of(c));
  CHECK(c.is_equivalence());
  CHECK(c.is_invariant());
  CHECK(factor_closure(c) == c);
  CHECK(trace.rounds <= 3);
}

TEST_CASE("closure is monotone") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 200; ++t) {
    auto carrier = random_carrier(rng, 6, 1);
    FiniteRelation r(carrier), s(carrier);
    for (int e = 0; e < 3; ++e) {
      std::size_t a = rng() % 6, b = rng() % 6;
      r.insert(a, b);
      s.insert(a, b);
    }
    s.insert(rng() % 6, rng() % 6);
    CHECK(factor_closure(r).subset_of(factor_closure(s)));
  }
}

TEST_CASE("empty relation closes to the diagonal") {
  auto carrier = std::make_shared<FiniteCarrier>(FiniteCarrier{5, {{1, 2, 3, 4, 0}}});
  FiniteRelation r(carrier);
  CHECK(factor_closure(r) == FiniteRelation::diagonal(carrier));
  CHECK(factor_closure(r).classes().size() == 5);
}

TEST_CASE("a single pair under a cyclic action") {
  // Rotation by two on six points: (0,1) spreads to (2,3) and (4,5).
  auto carrier = std::make_shared<FiniteCarrier>(FiniteCarrier{6, {{2, 3, 4, 5, 0, 1}}});
  FiniteRelation c = factor_closure(FiniteRelation(carrier, {{0, 1}}));
  CHECK(c.classes() == std::vector<std::vector<std::size_t>>{{0, 1}, {2, 3}, {4, 5}});
  FiniteRelation all = factor_closure(FiniteRelation(carrier, {{0, 1}, {1, 2}}));
  CHECK(all.classes().size() == 1);
}

TEST_CASE("composition and transitive closure") {
  auto carrier = std::make_shared<FiniteCarrier>(FiniteCarrier{4, {}});
  FiniteRelation r(carrier, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(compose(r, r).pairs() == std::vector<std::pair<std::size_t, std::size_t>>{{0, 2}, {1, 3}});
  CHECK(transitive_closure(r).size() == 6);
}

TEST_CASE("product closure check") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 60; ++t) {
    std::vector<FiniteRelation> qs;
    std::size_t k = 1 + rng() % 3;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t n = 1 + rng() % 3;
      FiniteRelation q(random_carrier(rng, n, 0));
      for (std::size_t e = 0; e < 2; ++e) q.insert(rng() % n, rng() % n);
      qs.push_back(q);
    }
    auto rep = product_closure_check(qs);
    CHECK(rep.passes);
    CHECK(rep.trace.size() == k);
  }
  std::vector<FiniteRelation> four(4, FiniteRelation(std::make_shared<FiniteCarrier>(FiniteCarrier{2, {}})));
  CHECK(error_code([&] { product_closure_check(four); }) == "relations.size");
}

TEST_CASE("product index and tensor relation") {
  CHECK(product_index({2, 3}, {1, 2}) == 5);
  auto c2 = std::make_shared<FiniteCarrier>(FiniteCarrier{2, {}});
  FiniteRelation q(c2, {{0, 1}});
  auto prod = std::make_shared<FiniteCarrier>(FiniteCarrier{4, {}});
  FiniteRelation t = tensor_relation({q, q}, 0b01, prod);
  // Factor 0 moves 0 -> 1, factor 1 stays on the diagonal.
  CHECK(t.contains(product_index({2, 2}, {0, 0}), product_index({2, 2}, {1, 0})));
  CHECK(t.contains(product_index({2, 2}, {0, 1}), product_index({2, 2}, {1, 1})));
  CHECK_FALSE(t.contains(product_index({2, 2}, {0, 0}), product_index({2, 2}, {1, 1})));
}

TEST_CASE("edge-list format round trip and errors") {
  std::istringstream in("# comment\n4 1\n1 0 3 2\npairs:\n0 2\n3 3\n");
  FiniteRelation r = parse_relation(in);
  CHECK(r.n() == 4);
  CHECK(r.size() == 2);
  std::istringstream again(format_relation(r));
  CHECK(parse_relation(again) == r);
  std::istringstream bad_perm("3 1\n0 0 1\npairs:\n");
  CHECK(error_code([&] { parse_relation(bad_perm); }) == "relations.not_bijection");
  std::istringstream bad_pair("3 0\npairs:\n0 7\n");
  CHECK(error_code([&] { parse_relation(bad_pair); }) == "relations.parse");
  std::istringstream no_header("");
  CHECK(error_code([&] { parse_relation(no_header); }) == "relations.parse");
}

TEST_CASE("rp probe on isometries refutes distinct points") {
  FlowSpec rot = FlowSpec::rotation(angle_from_expression("golden"));
  TorusPoint x{Frac128::from_double(0.1)}, xp{Frac128::from_double(0.4)};
  auto r = rp_probe(rot, x, xp, 0.05, 0.02, 1000);
  CHECK(r.status == RpProbeResult::Status::RefutedByIsometry);
  CHECK(r.isometric_distance == doctest::Approx(0.3));
  CHECK(to_string(r.status) == "refuted-by-isometry");
}

TEST_CASE("rp probe finds proximality along the fiber") {
  FlowSpec skew = FlowSpec::skew(build_cocycle(liouville_angle(4), 3));
  TorusPoint x{Frac128::from_double(0.3), Frac128::from_double(0.1)};
  TorusPoint xp{Frac128::from_double(0.3), Frac128::from_double(0.6)};
  auto r = rp_probe(skew, x, xp, 0.05, 0.02, 10009);
  CHECK(r.status == RpProbeResult::Status::Positive);
  CHECK(r.witness_time >= 1);
  CHECK(r.witness_distance < 0.05);
  // The reported witness is reproducible from the offset.
  TorusPoint xpp = xp;
  for (std::size_t i = 0; i < xpp.dim(); ++i) xpp[i] += Frac128::from_double(r.offset[i]);
  TorusPoint a = advance(skew, x, r.witness_time), b = advance(skew, xpp, r.witness_time);
  CHECK(torus_distance(a, b) == doctest::Approx(r.witness_distance).epsilon(1e-9));
  CHECK(torus_distance(xpp, xp) <= 0.02 + 1e-12);
}

}
