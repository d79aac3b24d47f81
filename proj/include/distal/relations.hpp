#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "distal/flows.hpp"

namespace distal {

// {0, ..., n-1} with a finite group action given by generator permutations.
struct FiniteCarrier {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> generators;

  // Errors: relations.not_bijection.
  void validate() const;
};

class FiniteRelation {
 public:
  explicit FiniteRelation(std::shared_ptr<const FiniteCarrier> carrier);
  FiniteRelation(std::shared_ptr<const FiniteCarrier> carrier, const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

  static FiniteRelation diagonal(std::shared_ptr<const FiniteCarrier> carrier);

  const FiniteCarrier& carrier() const { return *carrier_; }
  std::shared_ptr<const FiniteCarrier> carrier_ptr() const { return carrier_; }
  std::size_t n() const { return carrier_->n; }
  bool contains(std::size_t i, std::size_t j) const { return bits_[i * n() + j] != 0; }
  void insert(std::size_t i, std::size_t j);
  std::size_t size() const;
  // Sorted (i, j) pairs.
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;
  bool subset_of(const FiniteRelation& other) const;
  bool is_equivalence() const;
  bool is_invariant() const;
  // Equivalence classes, each sorted, ordered by smallest element (equivalences only).
  std::vector<std::vector<std::size_t>> classes() const;

  friend bool operator==(const FiniteRelation& a, const FiniteRelation& b) { return a.bits_ == b.bits_; }

 private:
  std::shared_ptr<const FiniteCarrier> carrier_;
  std::vector<std::uint8_t> bits_;
};

// Composition R o S = {(i, k) : (i, j) in R, (j, k) in S for some j}.
FiniteRelation compose(const FiniteRelation& r, const FiniteRelation& s);

struct ClosureTrace {
  std::size_t rounds = 0;  // R <- R o R steps until the fixed point
};

// Smallest invariant equivalence relation containing R: force reflexivity,
// symmetry and invariance, then square until nothing changes.
FiniteRelation factor_closure(const FiniteRelation& r, ClosureTrace* trace = nullptr);

// The same relation computed differently: union-find over R, then merging
// g(a) with g(b) for every generator g whenever a ~ b, until stable.
FiniteRelation invariant_equivalence_union_find(const FiniteRelation& r);

// Transitive closure only.
FiniteRelation transitive_closure(const FiniteRelation& r);

struct ProductCheckStep {
  std::size_t factors = 0;  // |J| for J = {0, ..., factors - 1}
  std::size_t pairs = 0;    // size of the tensor relation over J
  bool contained = false;
};

struct ProductCheckReport {
  bool passes = false;
  std::size_t product_size = 0;
  std::size_t closure_size = 0;
  std::vector<ProductCheckStep> trace;
};

// Index of (x_0, ..., x_{k-1}) in the product carrier, first factor slowest.
std::size_t product_index(const std::vector<std::size_t>& sizes, const std::vector<std::size_t>& coords);

// Tensor relation over the index set J (mask bit i set for i in J): pairs that
// relate coordinatewise by Q_i on J and agree off J.
FiniteRelation tensor_relation(const std::vector<FiniteRelation>& qs, std::uint32_t mask,
                               std::shared_ptr<const FiniteCarrier> product);

// Any transitive relation on the product containing every single-factor
// tensor Q({i}) contains Q(I); it suffices to test the smallest one, the
// transitive closure of their union. Errors: relations.size (more than three
// carriers or one larger than six).
ProductCheckReport product_closure_check(const std::vector<FiniteRelation>& qs);

// Edge-list text: "n k", k permutation lines, "pairs:", then "i j" lines.
// Errors: relations.parse.
FiniteRelation parse_relation(std::istream& in);
std::string format_relation(const FiniteRelation& r);

struct RpProbeResult {
  enum class Status { Positive, RefutedByIsometry, Inconclusive };
  Status status = Status::Inconclusive;
  std::uint64_t witness_time = 0;
  std::size_t offset_index = 0;    // lattice index of the perturbation of x'
  std::vector<double> offset;      // the perturbation itself
  double witness_distance = 0;
  double isometric_distance = 0;   // distance along the isometric coordinates
  std::size_t offsets_tried = 0;
};

std::string to_string(RpProbeResult::Status s);

// Regional proximality probe: perturbs x' over a deterministic lattice of
// 9^d offsets with coordinates in {0, +-delta/4, ..., +-delta} and searches
// for 1 <= t <= t_max with d(T^t x, T^t x'') < eps. When the flow is isometric
// in coordinates where x and x' are more than eps + 2 delta apart, no
// perturbation can help and the pair is refuted outright.
RpProbeResult rp_probe(const FlowSpec& flow, const TorusPoint& x, const TorusPoint& xp, double eps, double delta,
                       std::uint64_t t_max);

}  // namespace distal
