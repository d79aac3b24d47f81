#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "distal/angle.hpp"
#include "distal/bigreal.hpp"
#include "distal/flows.hpp"

namespace distal {

struct RelationCertificate {
  std::vector<mpz_class> coeffs;  // first nonzero entry positive
  BigReal residual;               // |sum c_i x_i|
  double residual_log10 = 0;
};

struct IndependenceVerdict {
  enum class Status { Dependent, IndependentUpTo };
  Status status = Status::IndependentUpTo;
  std::optional<RelationCertificate> certificate;
  mpz_class max_coeff;
  int digits = 0;
  // Every integer relation has Euclidean norm at least this (PSLQ bound).
  double norm_bound = 0;
  std::size_t iterations = 0;

  bool dependent() const { return status == Status::Dependent; }
};

inline constexpr long kDefaultMaxCoeff = 1000000;
inline constexpr int kDefaultRelationDigits = 120;

// PSLQ integer relation search. Errors: disjointness.size (|xs| outside
// 2..12), disjointness.precision (digits < 10 |xs| + 20, or the reduction
// ran out of precision before deciding).
IndependenceVerdict integer_relation(const std::vector<BigReal>& xs, const mpz_class& max_coeff, int digits);

// |sum c_i x_i| at the precision of the inputs.
BigReal relation_residual(const std::vector<mpz_class>& coeffs, const std::vector<BigReal>& xs);

// Z-rotations: searches relations among [1, alpha_1, ..., alpha_k].
IndependenceVerdict rotation_family_verdict(const std::vector<RotationAngle>& angles,
                                            const mpz_class& max_coeff = kDefaultMaxCoeff,
                                            int digits = kDefaultRelationDigits);

// R-flows: relations among the raw frequencies, no constant prepended.
IndependenceVerdict frequency_family_verdict(const std::vector<RotationAngle>& rates,
                                             const mpz_class& max_coeff = kDefaultMaxCoeff,
                                             int digits = kDefaultRelationDigits);

struct ExtendResult {
  std::vector<RotationAngle> family;
  std::vector<std::size_t> accepted;  // candidate indices, in order
  std::vector<std::size_t> rejected;
  bool aborted = false;               // a precision error stopped the scan
  std::string abort_reason;
};

// Greedy, in candidate order. Errors: disjointness.not_independent when
// `current` fails the verdict.
ExtendResult extend_independent_family(const std::vector<RotationAngle>& current,
                                       const std::vector<RotationAngle>& candidates,
                                       const mpz_class& max_coeff = kDefaultMaxCoeff,
                                       int digits = kDefaultRelationDigits);

struct CrossValidation {
  IndependenceVerdict verdict;
  CoverageReport coverage;
  bool agree = false;
};

// Independence predicts a minimal product rotation (full coverage); a relation
// predicts an orbit confined to a subtorus (coverage below one). Errors:
// disjointness.size for more than four angles.
CrossValidation cross_validate(const std::vector<RotationAngle>& angles, std::uint64_t steps, std::uint64_t grid,
                               const mpz_class& max_coeff = kDefaultMaxCoeff, int digits = kDefaultRelationDigits);

std::string format_coeffs(const std::vector<mpz_class>& coeffs);

}  // namespace distal
