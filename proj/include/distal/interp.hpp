#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "distal/ergodic.hpp"
#include "distal/flows.hpp"

namespace distal {

struct SequenceProvenance {
  std::string flow;
  std::string x0;
  std::string f_id;
  std::string part;  // "re", "im", or a normalization tag appended later
  double gap_re = 0;
  double gap_im = 0;
  double control_gap_re = 0;
  double control_gap_im = 0;
};

// h(n) for n in [n_min, n_max].
class DistalSequence {
 public:
  DistalSequence(std::int64_t n_min, std::vector<double> values, SequenceProvenance provenance = {});

  std::int64_t n_min() const { return n_min_; }
  std::int64_t n_max() const { return n_min_ + static_cast<std::int64_t>(values_.size()) - 1; }
  const std::vector<double>& values() const { return values_; }
  const SequenceProvenance& provenance() const { return provenance_; }
  SequenceProvenance& provenance() { return provenance_; }
  double sup() const { return sup_; }
  bool contains(std::int64_t n) const { return n >= n_min_ && n <= n_max(); }
  // Errors: interp.range.
  double operator()(std::int64_t n) const;

 private:
  std::int64_t n_min_;
  std::vector<double> values_;
  SequenceProvenance provenance_;
  double sup_ = 0;
};

// f(t + n) = (1 - t) h(n) + t h(n + 1), t in [0, 1].
class InterpolatedFunction {
 public:
  explicit InterpolatedFunction(DistalSequence h);

  const DistalSequence& base() const { return h_; }
  double sup() const { return h_.sup(); }
  // The constant the family g(., n) is claimed to share; the sharp one is
  // reported by equicontinuity_check.
  double nominal_lipschitz() const { return h_.sup(); }
  // Errors: interp.range outside [n_min, n_max].
  double operator()(double t) const;
  // int_0^a f exactly (trapezoid on whole cells, closed form on the last piece).
  double integral(double a) const;

 private:
  DistalSequence h_;
  std::vector<double> prefix_;  // prefix_[k] = int_0^k f, k = 0..n_max
};

struct GenerateOptions {
  std::vector<std::uint64_t> scales_a;
  std::vector<std::uint64_t> scales_b;
  std::int64_t n_max = 0;  // 0: max scale + 2
};

// Samples Re and Im of f along the orbit on [-n_max, n_max], keeps whichever
// part diverges (terminal two-scale gap above 3x the control's) with the larger
// gap. Errors: interp.no_divergent_part.
DistalSequence generate_h(const FlowSpec& flow, const TorusPoint& x0, const TestFunction& f,
                          const GenerateOptions& options);

// Terminal two-scale report of the discrete averages (1/N) sum_{0<=n<N} h(n).
GapReport sequence_scan(const DistalSequence& h, const std::vector<std::uint64_t>& scales_a,
                        const std::vector<std::uint64_t>& scales_b);

struct NormalizeResult {
  DistalSequence h;
  std::string choice;  // "p1" or "R1p0"
  double gap_original = 0;
  double gap_p1 = 0;
  double gap_r1p0 = 0;
  double ratio = 0;     // chosen gap / original gap
  bool warning = false; // neither candidate kept half the original gap
};

// Replaces h by p_1 h or R_1 p_0 h (p_i the indicator of 2Z + i, R_1 the shift
// by one), both vanishing on the even integers.
NormalizeResult even_zero_normalize(const DistalSequence& h, const std::vector<std::uint64_t>& scales_a,
                                    const std::vector<std::uint64_t>& scales_b);

InterpolatedFunction interpolate(const DistalSequence& h);

struct EquicontinuityReport {
  double lipschitz = 0;  // sup_n |h(n+1) - h(n)|
  double sup_h = 0;
  bool within_bound = false;  // lipschitz <= 2 sup|h|
  bool within_nominal_constant = false;  // lipschitz <= sup|h|
};

EquicontinuityReport equicontinuity_check(const DistalSequence& h);

// Continuous means alpha_n = (1/A_n) int_0^{A_n} f and beta_n likewise.
// Errors: interp.odd_scale, interp.range, ergodic.scales.
GapReport divergent_means(const InterpolatedFunction& f, const std::vector<std::uint64_t>& scales_a,
                          const std::vector<std::uint64_t>& scales_b);

void write_sequence_csv(std::ostream& os, const DistalSequence& h);
void write_function_csv(std::ostream& os, const InterpolatedFunction& f, int samples_per_unit);

}  // namespace distal
