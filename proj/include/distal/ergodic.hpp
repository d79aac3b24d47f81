#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "distal/flows.hpp"

namespace distal {

class InterpolatedFunction;

// Characters e^{2 pi i <m, x>} and their real/imaginary parts, optionally
// rescaled as scale * f + offset. m = 0 gives the constants.
struct TestFunction {
  enum class Part { Complex, Real, Imag };
  std::vector<int> m;
  Part part = Part::Complex;
  double scale = 1.0;
  double offset = 0.0;

  static TestFunction character(std::vector<int> m, Part part = Part::Complex);
  static TestFunction constant(double c, std::size_t dim);
  // "e(1,-2)", "re e(0,1)", "im e(0,1)", "const(0.5)".
  static TestFunction parse(const std::string& id, std::size_t dim);

  std::string id() const;
  bool is_constant() const;
  double sup() const;
  std::complex<double> operator()(const TorusPoint& x) const;
};

// All characters with |m_i| <= max_abs, m != 0, in lexicographic order of m.
std::vector<TestFunction> character_dictionary(std::size_t dim, int max_abs);
// "chars50" and friends.
std::vector<TestFunction> named_dictionary(const std::string& name, std::size_t dim);

struct MeanEstimate {
  enum class Kind { Discrete, Continuous };
  std::complex<double> value;
  double scale = 0;
  Kind kind = Kind::Discrete;
};

struct GapReport {
  std::string f_id;
  double sup_f = 0;
  std::vector<std::pair<MeanEstimate, MeanEstimate>> pairs;
  double gap = 0;  // lower bound for R(f)
};

// Neumaier-compensated complex accumulator.
class CompensatedSum {
 public:
  void add(std::complex<double> v);
  std::complex<double> value() const;

 private:
  double re_ = 0, im_ = 0, cre_ = 0, cim_ = 0;
};

// Throws ergodic.bound_violation when |value| > sup|f| or gap > 2 sup|f|.
void check_estimate(const MeanEstimate& e, double sup_f);
void check_report(const GapReport& r);
// Number of gap reports that have passed check_report in this process.
std::uint64_t checked_report_count();

MeanEstimate birkhoff(const FlowSpec& flow, const TorusPoint& x0, const TestFunction& f, std::uint64_t n);

// Prefix averages (1/N) sum_{n<N} f_k(T^n x0) for every function and every
// checkpoint N, from a single orbit pass. Checkpoints strictly increasing.
std::vector<std::vector<MeanEstimate>> orbit_means(const FlowSpec& flow, const TorusPoint& x0,
                                                   const std::vector<TestFunction>& fs,
                                                   const std::vector<std::uint64_t>& checkpoints);

// Errors: ergodic.scales when a sequence is empty, not strictly increasing,
// or the two differ in length.
GapReport two_scale_scan(const FlowSpec& flow, const TorusPoint& x0, const TestFunction& f,
                         const std::vector<std::uint64_t>& scales_a, const std::vector<std::uint64_t>& scales_b);
std::vector<GapReport> two_scale_scan(const FlowSpec& flow, const TorusPoint& x0, const std::vector<TestFunction>& fs,
                                      const std::vector<std::uint64_t>& scales_a,
                                      const std::vector<std::uint64_t>& scales_b);

// Pairs (q_j, q_{j+1}), made even, at the convergents q_j of Liouville
// quality: the base rotation has almost returned at q_j while the cocycle's
// partial sums have not yet averaged out, and by q_{j+1} they have.
std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> resonance_scales(const RotationAngle& alpha,
                                                                                   std::uint64_t horizon);
// Even-made q_{2n} and q_{2n+1} blocks up to the horizon.
std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> parity_scales(const RotationAngle& alpha,
                                                                                std::uint64_t horizon);

struct DivergenceReport {
  std::string witness;        // empty when no function qualifies
  double gap = 0;             // terminal gap of the witness on the flow
  double control_gap = 0;     // same function, same scales, on the control
  bool divergent = false;
  std::size_t scanned = 0;
  GapReport witness_report;
  GapReport control_report;
};

// Scans the dictionary on the flow and on a uniquely ergodic control run at
// equal scales. A function diverges when its terminal gap exceeds 3x its
// control gap; the witness is the qualifying function with the largest gap.
DivergenceReport divergence_test(const FlowSpec& flow, const TorusPoint& x0, const std::vector<TestFunction>& dict,
                                 const std::vector<std::uint64_t>& scales_a,
                                 const std::vector<std::uint64_t>& scales_b, const FlowSpec& control,
                                 const TorusPoint& control_x0);

// Base rotation paired with the golden rotation: uniquely ergodic, and it shares
// every character of the base with the flow.
FlowSpec divergence_control(const FlowSpec& flow);

class EmpiricalMeasure {
 public:
  EmpiricalMeasure(std::size_t dim, std::uint64_t grid);

  std::size_t dim() const { return dim_; }
  std::uint64_t grid() const { return grid_; }
  std::uint64_t samples() const { return samples_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  double probability(std::uint64_t cell) const;

  void add(const TorusPoint& x);
  void merge(const EmpiricalMeasure& other);
  // Pushforward onto the coordinates [offset, offset + dim).
  EmpiricalMeasure marginalize(std::size_t offset, std::size_t dim) const;

  friend bool operator==(const EmpiricalMeasure&, const EmpiricalMeasure&) = default;

 private:
  std::size_t dim_;
  std::uint64_t grid_;
  std::uint64_t samples_ = 0;
  std::vector<std::uint64_t> counts_;
};

EmpiricalMeasure empirical_measure(const FlowSpec& flow, const TorusPoint& x0, std::uint64_t n, std::uint64_t grid);

// max over cells |p(cell) - q(cell)|. Errors: ergodic.shape.
double sup_cell_gap(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

// max over cells of |p(cell) - prod_i p_i(cell_i)| for the given factor blocks.
double product_gap(const EmpiricalMeasure& mu, const std::vector<std::pair<std::size_t, std::size_t>>& blocks);

struct JoiningReport {
  std::vector<double> marginal_deviation;  // per factor
  double product_gap = 0;                  // distance from the product of the marginals
};

// Errors: ergodic.not_product when the flow has fewer than two factors.
JoiningReport joining_marginal_check(const FlowSpec& product_flow, const TorusPoint& x0, std::uint64_t n,
                                     std::uint64_t grid);

// (1/A) int_0^A f(t) dt for the interpolated function, exactly.
MeanEstimate continuous_time_mean(const InterpolatedFunction& f, double a);

// Max pairwise difference of the estimates. Errors: ergodic.range with fewer than two.
GapReport mean_gap(const std::string& f_id, double sup_f, const std::vector<MeanEstimate>& estimates);

// Window means (1/L) sum_{s <= n < s+L} f(T^n x0) at starts s = 0, L, 2L, ...
std::vector<double> window_means(const FlowSpec& flow, const TorusPoint& x0, const TestFunction& f,
                                 std::uint64_t window, std::size_t count);

struct SeparationPair {
  std::size_t i = 0, j = 0;
  double width = 0;             // min of the two one-sided separations
  std::size_t high_start = 0;   // window where f_i - f_j peaks
  std::size_t low_start = 0;    // window where it bottoms out
  GapReport report;             // gap of f_i - f_j over all windows
};

struct SeparationReport {
  std::vector<std::string> f_ids;
  std::vector<std::pair<double, double>> extremes;  // raw window-mean range per factor
  std::vector<SeparationPair> pairs;
  double min_width = 0;
};

// For a product flow and one real test function per factor, each normalized so
// its window means span exactly [0,1], measures how far the window means of
// f_i - f_j can be pushed in both directions. The window means are a finite
// family of means, so gap(f_i - f_j) >= 2 * width.
SeparationReport separation_family(const FlowSpec& product_flow, const TorusPoint& x0,
                                   const std::vector<TestFunction>& factor_fs, std::uint64_t window,
                                   std::size_t count);

}  // namespace distal
