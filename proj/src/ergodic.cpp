#include "distal/ergodic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "distal/error.hpp"
#include "distal/interp.hpp"

namespace distal {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBoundSlack = 1e-9;
std::atomic<std::uint64_t> g_checked_reports{0};

std::complex<double> unit_phase(Frac128 phase) { return std::polar(1.0, kTwoPi * phase.to_double()); }

std::complex<double> apply_part(const TestFunction& f, std::complex<double> c) {
  switch (f.part) {
    case TestFunction::Part::Real:
      c = {c.real(), 0.0};
      break;
    case TestFunction::Part::Imag:
      c = {c.imag(), 0.0};
      break;
    case TestFunction::Part::Complex:
      break;
  }
  return f.scale * c + f.offset;
}

// Evaluates a batch of characters at one point. Large batches go through
// per-coordinate power tables; every table entry comes from an exact phase.
class BatchEvaluator {
 public:
  BatchEvaluator(const std::vector<TestFunction>& fs, std::size_t dim) : fs_(fs), dim_(dim) {
    max_abs_.assign(dim, 0);
    for (const auto& f : fs) {
      if (f.m.size() != dim) throw Error("ergodic.dimension_mismatch", "test function " + f.id() + " has wrong dimension");
      for (std::size_t i = 0; i < dim; ++i) max_abs_[i] = std::max(max_abs_[i], std::abs(f.m[i]));
    }
    use_tables_ = fs.size() > 2 * dim + 4;
    if (use_tables_) {
      tables_.resize(dim);
      for (std::size_t i = 0; i < dim; ++i) tables_[i].resize(2 * static_cast<std::size_t>(max_abs_[i]) + 1);
    }
  }

  void evaluate(const TorusPoint& x, std::vector<std::complex<double>>& out) {
    out.resize(fs_.size());
    if (!use_tables_) {
      for (std::size_t k = 0; k < fs_.size(); ++k) out[k] = fs_[k](x);
      return;
    }
    for (std::size_t i = 0; i < dim_; ++i) {
      int mx = max_abs_[i];
      auto& t = tables_[i];
      t[static_cast<std::size_t>(mx)] = {1.0, 0.0};
      for (int k = 1; k <= mx; ++k) {
        std::complex<double> z = unit_phase(x[i].times(static_cast<u128>(k)));
        t[static_cast<std::size_t>(mx + k)] = z;
        t[static_cast<std::size_t>(mx - k)] = std::conj(z);
      }
    }
    for (std::size_t k = 0; k < fs_.size(); ++k) {
      const auto& f = fs_[k];
      std::complex<double> c{1.0, 0.0};
      for (std::size_t i = 0; i < dim_; ++i)
        if (f.m[i] != 0) c *= tables_[i][static_cast<std::size_t>(max_abs_[i] + f.m[i])];
      out[k] = apply_part(f, c);
    }
  }

 private:
  const std::vector<TestFunction>& fs_;
  std::size_t dim_;
  std::vector<int> max_abs_;
  bool use_tables_ = false;
  std::vector<std::vector<std::complex<double>>> tables_;
};

void check_scales(const std::vector<std::uint64_t>& s, const char* name) {
  if (s.empty()) throw Error("ergodic.scales", std::string(name) + " is empty");
  if (s.front() == 0) throw Error("ergodic.scales", std::string(name) + " contains 0");
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] <= s[i - 1]) throw Error("ergodic.scales", std::string(name) + " is not strictly increasing");
}

std::uint64_t make_even(std::uint64_t v) { return v % 2 ? v + 1 : v; }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

TestFunction TestFunction::character(std::vector<int> m, Part part) {
  TestFunction f;
  f.m = std::move(m);
  f.part = part;
  return f;
}

TestFunction TestFunction::constant(double c, std::size_t dim) {
  TestFunction f;
  f.m.assign(dim, 0);
  f.scale = c;
  return f;
}

bool TestFunction::is_constant() const {
  return std::all_of(m.begin(), m.end(), [](int v) { return v == 0; });
}

std::string TestFunction::id() const {
  if (is_constant() && offset == 0.0 && part == Part::Complex) return "const(" + format_double(scale) + ")";
  std::ostringstream os;
  if (part == Part::Real) os << "re ";
  if (part == Part::Imag) os << "im ";
  os << "e(";
  for (std::size_t i = 0; i < m.size(); ++i) os << (i ? "," : "") << m[i];
  os << ")";
  if (scale != 1.0 || offset != 0.0) os << "*" << format_double(scale) << "+" << format_double(offset);
  return os.str();
}

TestFunction TestFunction::parse(const std::string& id, std::size_t dim) {
  auto bad = [&] { return Error("ergodic.parse", "cannot parse test function '" + id + "'"); };
  if (id.rfind("const(", 0) == 0 && id.back() == ')') {
    try {
      return constant(std::stod(id.substr(6, id.size() - 7)), dim);
    } catch (const std::logic_error&) {
      throw bad();
    }
  }
  std::string rest = id;
  Part part = Part::Complex;
  if (rest.rfind("re ", 0) == 0) {
    part = Part::Real;
    rest = rest.substr(3);
  } else if (rest.rfind("im ", 0) == 0) {
    part = Part::Imag;
    rest = rest.substr(3);
  }
  // Rescaled form: "...)*scale+offset".
  double scale = 1.0, offset = 0.0;
  if (auto star = rest.find(")*"); star != std::string::npos) {
    std::string suffix = rest.substr(star + 2);
    rest = rest.substr(0, star + 1);
    std::size_t plus = std::string::npos;
    for (std::size_t i = 1; i < suffix.size(); ++i) {
      if (suffix[i] == '+' && suffix[i - 1] != 'e' && suffix[i - 1] != 'E') plus = i;
    }
    if (plus == std::string::npos) throw bad();
    try {
      std::size_t u1 = 0, u2 = 0;
      std::string s1 = suffix.substr(0, plus), s2 = suffix.substr(plus + 1);
      scale = std::stod(s1, &u1);
      offset = std::stod(s2, &u2);
      if (u1 != s1.size() || u2 != s2.size()) throw bad();
    } catch (const std::logic_error&) {
      throw bad();
    }
  }
  if (rest.size() < 3 || rest.rfind("e(", 0) != 0 || rest.back() != ')') throw bad();
  std::vector<int> m;
  std::stringstream ss(rest.substr(2, rest.size() - 3));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      m.push_back(std::stoi(item, &used));
      if (used != item.size()) throw bad();
    } catch (const std::logic_error&) {
      throw bad();
    }
  }
  if (m.size() != dim) throw Error("ergodic.dimension_mismatch", "test function '" + id + "' has wrong dimension");
  TestFunction f = character(std::move(m), part);
  f.scale = scale;
  f.offset = offset;
  return f;
}

double TestFunction::sup() const {
  if (is_constant()) {
    std::complex<double> v = apply_part(*this, {1.0, 0.0});
    return std::abs(v);
  }
  return std::abs(scale) + std::abs(offset);
}

std::complex<double> TestFunction::operator()(const TorusPoint& x) const {
  if (x.dim() != m.size()) throw Error("ergodic.dimension_mismatch", "test function dimension mismatch");
  Frac128 phase;
  for (std::size_t i = 0; i < m.size(); ++i) phase = phase + x[i].times_signed(m[i]);
  return apply_part(*this, unit_phase(phase));
}

std::vector<TestFunction> character_dictionary(std::size_t dim, int max_abs) {
  std::vector<TestFunction> out;
  std::vector<int> m(dim, -max_abs);
  while (true) {
    if (!std::all_of(m.begin(), m.end(), [](int v) { return v == 0; })) out.push_back(TestFunction::character(m));
    std::size_t i = dim;
    while (i > 0 && m[i - 1] == max_abs) m[--i] = -max_abs;
    if (i == 0) break;
    ++m[i - 1];
  }
  return out;
}

std::vector<TestFunction> named_dictionary(const std::string& name, std::size_t dim) {
  if (name.rfind("chars", 0) == 0) {
    try {
      int k = std::stoi(name.substr(5));
      if (k >= 1 && k <= 50) return character_dictionary(dim, k);
    } catch (const std::logic_error&) {
    }
  }
  throw Error("ergodic.parse", "unknown dictionary '" + name + "'");
}

void CompensatedSum::add(std::complex<double> v) {
  auto step = [](double& s, double& c, double x) {
    double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  };
  step(re_, cre_, v.real());
  step(im_, cim_, v.imag());
}

std::complex<double> CompensatedSum::value() const { return {re_ + cre_, im_ + cim_}; }

void check_estimate(const MeanEstimate& e, double sup_f) {
  if (std::abs(e.value) > sup_f * (1 + kBoundSlack) + kBoundSlack) {
    throw Error("ergodic.bound_violation", "mean exceeds sup|f|");
  }
}

void check_report(const GapReport& r) {
  for (const auto& [a, b] : r.pairs) {
    check_estimate(a, r.sup_f);
    check_estimate(b, r.sup_f);
  }
  if (r.gap > 2 * r.sup_f * (1 + kBoundSlack) + kBoundSlack) {
    throw Error("ergodic.bound_violation", "gap of " + r.f_id + " exceeds 2 sup|f|");
  }
  ++g_checked_reports;
}

std::uint64_t checked_report_count() { return g_checked_reports.load(); }

std::vector<std::vector<MeanEstimate>> orbit_means(const FlowSpec& flow, const TorusPoint& x0,
                                                   const std::vector<TestFunction>& fs,
                                                   const std::vector<std::uint64_t>& checkpoints) {
  check_scales(checkpoints, "checkpoints");
  std::vector<std::vector<MeanEstimate>> out(fs.size(), std::vector<MeanEstimate>(checkpoints.size()));
  std::vector<std::size_t> varying;
  for (std::size_t k = 0; k < fs.size(); ++k) {
    if (fs[k].is_constant()) {
      std::complex<double> v = apply_part(fs[k], {1.0, 0.0});
      for (std::size_t c = 0; c < checkpoints.size(); ++c) out[k][c] = {v, static_cast<double>(checkpoints[c])};
    } else {
      varying.push_back(k);
    }
  }
  if (varying.empty()) return out;
  std::vector<TestFunction> active;
  for (auto k : varying) active.push_back(fs[k]);

  BatchEvaluator eval(active, flow.dim());
  std::vector<CompensatedSum> sums(active.size());
  std::vector<std::complex<double>> values;
  OrbitStream orbit(flow, x0);
  std::size_t next = 0;
  for (std::uint64_t n = 0; next < checkpoints.size(); ++n) {
    eval.evaluate(orbit.current(), values);
    for (std::size_t k = 0; k < active.size(); ++k) sums[k].add(values[k]);
    orbit.advance();
    if (n + 1 == checkpoints[next]) {
      double scale = static_cast<double>(checkpoints[next]);
      for (std::size_t k = 0; k < active.size(); ++k) {
        MeanEstimate e{sums[k].value() / scale, scale, MeanEstimate::Kind::Discrete};
        check_estimate(e, active[k].sup());
        out[varying[k]][next] = e;
      }
      ++next;
    }
  }
  return out;
}

MeanEstimate birkhoff(const FlowSpec& flow, const TorusPoint& x0, const TestFunction& f, std::uint64_t n) {
  if (n == 0) throw Error("ergodic.scales", "Birkhoff average over zero steps");
  return orbit_means(flow, x0, {f}, {n})[0][0];
}

std::vector<GapReport> two_scale_scan(const FlowSpec& flow, const TorusPoint& x0, const std::vector<TestFunction>& fs,
                                      const std::vector<std::uint64_t>& scales_a,
                                      const std::vector<std::uint64_t>& scales_b) {
  check_scales(scales_a, "scales A");
  check_scales(scales_b, "scales B");
  if (scales_a.size() != scales_b.size()) throw Error("ergodic.scales", "scale sequences differ in length");
  std::vector<std::uint64_t> all(scales_a);
  all.insert(all.end(), scales_b.begin(), scales_b.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  auto means = orbit_means(flow, x0, fs, all);
  auto at = [&](std::size_t k, std::uint64_t s) {
    return means[k][static_cast<std::size_t>(std::lower_bound(all.begin(), all.end(), s) - all.begin())];
  };
  std::vector<GapReport> out;
  for (std::size_t k = 0; k < fs.size(); ++k) {
    GapReport r;
    r.f_id = fs[k].id();
    r.sup_f = fs[k].sup();
    for (std::size_t n = 0; n < scales_a.size(); ++n) r.pairs.emplace_back(at(k, scales_a[n]), at(k, scales_b[n]));
    r.gap = std::abs(r.pairs.back().first.value - r.pairs.back().second.value);
    check_report(r);
    out.push_back(std::move(r));
  }
  return out;
}

GapReport two_scale_scan(const FlowSpec& flow, const TorusPoint& x0, const TestFunction& f,
                         const std::vector<std::uint64_t>& scales_a, const std::vector<std::uint64_t>& scales_b) {
  return two_scale_scan(flow, x0, std::vector<TestFunction>{f}, scales_a, scales_b)[0];
}

std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> resonance_scales(const RotationAngle& alpha,
                                                                                   std::uint64_t horizon) {
  std::vector<std::uint64_t> a, b;
  const auto& conv = alpha.convergents();
  for (std::size_t j = 0; j + 1 < conv.size(); ++j) {
    if (!is_liouville_quality(conv[j])) continue;
    if (conv[j + 1].q > mpz_class(std::to_string(horizon))) break;
    std::uint64_t qa = make_even(conv[j].q.get_ui());
    std::uint64_t qb = make_even(conv[j + 1].q.get_ui());
    if (qb > horizon || qb <= qa) continue;
    if (!a.empty() && (qa <= a.back() || qb <= b.back())) continue;
    a.push_back(qa);
    b.push_back(qb);
  }
  return {a, b};
}

std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> parity_scales(const RotationAngle& alpha,
                                                                                std::uint64_t horizon) {
  std::vector<std::uint64_t> a, b;
  const auto& conv = alpha.convergents();
  for (std::size_t j = 0; j + 1 < conv.size(); j += 2) {
    if (conv[j + 1].q > mpz_class(std::to_string(horizon))) break;
    std::uint64_t qa = make_even(conv[j].q.get_ui());
    std::uint64_t qb = make_even(conv[j + 1].q.get_ui());
    if (qb > horizon) break;
    if (!a.empty() && (qa <= a.back() || qb <= b.back())) continue;
    a.push_back(qa);
    b.push_back(qb);
  }
  return {a, b};
}

FlowSpec divergence_control(const FlowSpec& flow) {
  const auto& kind = flow.kind();
  if (const auto* s = std::get_if<SkewFlow>(&kind)) {
    return FlowSpec::product({FlowSpec::rotation(s->cocycle.alpha()), FlowSpec::rotation(angle_from_expression("golden"))});
  }
  if (const auto* p = std::get_if<ProductFlow>(&kind)) {
    std::vector<FlowSpec> parts;
    for (const auto& f : p->factors) parts.push_back(divergence_control(f));
    return FlowSpec::product(std::move(parts));
  }
  return flow;
}

DivergenceReport divergence_test(const FlowSpec& flow, const TorusPoint& x0, const std::vector<TestFunction>& dict,
                                 const std::vector<std::uint64_t>& scales_a,
                                 const std::vector<std::uint64_t>& scales_b, const FlowSpec& control,
                                 const TorusPoint& control_x0) {
  if (control.dim() != flow.dim()) throw Error("flows.dimension_mismatch", "control flow has a different dimension");
  auto main = two_scale_scan(flow, x0, dict, scales_a, scales_b);
  auto ctrl = two_scale_scan(control, control_x0, dict, scales_a, scales_b);
  DivergenceReport out;
  out.scanned = dict.size();
  for (std::size_t k = 0; k < dict.size(); ++k) {
    bool qualifies = main[k].gap > 3.0 * ctrl[k].gap;
    if (qualifies && (!out.divergent || main[k].gap > out.gap)) {
      out.divergent = true;
      out.witness = main[k].f_id;
      out.gap = main[k].gap;
      out.control_gap = ctrl[k].gap;
      out.witness_report = main[k];
      out.control_report = ctrl[k];
    }
  }
  return out;
}

EmpiricalMeasure::EmpiricalMeasure(std::size_t dim, std::uint64_t grid) : dim_(dim), grid_(grid) {
  if (dim == 0 || grid == 0) throw Error("ergodic.shape", "empty histogram shape");
  std::uint64_t cells = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    if (cells > (std::uint64_t{1} << 28) / grid) throw Error("ergodic.shape", "histogram too large");
    cells *= grid;
  }
  counts_.assign(cells, 0);
}

double EmpiricalMeasure::probability(std::uint64_t cell) const {
  return samples_ == 0 ? 0.0 : static_cast<double>(counts_.at(cell)) / static_cast<double>(samples_);
}

void EmpiricalMeasure::add(const TorusPoint& x) {
  if (x.dim() != dim_) throw Error("flows.dimension_mismatch", "histogram dimension mismatch");
  ++counts_[cell_index(x, grid_)];
  ++samples_;
}

void EmpiricalMeasure::merge(const EmpiricalMeasure& other) {
  if (other.dim_ != dim_ || other.grid_ != grid_) throw Error("ergodic.shape", "histogram shapes differ");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  samples_ += other.samples_;
}

EmpiricalMeasure EmpiricalMeasure::marginalize(std::size_t offset, std::size_t dim) const {
  if (dim == 0 || offset + dim > dim_) throw Error("ergodic.shape", "marginal out of range");
  EmpiricalMeasure out(dim, grid_);
  std::uint64_t inner = 1;
  for (std::size_t i = offset + dim; i < dim_; ++i) inner *= grid_;
  std::uint64_t block = out.counts_.size();
  for (std::uint64_t c = 0; c < counts_.size(); ++c) out.counts_[(c / inner) % block] += counts_[c];
  out.samples_ = samples_;
  return out;
}

EmpiricalMeasure empirical_measure(const FlowSpec& flow, const TorusPoint& x0, std::uint64_t n, std::uint64_t grid) {
  EmpiricalMeasure mu(flow.dim(), grid);
  OrbitStream orbit(flow, x0);
  for (std::uint64_t k = 0; k < n; ++k) {
    mu.add(orbit.current());
    orbit.advance();
  }
  return mu;
}

double sup_cell_gap(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  if (a.dim() != b.dim() || a.grid() != b.grid()) throw Error("ergodic.shape", "histogram shapes differ");
  double worst = 0;
  for (std::uint64_t c = 0; c < a.counts().size(); ++c)
    worst = std::max(worst, std::abs(a.probability(c) - b.probability(c)));
  return worst;
}

double product_gap(const EmpiricalMeasure& mu, const std::vector<std::pair<std::size_t, std::size_t>>& blocks) {
  std::vector<EmpiricalMeasure> marginals;
  std::vector<std::uint64_t> inner;
  std::size_t total = 0;
  for (const auto& [offset, dim] : blocks) {
    marginals.push_back(mu.marginalize(offset, dim));
    std::uint64_t s = 1;
    for (std::size_t i = offset + dim; i < mu.dim(); ++i) s *= mu.grid();
    inner.push_back(s);
    total += dim;
  }
  if (total != mu.dim()) throw Error("ergodic.shape", "factor blocks do not cover the histogram");
  double worst = 0;
  for (std::uint64_t c = 0; c < mu.counts().size(); ++c) {
    double p = 1;
    for (std::size_t b = 0; b < blocks.size(); ++b)
      p *= marginals[b].probability((c / inner[b]) % marginals[b].counts().size());
    worst = std::max(worst, std::abs(mu.probability(c) - p));
  }
  return worst;
}

JoiningReport joining_marginal_check(const FlowSpec& product_flow, const TorusPoint& x0, std::uint64_t n,
                                     std::uint64_t grid) {
  auto factors = product_flow.factors();
  if (factors.size() < 2) throw Error("ergodic.not_product", "joining check needs at least two factors");
  EmpiricalMeasure joint = empirical_measure(product_flow, x0, n, grid);
  JoiningReport out;
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  for (const auto& [f, offset] : factors) {
    EmpiricalMeasure own = empirical_measure(f, project(x0, offset, f.dim()), n, grid);
    out.marginal_deviation.push_back(sup_cell_gap(joint.marginalize(offset, f.dim()), own));
    blocks.emplace_back(offset, f.dim());
  }
  out.product_gap = product_gap(joint, blocks);
  return out;
}

MeanEstimate continuous_time_mean(const InterpolatedFunction& f, double a) {
  if (!(a > 0)) throw Error("ergodic.range", "averaging horizon must be positive");
  MeanEstimate e{f.integral(a) / a, a, MeanEstimate::Kind::Continuous};
  check_estimate(e, f.sup());
  return e;
}

GapReport mean_gap(const std::string& f_id, double sup_f, const std::vector<MeanEstimate>& estimates) {
  if (estimates.size() < 2) throw Error("ergodic.range", "a gap needs at least two estimates");
  GapReport r;
  r.f_id = f_id;
  r.sup_f = sup_f;
  std::size_t bi = 0, bj = 1;
  for (std::size_t i = 0; i < estimates.size(); ++i)
    for (std::size_t j = i + 1; j < estimates.size(); ++j) {
      double g = std::abs(estimates[i].value - estimates[j].value);
      if (g > r.gap) {
        r.gap = g;
        bi = i;
        bj = j;
      }
    }
  r.pairs.emplace_back(estimates[bi], estimates[bj]);
  check_report(r);
  return r;
}

std::vector<double> window_means(const FlowSpec& flow, const TorusPoint& x0, const TestFunction& f,
                                 std::uint64_t window, std::size_t count) {
  if (window == 0) throw Error("ergodic.range", "empty window");
  std::vector<double> out;
  OrbitStream orbit(flow, x0);
  for (std::size_t w = 0; w < count; ++w) {
    CompensatedSum s;
    for (std::uint64_t k = 0; k < window; ++k) {
      s.add(f(orbit.current()));
      orbit.advance();
    }
    out.push_back(s.value().real() / static_cast<double>(window));
  }
  return out;
}

SeparationReport separation_family(const FlowSpec& product_flow, const TorusPoint& x0,
                                   const std::vector<TestFunction>& factor_fs, std::uint64_t window,
                                   std::size_t count) {
  auto factors = product_flow.factors();
  if (factors.size() != factor_fs.size()) throw Error("ergodic.shape", "need one test function per factor");
  if (window == 0 || count < 2) throw Error("ergodic.range", "need at least two nonempty windows");
  for (const auto& f : factor_fs)
    if (f.part == TestFunction::Part::Complex) throw Error("ergodic.parse", "separation needs real test functions");

  const std::size_t k = factors.size();
  std::vector<std::vector<CompensatedSum>> sums(k, std::vector<CompensatedSum>(count));
  OrbitStream orbit(product_flow, x0);
  for (std::size_t w = 0; w < count; ++w)
    for (std::uint64_t t = 0; t < window; ++t) {
      for (std::size_t i = 0; i < k; ++i) {
        const auto& [f, offset] = factors[i];
        sums[i][w].add(factor_fs[i](project(orbit.current(), offset, f.dim())));
      }
      orbit.advance();
    }

  SeparationReport out;
  std::vector<TestFunction> normalized;
  std::vector<std::vector<double>> means(k, std::vector<double>(count));
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> raw(count);
    for (std::size_t w = 0; w < count; ++w) raw[w] = sums[i][w].value().real() / static_cast<double>(window);
    auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    if (*hi - *lo <= 0) throw Error("ergodic.range", "window means of " + factor_fs[i].id() + " do not vary");
    out.extremes.emplace_back(*lo, *hi);
    TestFunction g = factor_fs[i];
    double span = *hi - *lo;
    g.offset = (g.offset - *lo) / span;
    g.scale /= span;
    normalized.push_back(g);
    out.f_ids.push_back(g.id());
    for (std::size_t w = 0; w < count; ++w) means[i][w] = (raw[w] - *lo) / span;
  }

  out.min_width = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      SeparationPair p;
      p.i = i;
      p.j = j;
      std::vector<MeanEstimate> est;
      double best = -1e300, worst = 1e300;
      for (std::size_t w = 0; w < count; ++w) {
        double d = means[i][w] - means[j][w];
        est.push_back({{d, 0.0}, static_cast<double>(window), MeanEstimate::Kind::Discrete});
        if (d > best) {
          best = d;
          p.high_start = w * window;
        }
        if (d < worst) {
          worst = d;
          p.low_start = w * window;
        }
      }
      p.width = std::min(best, -worst);
      p.report = mean_gap(normalized[i].id() + " - " + normalized[j].id(), normalized[i].sup() + normalized[j].sup(), est);
      out.min_width = std::min(out.min_width, p.width);
      out.pairs.push_back(std::move(p));
    }
  return out;
}

}  // namespace distal
