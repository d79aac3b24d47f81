#include "distal/interp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "distal/error.hpp"

namespace distal {

namespace {

std::string point_string(const TorusPoint& x) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < x.dim(); ++i) os << (i ? "," : "") << x[i].to_hex();
  os << ")";
  return os.str();
}

void check_even_in_range(const std::vector<std::uint64_t>& scales, std::int64_t n_max) {
  for (auto s : scales) {
    if (s % 2) throw Error("interp.odd_scale", "scale " + std::to_string(s) + " is odd");
    if (static_cast<std::int64_t>(s) > n_max) {
      throw Error("interp.range", "scale " + std::to_string(s) + " exceeds the stored window");
    }
  }
}

}  // namespace

DistalSequence::DistalSequence(std::int64_t n_min, std::vector<double> values, SequenceProvenance provenance)
    : n_min_(n_min), values_(std::move(values)), provenance_(std::move(provenance)) {
  if (values_.empty()) throw Error("interp.range", "empty sequence");
  for (double v : values_) sup_ = std::max(sup_, std::abs(v));
}

double DistalSequence::operator()(std::int64_t n) const {
  if (!contains(n)) throw Error("interp.range", "index " + std::to_string(n) + " outside the stored window");
  return values_[static_cast<std::size_t>(n - n_min_)];
}

InterpolatedFunction::InterpolatedFunction(DistalSequence h) : h_(std::move(h)) {
  prefix_.push_back(0.0);
  CompensatedSum s;
  for (std::int64_t n = 0; n < h_.n_max(); ++n) {
    if (!h_.contains(n)) break;
    s.add(0.5 * (h_(n) + h_(n + 1)));
    prefix_.push_back(s.value().real());
  }
}

double InterpolatedFunction::operator()(double t) const {
  if (!(t >= static_cast<double>(h_.n_min()) && t <= static_cast<double>(h_.n_max()))) {
    throw Error("interp.range", "evaluation outside the stored window");
  }
  double fl = std::floor(t);
  auto n = static_cast<std::int64_t>(fl);
  double s = t - fl;
  if (s == 0.0) return h_(n);
  return (1 - s) * h_(n) + s * h_(n + 1);
}

double InterpolatedFunction::integral(double a) const {
  if (a < 0 || a > static_cast<double>(prefix_.size() - 1)) throw Error("interp.range", "integral outside the stored window");
  double fl = std::floor(a);
  auto n = static_cast<std::size_t>(fl);
  double r = a - fl;
  double v = prefix_[n];
  if (r > 0) {
    double h0 = h_(static_cast<std::int64_t>(n));
    double h1 = h_(static_cast<std::int64_t>(n) + 1);
    v += r * h0 + 0.5 * r * r * (h1 - h0);
  }
  return v;
}

GapReport sequence_scan(const DistalSequence& h, const std::vector<std::uint64_t>& scales_a,
                        const std::vector<std::uint64_t>& scales_b) {
  if (scales_a.empty() || scales_b.empty() || scales_a.size() != scales_b.size()) {
    throw Error("ergodic.scales", "scale sequences must be nonempty and of equal length");
  }
  for (const auto* seq : {&scales_a, &scales_b})
    for (std::size_t i = 0; i < seq->size(); ++i) {
      if ((*seq)[i] == 0 || (i > 0 && (*seq)[i] <= (*seq)[i - 1])) {
        throw Error("ergodic.scales", "scales must be positive and strictly increasing");
      }
      if (static_cast<std::int64_t>((*seq)[i]) - 1 > h.n_max() || h.n_min() > 0) {
        throw Error("interp.range", "scale exceeds the stored window");
      }
    }
  std::uint64_t top = std::max(scales_a.back(), scales_b.back());
  std::vector<double> prefix(top + 1, 0.0);
  CompensatedSum s;
  for (std::uint64_t n = 0; n < top; ++n) {
    s.add(h(static_cast<std::int64_t>(n)));
    prefix[n + 1] = s.value().real();
  }
  auto mean = [&](std::uint64_t n) {
    return MeanEstimate{{prefix[n] / static_cast<double>(n), 0.0}, static_cast<double>(n), MeanEstimate::Kind::Discrete};
  };
  GapReport r;
  r.f_id = h.provenance().f_id.empty() ? "h" : h.provenance().f_id;
  r.sup_f = h.sup();
  for (std::size_t i = 0; i < scales_a.size(); ++i) r.pairs.emplace_back(mean(scales_a[i]), mean(scales_b[i]));
  r.gap = std::abs(r.pairs.back().first.value - r.pairs.back().second.value);
  check_report(r);
  return r;
}

DistalSequence generate_h(const FlowSpec& flow, const TorusPoint& x0, const TestFunction& f,
                          const GenerateOptions& options) {
  if (options.scales_a.empty() || options.scales_b.empty()) throw Error("ergodic.scales", "scale sequences are empty");
  std::int64_t n_max = options.n_max;
  if (n_max <= 0) n_max = static_cast<std::int64_t>(std::max(options.scales_a.back(), options.scales_b.back())) + 2;

  TestFunction re = f, im = f;
  re.part = TestFunction::Part::Real;
  im.part = TestFunction::Part::Imag;
  std::size_t len = static_cast<std::size_t>(2 * n_max + 1);
  std::vector<double> hre(len), him(len);
  {
    OrbitStream orbit(flow, x0);
    for (std::int64_t n = 0; n <= n_max; ++n) {
      hre[static_cast<std::size_t>(n + n_max)] = re(orbit.current()).real();
      him[static_cast<std::size_t>(n + n_max)] = im(orbit.current()).real();
      orbit.advance();
    }
    TorusPoint x = x0;
    for (std::int64_t n = -1; n >= -n_max; --n) {
      x = step_inverse(flow, x);
      hre[static_cast<std::size_t>(n + n_max)] = re(x).real();
      him[static_cast<std::size_t>(n + n_max)] = im(x).real();
    }
  }

  SequenceProvenance prov;
  prov.flow = flow.describe();
  prov.x0 = point_string(x0);
  prov.f_id = f.id();
  DistalSequence sre(-n_max, hre, prov), sim(-n_max, him, prov);
  prov.gap_re = sequence_scan(sre, options.scales_a, options.scales_b).gap;
  prov.gap_im = sequence_scan(sim, options.scales_a, options.scales_b).gap;
  auto control = two_scale_scan(divergence_control(flow), x0, std::vector<TestFunction>{re, im}, options.scales_a,
                                options.scales_b);
  prov.control_gap_re = control[0].gap;
  prov.control_gap_im = control[1].gap;

  bool re_ok = prov.gap_re > 3.0 * prov.control_gap_re;
  bool im_ok = prov.gap_im > 3.0 * prov.control_gap_im;
  if (!re_ok && !im_ok) {
    throw Error("interp.no_divergent_part", "no divergent part found for " + f.id());
  }
  bool take_re = re_ok && (!im_ok || prov.gap_re >= prov.gap_im);
  prov.part = take_re ? "re" : "im";
  return DistalSequence(-n_max, take_re ? std::move(hre) : std::move(him), prov);
}

NormalizeResult even_zero_normalize(const DistalSequence& h, const std::vector<std::uint64_t>& scales_a,
                                    const std::vector<std::uint64_t>& scales_b) {
  auto is_even = [](std::int64_t n) { return n % 2 == 0; };
  std::vector<double> p1, r1p0;
  for (std::int64_t n = h.n_min(); n <= h.n_max(); ++n) p1.push_back(is_even(n) ? 0.0 : h(n));
  for (std::int64_t n = h.n_min(); n < h.n_max(); ++n) r1p0.push_back(is_even(n + 1) ? h(n + 1) : 0.0);

  SequenceProvenance prov_p1 = h.provenance(), prov_r = h.provenance();
  prov_p1.part += "+p1";
  prov_r.part += "+R1p0";
  NormalizeResult out{DistalSequence(h.n_min(), std::move(p1), prov_p1), "p1"};
  DistalSequence alt(h.n_min(), r1p0.empty() ? std::vector<double>{0.0} : std::move(r1p0), prov_r);

  out.gap_original = sequence_scan(h, scales_a, scales_b).gap;
  out.gap_p1 = sequence_scan(out.h, scales_a, scales_b).gap;
  out.gap_r1p0 = sequence_scan(alt, scales_a, scales_b).gap;
  auto keeps = [&](double g) { return g > 0 && g >= 0.5 * out.gap_original; };
  bool p1_ok = keeps(out.gap_p1), r_ok = keeps(out.gap_r1p0);
  if (r_ok && (!p1_ok || out.gap_r1p0 > out.gap_p1)) {
    out.h = std::move(alt);
    out.choice = "R1p0";
  } else if (!p1_ok && !r_ok && out.gap_r1p0 > out.gap_p1) {
    out.h = std::move(alt);
    out.choice = "R1p0";
  }
  out.warning = !p1_ok && !r_ok;
  double chosen = out.choice == "p1" ? out.gap_p1 : out.gap_r1p0;
  out.ratio = out.gap_original > 0 ? chosen / out.gap_original : 0.0;
  return out;
}

InterpolatedFunction interpolate(const DistalSequence& h) { return InterpolatedFunction(h); }

EquicontinuityReport equicontinuity_check(const DistalSequence& h) {
  EquicontinuityReport r;
  r.sup_h = h.sup();
  for (std::int64_t n = h.n_min(); n < h.n_max(); ++n) r.lipschitz = std::max(r.lipschitz, std::abs(h(n + 1) - h(n)));
  r.within_bound = r.lipschitz <= 2 * r.sup_h;
  r.within_nominal_constant = r.lipschitz <= r.sup_h;
  return r;
}

GapReport divergent_means(const InterpolatedFunction& f, const std::vector<std::uint64_t>& scales_a,
                          const std::vector<std::uint64_t>& scales_b) {
  if (scales_a.empty() || scales_b.empty() || scales_a.size() != scales_b.size()) {
    throw Error("ergodic.scales", "scale sequences must be nonempty and of equal length");
  }
  check_even_in_range(scales_a, f.base().n_max());
  check_even_in_range(scales_b, f.base().n_max());
  GapReport r;
  r.f_id = f.base().provenance().f_id.empty() ? "f" : f.base().provenance().f_id;
  r.sup_f = f.sup();
  for (std::size_t i = 0; i < scales_a.size(); ++i) {
    if (i > 0 && (scales_a[i] <= scales_a[i - 1] || scales_b[i] <= scales_b[i - 1])) {
      throw Error("ergodic.scales", "scales must be strictly increasing");
    }
    r.pairs.emplace_back(continuous_time_mean(f, static_cast<double>(scales_a[i])),
                         continuous_time_mean(f, static_cast<double>(scales_b[i])));
  }
  r.gap = std::abs(r.pairs.back().first.value - r.pairs.back().second.value);
  check_report(r);
  return r;
}

void write_sequence_csv(std::ostream& os, const DistalSequence& h) {
  os << "n,h\n";
  char buf[64];
  for (std::int64_t n = h.n_min(); n <= h.n_max(); ++n) {
    std::snprintf(buf, sizeof buf, "%lld,%.17g\n", static_cast<long long>(n), h(n));
    os << buf;
  }
}

void write_function_csv(std::ostream& os, const InterpolatedFunction& f, int samples_per_unit) {
  if (samples_per_unit <= 0) throw Error("interp.range", "samples per unit must be positive");
  os << "t,f\n";
  char buf[64];
  const auto& h = f.base();
  for (std::int64_t n = h.n_min(); n <= h.n_max(); ++n)
    for (int k = 0; k < samples_per_unit; ++k) {
      if (n == h.n_max() && k > 0) break;
      double t = static_cast<double>(n) + static_cast<double>(k) / samples_per_unit;
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", t, f(t));
      os << buf;
    }
}

}  // namespace distal
