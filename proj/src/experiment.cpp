#include "distal/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "distal/error.hpp"
#include "distal/interp.hpp"

namespace distal {

namespace {

namespace fs = std::filesystem;

Error schema(const std::string& why) { return Error("cli.schema", why); }

template <class T>
T param(const Json& p, const char* key, T fallback) {
  if (!p.contains(key)) return fallback;
  try {
    return p.at(key).get<T>();
  } catch (const Json::exception&) {
    throw schema(std::string("parameter '") + key + "' has the wrong type");
  }
}

Json param_json(const Json& p, const char* key, Json fallback) { return p.contains(key) ? p.at(key) : fallback; }

const Json kDefaultSkew = {{"kind", "skew"}, {"alpha", "liouville(4)"}, {"terms", 3}, {"coeff", "unit"}};

struct Artifacts {
  fs::path dir;
  std::vector<std::string> names;

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error("cli.io", "cannot write " + (dir / name).string());
    out << content;
    names.push_back(name);
  }
  void write_json(const std::string& name, const Json& j) { write(name, j.dump(2) + "\n"); }
};

std::string csv_double(double v) { return format_double(v); }

TorusPoint default_point(const Json& p, const FlowSpec& flow) {
  if (!p.contains("x0")) return TorusPoint(flow.dim());
  TorusPoint x = point_from_json(p.at("x0"));
  if (x.dim() != flow.dim()) throw Error("flows.dimension_mismatch", "x0 does not match the flow");
  return x;
}

std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> scales_from(const Json& p, const FlowSpec& flow) {
  Json spec = param_json(p, "scales", "resonance");
  if (spec.is_object()) {
    auto a = spec.at("a").get<std::vector<std::uint64_t>>();
    auto b = spec.at("b").get<std::vector<std::uint64_t>>();
    return {a, b};
  }
  const RotationAngle* alpha = nullptr;
  FlowSpec base = flow;
  if (const auto* s = std::get_if<SkewFlow>(&base.kind())) alpha = &s->cocycle.alpha();
  if (const auto* r = std::get_if<RotationFlow>(&base.kind())) alpha = &r->angle;
  if (!alpha) throw schema("automatic scales need a rotation or skew flow; pass scales {a, b}");
  auto horizon = param<std::uint64_t>(p, "horizon", 10000000);
  std::string kind = spec.get<std::string>();
  std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> out;
  if (kind == "resonance") {
    out = resonance_scales(*alpha, horizon);
  } else if (kind == "parity") {
    out = parity_scales(*alpha, horizon);
  } else {
    throw schema("unknown scale rule '" + kind + "'");
  }
  if (out.first.empty()) throw Error("ergodic.scales", "no scale pairs below the horizon");
  return out;
}

std::string gaps_csv(const GapReport& r) {
  std::ostringstream os;
  os << "scale,avgA_re,avgA_im,avgB_re,avgB_im,gap\n";
  for (std::size_t n = 0; n < r.pairs.size(); ++n) {
    const auto& [a, b] = r.pairs[n];
    os << n << "," << csv_double(a.value.real()) << "," << csv_double(a.value.imag()) << "," << csv_double(b.value.real())
       << "," << csv_double(b.value.imag()) << "," << csv_double(std::abs(a.value - b.value)) << "\n";
  }
  return os.str();
}

Json op_equidistribution(const Json& p, Artifacts& out) {
  FlowSpec flow = flow_from_json(param_json(p, "flow", {{"kind", "rotation"}, {"alpha", "golden"}}));
  auto steps = param<std::uint64_t>(p, "steps", 10000000);
  auto grid = param<std::uint64_t>(p, "grid", 100);
  double tol = param<double>(p, "tolerance", 0.001);
  EmpiricalMeasure mu = empirical_measure(flow, default_point(p, flow), steps, grid);
  double expected = 1.0 / static_cast<double>(mu.counts().size());
  double lo = 1, hi = 0;
  std::ostringstream csv;
  csv << "cell,count,probability\n";
  for (std::uint64_t c = 0; c < mu.counts().size(); ++c) {
    double pr = mu.probability(c);
    lo = std::min(lo, pr);
    hi = std::max(hi, pr);
    csv << c << "," << mu.counts()[c] << "," << csv_double(pr) << "\n";
  }
  out.write("histogram.csv", csv.str());
  double dev = std::max(hi - expected, expected - lo);
  return {{"flow", flow.describe()}, {"steps", steps},        {"grid", grid},
          {"cells", mu.counts().size()}, {"expected", expected}, {"min_probability", lo},
          {"max_probability", hi}, {"max_deviation", dev}, {"within_tolerance", dev <= tol}};
}

std::vector<RotationAngle> angles_from(const Json& p) {
  std::vector<RotationAngle> angles;
  for (const auto& a : param_json(p, "angles", Json::array())) angles.push_back(angle_from_json(a));
  if (angles.empty()) throw schema("parameter 'angles' is required");
  return angles;
}

Json op_cross_validate(const Json& p, Artifacts& out) {
  auto angles = angles_from(p);
  mpz_class max_coeff(param<std::string>(p, "max_coeff", "1000000"));
  int digits = param<int>(p, "digits", kDefaultRelationDigits);
  auto cv = cross_validate(angles, param<std::uint64_t>(p, "steps", 10000000), param<std::uint64_t>(p, "grid", 32),
                           max_coeff, digits);
  Json names = Json::array();
  for (const auto& a : angles) names.push_back(a.label());
  Json v = {{"angles", names},
            {"verdict", to_json(cv.verdict)},
            {"coverage", to_json(cv.coverage)},
            {"agreement", cv.agree ? "AGREE" : "DISAGREE"}};
  out.write_json("verdict.json", v);
  return v;
}

Json op_divergence(const Json& p, Artifacts& out) {
  FlowSpec flow = flow_from_json(param_json(p, "flow", kDefaultSkew));
  TorusPoint x0 = default_point(p, flow);
  auto [a, b] = scales_from(p, flow);
  auto dict = named_dictionary(param<std::string>(p, "dict", "chars50"), flow.dim());
  auto rep = divergence_test(flow, x0, dict, a, b, divergence_control(flow), x0);
  if (rep.divergent) out.write("gaps.csv", gaps_csv(rep.witness_report));
  Json w = {{"flow", flow.describe()},
            {"scales_a", a},
            {"scales_b", b},
            {"scanned", rep.scanned},
            {"divergent", rep.divergent},
            {"witness", rep.witness},
            {"gap", rep.gap},
            {"control_gap", rep.control_gap},
            {"ratio", rep.control_gap > 0 ? rep.gap / rep.control_gap : 0.0}};
  if (rep.divergent) {
    w["witness_report"] = to_json(rep.witness_report);
    w["control_report"] = to_json(rep.control_report);
  }
  out.write_json("witness.json", w);
  return w;
}

CocycleSpec cocycle_param(const Json& p) {
  return cocycle_from_json(param_json(p, "cocycle", {{"alpha", "liouville(4)"}, {"terms", 3}, {"coeff", "unit"}}));
}

Json op_coboundary(const Json& p, Artifacts& out) {
  CocycleSpec c = cocycle_param(p);
  auto samples = param<std::size_t>(p, "samples", 10000);
  auto seed = param<std::uint64_t>(p, "seed", 20240501);
  double tol = param<double>(p, "float_tolerance", 1e-13);
  const std::size_t k = c.terms().size();
  Json j;
  j["cocycle"] = to_json(c);
  auto full = residual_eq2(c, k, 1, samples, seed);
  j["matching"] = {{"K", k}, {"n", 1}, {"max", full.max}, {"median", full.median}, {"mean", full.mean}};
  if (k >= 1) {
    const auto& last = c.terms().back();
    double bound = 4.0 * std::numbers::pi * std::numbers::pi * std::abs(last.a) * last.lattice_dist;
    auto dropped = residual_eq2(c, k - 1, 1, samples, seed);
    j["one_less"] = {{"K", k - 1}, {"max", dropped.max}, {"bound", bound}, {"within", dropped.max <= bound + tol}};
  }
  auto square = residual_eq2(c, k, 2, samples, seed);
  j["power_two"] = {{"n", 2}, {"median", square.median}, {"min", square.min}, {"max", square.max}};
  j["identity_holds"] = full.max < 1e-12;
  out.write_json("eq2.json", j);
  return j;
}

Json op_minimality(const Json& p, Artifacts& out) {
  CocycleSpec c = cocycle_param(p);
  auto max_freq = param<std::int64_t>(p, "max_frequency", 50);
  auto powers = param<std::vector<int>>(p, "powers", {1, -1, 2, -2});
  auto grid = param<std::size_t>(p, "grid", 65536);
  auto s = residual_eq1_search(c, max_freq, powers, grid);
  FlowSpec flow = FlowSpec::skew(c);
  auto cov = density_probe(flow, default_point(p, flow), param<std::uint64_t>(p, "steps", 10000000),
                           param<std::uint64_t>(p, "coverage_grid", 32));
  Json j = {{"cocycle", to_json(c)},
            {"candidates", s.candidates},
            {"min_sup_residual", s.min_sup_residual},
            {"best_frequency", s.best_frequency},
            {"best_power", s.best_power},
            {"coverage", to_json(cov)}};
  out.write_json("minimality.json", j);
  return j;
}

Frac128 random_frac(std::mt19937_64& rng) {
  std::uint64_t hi = rng();
  std::uint64_t lo = rng();
  return Frac128::from_words(hi, lo);
}

Json op_rp_probe(const Json& p, Artifacts& out) {
  FlowSpec flow = flow_from_json(param_json(p, "flow", kDefaultSkew));
  const auto* skew = std::get_if<SkewFlow>(&flow.kind());
  if (!skew) throw schema("rp probe batch needs a skew product");
  const auto& conv = skew->cocycle.alpha().convergents();
  std::uint64_t default_t = conv.size() > 4 ? conv[4].q.get_ui() : 10000;
  auto t_max = param<std::uint64_t>(p, "t_max", default_t);
  auto pairs = param<std::size_t>(p, "pairs", 100);
  double eps = param<double>(p, "eps", 0.05);
  double delta = param<double>(p, "delta", 0.02);
  std::mt19937_64 rng(param<std::uint64_t>(p, "seed", 4242));

  std::ostringstream csv;
  csv << "kind,index,status,distance,eps,delta,witness_time,offset_index\n";
  std::size_t refuted = 0, distinct_positive = 0, positive = 0;
  std::vector<std::uint64_t> times;
  for (std::size_t i = 0; i < pairs; ++i) {
    Frac128 s = random_frac(rng), s2 = random_frac(rng);
    TorusPoint x{s, random_frac(rng)}, xp{s2, random_frac(rng)};
    double d = circle_distance(s, s2);
    double e = d / 4, dl = e / 4;
    auto r = rp_probe(flow, x, xp, e, dl, t_max);
    refuted += r.status == RpProbeResult::Status::RefutedByIsometry;
    distinct_positive += r.status == RpProbeResult::Status::Positive;
    csv << "distinct," << i << "," << to_string(r.status) << "," << csv_double(d) << "," << csv_double(e) << ","
        << csv_double(dl) << "," << r.witness_time << "," << r.offset_index << "\n";
  }
  for (std::size_t i = 0; i < pairs; ++i) {
    Frac128 s = random_frac(rng);
    TorusPoint x{s, random_frac(rng)}, xp{s, random_frac(rng)};
    auto r = rp_probe(flow, x, xp, eps, delta, t_max);
    if (r.status == RpProbeResult::Status::Positive) {
      ++positive;
      times.push_back(r.witness_time);
    }
    csv << "same_base," << i << "," << to_string(r.status) << "," << csv_double(torus_distance(x, xp)) << ","
        << csv_double(eps) << "," << csv_double(delta) << "," << r.witness_time << "," << r.offset_index << "\n";
  }
  out.write("rp.csv", csv.str());
  std::sort(times.begin(), times.end());
  Json j = {{"flow", flow.describe()},
            {"t_max", t_max},
            {"pairs", pairs},
            {"distinct_refuted", refuted},
            {"distinct_positive", distinct_positive},
            {"same_base_positive", positive},
            {"same_base_fraction", pairs ? static_cast<double>(positive) / static_cast<double>(pairs) : 0.0},
            {"median_witness_time", times.empty() ? 0 : times[times.size() / 2]},
            {"first_witness_time", times.empty() ? 0 : times.front()}};
  out.write_json("rp_summary.json", j);
  return j;
}

FiniteRelation random_relation(std::mt19937_64& rng, std::size_t n, std::size_t gens, double density) {
  auto carrier = std::make_shared<FiniteCarrier>();
  carrier->n = n;
  for (std::size_t g = 0; g < gens; ++g) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);
    carrier->generators.push_back(std::move(perm));
  }
  FiniteRelation r(carrier);
  auto threshold = static_cast<std::uint64_t>(density * 1000000);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (rng() % 1000000 < threshold) r.insert(i, j);
  return r;
}

Json op_closure(const Json& p, Artifacts& out) {
  auto instances = param<std::size_t>(p, "instances", 1000);
  auto n_max = param<std::size_t>(p, "n_max", 8);
  auto product_instances = param<std::size_t>(p, "product_instances", 100);
  std::mt19937_64 rng(param<std::uint64_t>(p, "seed", 77));
  std::size_t matches = 0, idempotent = 0, equivalences = 0;
  std::size_t rounds_max = 0;
  for (std::size_t t = 0; t < instances; ++t) {
    std::size_t n = 1 + rng() % n_max;
    std::size_t gens = rng() % 3;
    double density = 0.05 + 0.2 * static_cast<double>(rng() % 1000) / 1000.0;
    FiniteRelation r = random_relation(rng, n, gens, density);
    ClosureTrace trace;
    FiniteRelation c = factor_closure(r, &trace);
    rounds_max = std::max(rounds_max, trace.rounds);
    matches += c == invariant_equivalence_union_find(r);
    idempotent += factor_closure(c) == c;
    equivalences += c.is_equivalence() && c.is_invariant() && r.subset_of(c);
  }
  std::size_t product_pass = 0;
  Json traces = Json::array();
  for (std::size_t t = 0; t < product_instances; ++t) {
    std::size_t k = 1 + rng() % 3;
    std::vector<FiniteRelation> qs;
    Json sizes = Json::array();
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t n = 1 + rng() % 3;
      qs.push_back(random_relation(rng, n, 0, 0.4));
      sizes.push_back(n);
    }
    auto rep = product_closure_check(qs);
    product_pass += rep.passes;
    if (t < 5) {
      Json steps = Json::array();
      for (const auto& s : rep.trace) steps.push_back({{"J", s.factors}, {"pairs", s.pairs}, {"contained", s.contained}});
      traces.push_back({{"sizes", sizes}, {"closure_size", rep.closure_size}, {"trace", steps}});
    }
  }
  Json j = {{"instances", instances},
            {"matches", matches},
            {"idempotent", idempotent},
            {"invariant_equivalences", equivalences},
            {"max_rounds", rounds_max},
            {"product_instances", product_instances},
            {"product_passes", product_pass},
            {"sample_traces", traces}};
  out.write_json("closure.json", j);
  return j;
}

double riemann_mean(const InterpolatedFunction& f, double a, double step) {
  CompensatedSum s;
  auto n = static_cast<std::uint64_t>(std::floor(a / step));
  for (std::uint64_t k = 0; k < n; ++k) s.add(f((static_cast<double>(k) + 0.5) * step));
  double rest = a - static_cast<double>(n) * step;
  double v = s.value().real() * step;
  if (rest > 0) v += f(static_cast<double>(n) * step + rest / 2) * rest;
  return v / a;
}

Json op_interpolation(const Json& p, Artifacts& out) {
  FlowSpec flow = flow_from_json(param_json(p, "flow", kDefaultSkew));
  TorusPoint x0 = default_point(p, flow);
  auto [a, b] = scales_from(p, flow);
  std::string f_id = param<std::string>(p, "f", "");
  if (f_id.empty()) {
    auto dict = named_dictionary(param<std::string>(p, "dict", "chars50"), flow.dim());
    auto rep = divergence_test(flow, x0, dict, a, b, divergence_control(flow), x0);
    if (!rep.divergent) throw Error("interp.no_divergent_part", "no character in the dictionary diverges");
    f_id = rep.witness;
  }
  TestFunction f = TestFunction::parse(f_id, flow.dim());
  GenerateOptions opt{a, b, param<std::int64_t>(p, "n_max", 0)};
  DistalSequence h = generate_h(flow, x0, f, opt);
  auto norm = even_zero_normalize(h, a, b);
  InterpolatedFunction fn = interpolate(norm.h);
  auto eq = equicontinuity_check(norm.h);
  GapReport cont = divergent_means(fn, a, b);
  GapReport disc = sequence_scan(norm.h, a, b);
  double sup_h = norm.h.sup();

  // Exactness against a midpoint Riemann sum at step 1e-4.
  std::mt19937_64 rng(param<std::uint64_t>(p, "seed", 99));
  double riemann_max = param<double>(p, "riemann_max_scale", 1000.0);
  double worst_riemann = 0;
  Json riemann = Json::array();
  for (int i = 0; i < 20; ++i) {
    double A = 1.0 + (riemann_max - 1.0) * static_cast<double>(rng() >> 11) / 9007199254740992.0;
    double exact = continuous_time_mean(fn, A).value.real();
    double approx = riemann_mean(fn, A, 1e-4);
    worst_riemann = std::max(worst_riemann, std::abs(exact - approx));
    riemann.push_back({{"A", A}, {"exact", exact}, {"riemann", approx}});
  }
  // |alpha_A(f) - discrete average at A| <= sup|h| / A for every even A in range.
  std::size_t tested = 0, violations = 0;
  double worst_ratio = 0;
  {
    CompensatedSum s;
    std::int64_t top = std::min<std::int64_t>(norm.h.n_max() - 1, static_cast<std::int64_t>(std::max(a.back(), b.back())));
    for (std::int64_t n = 0; n < top; ++n) {
      s.add(norm.h(n));
      std::int64_t A = n + 1;
      if (A % 2) continue;
      double disc_mean = s.value().real() / static_cast<double>(A);
      double cont_mean = continuous_time_mean(fn, static_cast<double>(A)).value.real();
      double diff = std::abs(cont_mean - disc_mean);
      double bound = sup_h / static_cast<double>(A);
      ++tested;
      violations += diff > bound + 1e-15;
      if (bound > 0) worst_ratio = std::max(worst_ratio, diff / bound);
    }
  }
  double gap_bound = 2 * sup_h * (1.0 / static_cast<double>(a.back()) + 1.0 / static_cast<double>(b.back()));
  std::ostringstream csv;
  write_sequence_csv(csv, norm.h);
  out.write("h.csv", csv.str());
  Json j = {{"f", f_id},
            {"part", h.provenance().part},
            {"gap_re", h.provenance().gap_re},
            {"gap_im", h.provenance().gap_im},
            {"control_gap_re", h.provenance().control_gap_re},
            {"control_gap_im", h.provenance().control_gap_im},
            {"normalization", norm.choice},
            {"gap_original", norm.gap_original},
            {"gap_p1", norm.gap_p1},
            {"gap_r1p0", norm.gap_r1p0},
            {"gap_ratio", norm.ratio},
            {"normalize_warning", norm.warning},
            {"sup_h", sup_h},
            {"lipschitz", eq.lipschitz},
            {"lipschitz_within_2sup", eq.within_bound},
            {"lipschitz_within_sup", eq.within_nominal_constant},
            {"continuous_gap", cont.gap},
            {"discrete_gap", disc.gap},
            {"gap_difference", std::abs(cont.gap - disc.gap)},
            {"gap_difference_bound", gap_bound},
            {"riemann_worst", worst_riemann},
            {"riemann_tolerance", 1e-3 * sup_h},
            {"riemann_samples", riemann},
            {"identity_tested", tested},
            {"identity_violations", violations},
            {"identity_worst_ratio", worst_ratio}};
  out.write_json("interp.json", j);
  return j;
}

Json op_separation(const Json& p, Artifacts& out) {
  auto bases = param<std::vector<int>>(p, "bases", {10, 11, 13});
  auto window = param<std::uint64_t>(p, "window", 100);
  auto count = param<std::size_t>(p, "windows", 1000);
  std::string f_id = param<std::string>(p, "f", "re e(0,1)");
  std::vector<FlowSpec> factors;
  std::vector<RotationAngle> angles;
  for (int b : bases) {
    RotationAngle a = liouville_angle(param<int>(p, "liouville_terms", 4), b);
    angles.push_back(a);
    factors.push_back(FlowSpec::skew(build_cocycle(a, param<std::size_t>(p, "terms", 3))));
  }
  FlowSpec flow = FlowSpec::product(factors);
  auto verdict = rotation_family_verdict(angles, kDefaultMaxCoeff, 100);
  std::vector<TestFunction> fs(factors.size(), TestFunction::parse(f_id, 2));
  std::uint64_t before = checked_report_count();
  auto rep = separation_family(flow, TorusPoint(flow.dim()), fs, window, count);
  std::ostringstream csv;
  csv << "i,j,width,gap,twice_width,high_start,low_start\n";
  Json pairs = Json::array();
  bool bound_ok = true;
  for (const auto& pr : rep.pairs) {
    bool ok = pr.report.gap >= 2 * pr.width - 1e-12;
    bound_ok = bound_ok && ok;
    csv << pr.i << "," << pr.j << "," << csv_double(pr.width) << "," << csv_double(pr.report.gap) << ","
        << csv_double(2 * pr.width) << "," << pr.high_start << "," << pr.low_start << "\n";
    pairs.push_back({{"i", pr.i},
                     {"j", pr.j},
                     {"width", pr.width},
                     {"gap", pr.report.gap},
                     {"sup", pr.report.sup_f},
                     {"gap_at_least_twice_width", ok}});
  }
  out.write("separation.csv", csv.str());
  Json ext = Json::array();
  for (const auto& [lo, hi] : rep.extremes) ext.push_back({lo, hi});
  Json j = {{"flow", flow.describe()},
            {"base_angles_independent", !verdict.dependent()},
            {"f", rep.f_ids},
            {"window", window},
            {"windows", count},
            {"raw_extremes", ext},
            {"pairs", pairs},
            {"min_width", rep.min_width},
            {"gap_at_least_twice_width", bound_ok},
            {"reports_checked", checked_report_count() - before}};
  out.write_json("separation.json", j);
  return j;
}

Json op_time_change(const Json& p, Artifacts& out) {
  Json base = param_json(p, "base", {{"kind", "rotation"}, {"alpha", "sqrt(2)-1"}});
  std::string dt = param<std::string>(p, "dt", "1");
  std::string a = param<std::string>(p, "a", "3");
  FlowSpec f = FlowSpec::sampled(flow_from_json(base), dt);
  FlowSpec fa = time_change(f, a);
  auto steps = param<std::uint64_t>(p, "steps", 10000000);
  auto grid = param<std::uint64_t>(p, "grid", 32);
  auto mu = empirical_measure(f, TorusPoint(f.dim()), steps, grid);
  auto mu_a = empirical_measure(fa, TorusPoint(fa.dim()), steps, grid);
  Json j = {{"flow", f.describe()}, {"time_changed", fa.describe()}, {"sup_cell_gap", sup_cell_gap(mu, mu_a)}};
  out.write_json("time_change.json", j);
  return j;
}

using OpFn = std::function<Json(const Json&, Artifacts&)>;

const std::map<std::string, OpFn>& op_table() {
  static const std::map<std::string, OpFn> table = {
      {"equidistribution", op_equidistribution}, {"cross_validate", op_cross_validate},
      {"divergence", op_divergence},             {"coboundary", op_coboundary},
      {"minimality", op_minimality},             {"rp_probe_batch", op_rp_probe},
      {"closure_oracle", op_closure},            {"interpolation", op_interpolation},
      {"separation", op_separation},             {"time_change", op_time_change},
  };
  return table;
}

struct PresetDef {
  PresetInfo info;
  Json params;
};

const std::vector<PresetDef>& preset_defs() {
  static const std::vector<PresetDef> defs = {
      {{"equidistribution-control", "equidistribution", "Rotation(golden), N=10^7, m=100 histogram"},
       {{"flow", {{"kind", "rotation"}, {"alpha", "golden"}}}, {"steps", 10000000}, {"grid", 100}}},
      {{"dependence-detection", "cross_validate", "{a, 2a}: relation certificate and confined orbit"},
       {{"angles", {"sqrt(2)-1", "frac(2*(sqrt(2)-1))"}}, {"steps", 10000000}, {"grid", 32}}},
      {{"disjointness-crossval", "cross_validate", "{sqrt2-1, sqrt3-1}: independence and full coverage"},
       {{"angles", {"sqrt(2)-1", "sqrt(3)-1"}}, {"steps", 10000000}, {"grid", 32}}},
      {{"furstenberg-divergence", "divergence", "two-scale divergence witness on the default skew product"},
       {{"flow", kDefaultSkew}, {"dict", "chars50"}, {"scales", "resonance"}, {"horizon", 10000000}}},
      {{"coboundary-exactness", "coboundary", "measurable solution residuals"},
       {{"samples", 10000}}},
      {{"minimality-evidence", "minimality", "character dictionary refutation search and orbit coverage"},
       {{"max_frequency", 50}, {"powers", {1, -1, 2, -2}}, {"grid", 65536}, {"steps", 10000000}, {"coverage_grid", 32}}},
      {{"eq-factor-probe", "rp_probe_batch", "regional proximality probes on the default skew product"},
       {{"flow", kDefaultSkew}, {"pairs", 100}, {"eps", 0.05}, {"delta", 0.02}}},
      {{"closure-oracle", "closure_oracle", "factor closures against union-find, product closure checks"},
       {{"instances", 1000}, {"n_max", 8}, {"product_instances", 100}}},
      {{"interpolation-exactness", "interpolation", "Z to R interpolation of a divergent sequence"},
       {{"flow", kDefaultSkew}, {"scales", "resonance"}}},
      {{"mean-gap-family", "separation", "k=3 separation family over three Liouville skew products"},
       {{"bases", {10, 11, 13}}, {"window", 100}, {"windows", 1000}}},
      {{"time-change-invariance", "time_change", "empirical measures of a sampled rotation flow and its a=3 time change"},
       {{"a", "3"}, {"steps", 10000000}, {"grid", 32}}},
  };
  return defs;
}

std::string fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  if (!j.is_object() || j.empty()) throw schema("config must be a nonempty object");
  ExperimentConfig c;
  if (!j.contains("name") || !j.at("name").is_string()) throw schema("config needs a string 'name'");
  if (!j.contains("operation") || !j.at("operation").is_string()) throw schema("config needs a string 'operation'");
  c.name = j.at("name").get<std::string>();
  c.operation = j.at("operation").get<std::string>();
  if (j.contains("params")) {
    if (!j.at("params").is_object()) throw schema("'params' must be an object");
    c.params = j.at("params");
  }
  if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
  if (!op_table().count(c.operation)) throw schema("unknown operation '" + c.operation + "'");
  for (const auto& [key, value] : j.items()) {
    if (key != "name" && key != "operation" && key != "params" && key != "out_dir") {
      throw schema("unknown config field '" + key + "'");
    }
  }
  return c;
}

Json ExperimentConfig::to_json() const {
  return {{"name", name}, {"operation", operation}, {"params", params}, {"out_dir", out_dir}};
}

const std::vector<std::string>& operations() {
  static const std::vector<std::string> ops = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : op_table()) v.push_back(k);
    return v;
  }();
  return ops;
}

const std::vector<PresetInfo>& presets() {
  static const std::vector<PresetInfo> list = [] {
    std::vector<PresetInfo> v;
    for (const auto& d : preset_defs()) v.push_back(d.info);
    return v;
  }();
  return list;
}

ExperimentConfig preset_config(const std::string& id, const std::string& out_dir) {
  for (const auto& d : preset_defs()) {
    if (d.info.id == id) return ExperimentConfig{d.info.id, d.info.operation, d.params, out_dir};
  }
  throw Error("cli.unknown_preset", "no preset named '" + id + "'");
}

std::string config_hash(const ExperimentConfig& config) {
  Json j = config.to_json();
  j.erase("out_dir");
  return fnv1a(j.dump());
}

RunResult run(const ExperimentConfig& config) {
  if (config.name.empty()) throw schema("config needs a name");
  auto it = op_table().find(config.operation);
  if (it == op_table().end()) throw schema("unknown operation '" + config.operation + "'");
  if (config.out_dir.empty()) throw schema("config needs an output directory");
  fs::create_directories(config.out_dir);

  auto t0 = std::chrono::steady_clock::now();
  Artifacts artifacts{config.out_dir, {}};
  RunResult result;
  result.summary = it->second(config.params, artifacts);
  artifacts.write_json("summary.json", {{"name", config.name}, {"operation", config.operation}, {"result", result.summary}});
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  result.artifacts = artifacts.names;

  Json manifest = {{"name", config.name},
                   {"operation", config.operation},
                   {"config_hash", config_hash(config)},
                   {"version", kVersion},
                   {"wall_time_s", wall},
                   {"artifacts", artifacts.names}};
  std::ofstream(fs::path(config.out_dir) / "manifest.json", std::ios::binary) << manifest.dump(2) << "\n";
  return result;
}

}  // namespace distal
