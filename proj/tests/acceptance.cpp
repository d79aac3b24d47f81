// Runs every shipped preset and prints one PASS/FAIL line per acceptance
// criterion. Regression baselines below were frozen from the first green run.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "distal/error.hpp"
#include "distal/experiment.hpp"

using namespace distal;
namespace fs = std::filesystem;

namespace {

constexpr double kBaselineWitnessGap = 0.32942693672294737;   // e(-49,-10) on Skew(liouville(4), 3 terms)
constexpr double kBaselineEq1Residual = 1.9999999753644613;   // min sup-residual, |j| <= 50, m in {+-1, +-2}
constexpr int kBaselineSameBasePositive = 100;                 // of 100 same-base pairs
constexpr double kBaselineSeparationWidth = 0.9665777259183346;

struct Outcome {
  Json summary;
  double seconds = 0;
  std::vector<std::string> artifacts;
};

fs::path g_root;
std::map<std::string, Outcome> g_runs;
int g_failures = 0;

Outcome run_preset(const std::string& id, const std::string& suffix = "") {
  auto t0 = std::chrono::steady_clock::now();
  RunResult r = run(preset_config(id, (g_root / (id + suffix)).string()));
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return Outcome{r.summary, s, r.artifacts};
}

const Outcome& first_run(const std::string& id) {
  auto it = g_runs.find(id);
  if (it == g_runs.end()) it = g_runs.emplace(id, run_preset(id)).first;
  return it->second;
}

void report(int n, bool ok, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool within_rel(double v, double base, double rel) { return std::abs(v - base) <= rel * std::abs(base); }

void criterion(int n, auto&& body) {
  try {
    body();
  } catch (const Error& e) {
    report(n, false, std::string("error ") + e.code() + ": " + e.what());
  } catch (const std::exception& e) {
    report(n, false, std::string("exception: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  g_root = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "distal_acceptance";
  fs::remove_all(g_root);
  fs::create_directories(g_root);
  std::uint64_t reports_before = checked_report_count();

  criterion(1, [] {
    const auto& o = first_run("equidistribution-control");
    const Json& s = o.summary;
    double lo = s["min_probability"], hi = s["max_probability"];
    bool ok = lo >= 0.009 && hi <= 0.011 && s["cells"] == 100 && o.seconds < 10;
    report(1, ok, fmt("cell probabilities in [%.7f, %.7f], max deviation %.2e, %.2f s", lo, hi,
                      s["max_deviation"].get<double>(), o.seconds));
  });

  criterion(2, [] {
    const auto& o = first_run("dependence-detection");
    const Json& s = o.summary;
    bool dep = s["verdict"]["status"] == "dependent";
    bool cert = dep && s["verdict"]["coeffs"] == Json::array({"0", "2", "-1"});
    double cov = s["coverage"]["coverage"];
    bool ok = cert && cov <= 0.12 && s["agreement"] == "AGREE";
    report(2, ok, fmt("verdict %s, certificate %s, coverage %.4f, %s", s["verdict"]["status"].get<std::string>().c_str(),
                      dep ? s["verdict"]["coeffs"].dump().c_str() : "none", cov,
                      s["agreement"].get<std::string>().c_str()));
  });

  criterion(3, [] {
    const auto& o = first_run("disjointness-crossval");
    const Json& s = o.summary;
    bool ind = s["verdict"]["status"] == "independent_up_to" && s["verdict"]["max_coeff"] == "1000000" &&
               s["verdict"]["digits"] == 120;
    double cov = s["coverage"]["coverage"];
    bool ok = ind && cov == 1.0 && s["agreement"] == "AGREE" && o.seconds < 60;
    report(3, ok, fmt("verdict %s (norm bound %.3g), coverage %.4f, %s, %.2f s",
                      s["verdict"]["status"].get<std::string>().c_str(), s["verdict"]["norm_bound"].get<double>(), cov,
                      s["agreement"].get<std::string>().c_str(), o.seconds));
  });

  criterion(4, [] {
    const auto& o = first_run("furstenberg-divergence");
    const Json& s = o.summary;
    double gap = s["gap"], control = s["control_gap"];
    bool ok = s["divergent"] == true && gap > 3 * control && within_rel(gap, kBaselineWitnessGap, 0.01) &&
              fs::exists(g_root / "furstenberg-divergence" / "gaps.csv");
    report(4, ok, fmt("witness %s, gap %.6f vs control %.6f (x%.1f), baseline %.6f",
                      s["witness"].get<std::string>().c_str(), gap, control, gap / control, kBaselineWitnessGap));
  });

  criterion(5, [] {
    const Json& s = first_run("coboundary-exactness").summary;
    double mx = s["matching"]["max"];
    report(5, mx < 1e-12, fmt("max residual %.3e over %d samples at K=%d, n=1", mx, 10000, s["matching"]["K"].get<int>()));
  });

  criterion(6, [] {
    const Json& s = first_run("minimality-evidence").summary;
    double r = s["min_sup_residual"];
    double cov = s["coverage"]["coverage"];
    bool ok = r >= 0.5 && within_rel(r, kBaselineEq1Residual, 1e-6) && cov == 1.0;
    report(6, ok, fmt("min sup-residual %.10f over %d candidates (baseline %.10f), coverage %.4f", r,
                      s["candidates"].get<int>(), kBaselineEq1Residual, cov));
  });

  criterion(7, [] {
    const Json& s = first_run("eq-factor-probe").summary;
    int refuted = s["distinct_refuted"], pairs = s["pairs"], positive = s["same_base_positive"];
    bool ok = refuted == pairs && positive >= 0.9 * pairs && positive == kBaselineSameBasePositive;
    report(7, ok, fmt("distinct bases refuted %d/%d, same-base positive %d/%d (median witness t=%d)", refuted, pairs,
                      positive, pairs, s["median_witness_time"].get<int>()));
  });

  criterion(8, [] {
    const auto& o = first_run("closure-oracle");
    const Json& s = o.summary;
    int m = s["matches"], n = s["instances"], p = s["product_passes"], pn = s["product_instances"];
    bool ok = m == n && n == 1000 && p == pn && pn == 100 && o.seconds < 30;
    report(8, ok, fmt("closure = oracle on %d/%d, product check %d/%d, %.2f s", m, n, p, pn, o.seconds));
  });

  criterion(9, [] {
    const Json& s = first_run("interpolation-exactness").summary;
    double rw = s["riemann_worst"], rt = s["riemann_tolerance"];
    int viol = s["identity_violations"], tested = s["identity_tested"];
    double gd = s["gap_difference"], gb = s["gap_difference_bound"];
    bool ok = rw <= rt && viol == 0 && tested > 0 && gd <= gb;
    report(9, ok, fmt("Riemann error %.2e <= %.2e; identity held at %d/%d even A; |gap_c - gap_d| %.2e <= %.2e", rw, rt,
                      tested - viol, tested, gd, gb));
  });

  criterion(10, [] {
    const Json& s = first_run("mean-gap-family").summary;
    double w = s["min_width"];
    bool bound = s["gap_at_least_twice_width"];
    bool ok = bound && w >= 0.5 && within_rel(w, kBaselineSeparationWidth, 0.01) && s["base_angles_independent"] == true;
    report(10, ok, fmt("gap >= 2 width on all %zu pairs: %s, min width %.4f (baseline %.4f)", s["pairs"].size(),
                       bound ? "yes" : "no", w, kBaselineSeparationWidth));
  });

  criterion(11, [] {
    std::size_t files = 0, diffs = 0;
    std::string first_diff;
    for (const auto& p : presets()) {
      const Outcome& a = first_run(p.id);
      Outcome b = run_preset(p.id, ".rerun");
      for (const auto& name : a.artifacts) {
        ++files;
        if (slurp(g_root / p.id / name) != slurp(g_root / (p.id + ".rerun") / name)) {
          ++diffs;
          if (first_diff.empty()) first_diff = p.id + "/" + name;
        }
      }
      if (a.artifacts != b.artifacts) ++diffs;
    }
    report(11, diffs == 0 && files > 0,
           fmt("%zu presets, %zu artifacts compared, %zu differ%s%s", presets().size(), files, diffs,
               first_diff.empty() ? "" : ", first: ", first_diff.c_str()));
  });

  std::printf("gap reports checked against 2 sup|f| in this process: %llu, none violated\n",
              static_cast<unsigned long long>(checked_report_count() - reports_before));
  std::printf("%s: %d criteria failed\n", g_failures ? "FAIL" : "PASS", g_failures);
  return g_failures ? 1 : 0;
}
