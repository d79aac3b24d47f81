#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "distal/error.hpp"
#include "distal/experiment.hpp"
#include "distal/interp.hpp"

using namespace distal;

namespace {

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cli.io", "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error("cli.schema", path + ": " + e.what());
  }
}

// Accepts either a path to a JSON file or inline JSON / a bare expression.
Json json_arg(const std::string& text) {
  if (!text.empty() && (text[0] == '{' || text[0] == '[')) return Json::parse(text);
  std::ifstream probe(text);
  if (probe) return read_json_file(text);
  return text;
}

void write_text(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cli.io", "cannot write " + path);
  out << content;
}

void print(const Json& j) { std::cout << j.dump(2) << "\n"; }

std::vector<std::uint64_t> split_scales(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
  return out;
}

std::vector<std::string> split_top_level(const std::string& s) {
  // Commas inside parentheses belong to the expression: liouville(4,10).
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

Json cocycle_json(const std::string& alpha, int terms, const std::string& coeff) {
  return {{"alpha", alpha}, {"terms", terms}, {"coeff", coeff}};
}

std::string gaps_csv(const GapReport& r) {
  std::ostringstream os;
  os << "scale,avgA_re,avgA_im,avgB_re,avgB_im,gap\n";
  for (std::size_t n = 0; n < r.pairs.size(); ++n) {
    const auto& [a, b] = r.pairs[n];
    os << n << "," << format_double(a.value.real()) << "," << format_double(a.value.imag()) << ","
       << format_double(b.value.real()) << "," << format_double(b.value.imag()) << ","
       << format_double(std::abs(a.value - b.value)) << "\n";
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distal-lab: experiments on distal flows on tori"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // simulate
  auto* sim = app.add_subcommand("simulate", "iterate a flow and report grid coverage");
  std::string sim_flow, sim_x0, sim_out;
  std::uint64_t sim_steps = 1000000, sim_grid = 32;
  sim->add_option("--flow", sim_flow, "flow JSON file or inline JSON")->required();
  sim->add_option("--x0", sim_x0, "start point, e.g. 0.25,0.5");
  sim->add_option("--steps", sim_steps);
  sim->add_option("--grid", sim_grid);
  sim->add_option("--out", sim_out, "per-cell histogram CSV");

  // cocycle
  auto* coc = app.add_subcommand("cocycle", "build a cocycle and check its equations");
  coc->require_subcommand(1);
  std::string c_alpha = "liouville(4)", c_coeff = "unit", c_out;
  int c_terms = 3;
  for (auto* s : {coc->add_subcommand("build", "print the cocycle JSON"),
                  coc->add_subcommand("eq1", "refutation search over characters"),
                  coc->add_subcommand("eq2", "measurable solution residuals")}) {
    s->add_option("--alpha", c_alpha);
    s->add_option("--terms", c_terms);
    s->add_option("--coeff", c_coeff, "unit or geometric:r");
  }
  auto* c_build = coc->get_subcommand("build");
  c_build->add_option("--out", c_out);
  auto* c_eq1 = coc->get_subcommand("eq1");
  std::int64_t e1_freq = 50;
  std::vector<int> e1_powers{1, -1, 2, -2};
  std::size_t e1_grid = 65536;
  c_eq1->add_option("--max-frequency", e1_freq);
  c_eq1->add_option("--powers", e1_powers)->delimiter(',');
  c_eq1->add_option("--grid", e1_grid);
  auto* c_eq2 = coc->get_subcommand("eq2");
  std::size_t e2_k = 0, e2_samples = 10000;
  int e2_n = 1;
  std::uint64_t e2_seed = 20240501;
  c_eq2->add_option("--k", e2_k, "truncation (default: all terms)");
  c_eq2->add_option("--n", e2_n);
  c_eq2->add_option("--samples", e2_samples);
  c_eq2->add_option("--seed", e2_seed);

  // scan
  auto* scan = app.add_subcommand("scan", "two-scale Birkhoff mean scan");
  std::string s_flow, s_x0, s_dict, s_f, s_a, s_b, s_out;
  scan->add_option("--flow", s_flow)->required();
  scan->add_option("--x0", s_x0);
  scan->add_option("--f-dict", s_dict, "dictionary name, e.g. chars50");
  scan->add_option("--f", s_f, "single test function id, e.g. \"e(1,0)\"");
  scan->add_option("--scales-a", s_a)->required();
  scan->add_option("--scales-b", s_b)->required();
  scan->add_option("--out", s_out, "gaps CSV");

  // disjoint
  auto* dis = app.add_subcommand("disjoint", "integer relations among rotation angles");
  std::string d_angles, d_max = "1000000";
  int d_digits = kDefaultRelationDigits;
  std::vector<std::uint64_t> d_cv;
  bool d_frequencies = false;
  dis->add_option("--angles", d_angles, "comma separated expressions")->required();
  dis->add_option("--max-coeff", d_max);
  dis->add_option("--digits", d_digits);
  dis->add_option("--cross-validate", d_cv, "N m")->expected(2);
  dis->add_flag("--frequencies", d_frequencies, "treat the values as flow rates (no leading 1)");

  // relations
  auto* rel = app.add_subcommand("relations", "finite relation closures and proximality probes");
  rel->require_subcommand(1);
  auto* r_close = rel->add_subcommand("close", "smallest invariant equivalence containing R");
  std::string r_in;
  r_close->add_option("input", r_in, "edge-list file")->required();
  auto* r_prod = rel->add_subcommand("product-check", "closure of the product relation");
  std::vector<std::string> r_ins;
  r_prod->add_option("inputs", r_ins, "one edge-list file per factor")->required();
  auto* r_rp = rel->add_subcommand("rp-probe", "regional proximality probe");
  std::string rp_flow, rp_x, rp_xp;
  double rp_eps = 0.05, rp_delta = 0.02;
  std::uint64_t rp_t = 10009;
  r_rp->add_option("--flow", rp_flow)->required();
  r_rp->add_option("--x", rp_x)->required();
  r_rp->add_option("--xp", rp_xp)->required();
  r_rp->add_option("--eps", rp_eps);
  r_rp->add_option("--delta", rp_delta);
  r_rp->add_option("--t-max", rp_t);

  // interp
  auto* itp = app.add_subcommand("interp", "build h from a divergent character and interpolate it");
  std::string i_flow, i_x0, i_f, i_a, i_b, i_seq, i_fn;
  int i_samples = 4;
  bool i_normalize = true;
  itp->add_option("--flow", i_flow)->required();
  itp->add_option("--x0", i_x0);
  itp->add_option("--f", i_f)->required();
  itp->add_option("--scales-a", i_a)->required();
  itp->add_option("--scales-b", i_b)->required();
  itp->add_option("--out-seq", i_seq, "CSV of n,h(n)");
  itp->add_option("--out-fn", i_fn, "CSV of t,f(t)");
  itp->add_option("--samples-per-unit", i_samples);
  itp->add_flag("!--no-normalize", i_normalize, "skip the even-zero normalization");

  // presets
  auto* rp = app.add_subcommand("run-preset", "run a shipped preset or a config file");
  std::string p_id, p_config, p_out;
  rp->add_option("id", p_id, "preset id");
  rp->add_option("--config", p_config, "experiment config JSON instead of a preset");
  rp->add_option("--out", p_out, "output directory (default out/<id>)");
  auto* lp = app.add_subcommand("list-presets", "list shipped presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      FlowSpec flow = flow_from_json(json_arg(sim_flow));
      TorusPoint x0 = sim_x0.empty() ? TorusPoint(flow.dim()) : parse_point(sim_x0);
      CoverageReport cov = density_probe(flow, x0, sim_steps, sim_grid);
      if (!sim_out.empty()) {
        EmpiricalMeasure mu = empirical_measure(flow, x0, sim_steps, sim_grid);
        std::ostringstream csv;
        csv << "cell,count,probability\n";
        for (std::uint64_t c = 0; c < mu.counts().size(); ++c)
          csv << c << "," << mu.counts()[c] << "," << format_double(mu.probability(c)) << "\n";
        write_text(sim_out, csv.str());
      }
      print(to_json(cov));
    } else if (coc->parsed()) {
      CocycleSpec c = cocycle_from_json(cocycle_json(c_alpha, c_terms, c_coeff));
      if (c_build->parsed()) {
        write_text(c_out, to_json(c).dump(2) + "\n");
      } else if (c_eq1->parsed()) {
        auto s = residual_eq1_search(c, e1_freq, e1_powers, e1_grid);
        print({{"candidates", s.candidates},
               {"min_sup_residual", s.min_sup_residual},
               {"best_frequency", s.best_frequency},
               {"best_power", s.best_power}});
      } else {
        std::size_t k = e2_k ? e2_k : c.terms().size();
        auto r = residual_eq2(c, k, e2_n, e2_samples, e2_seed);
        print({{"k", k}, {"n", e2_n}, {"samples", r.samples}, {"min", r.min}, {"median", r.median}, {"mean", r.mean},
               {"max", r.max}});
      }
    } else if (scan->parsed()) {
      FlowSpec flow = flow_from_json(json_arg(s_flow));
      TorusPoint x0 = s_x0.empty() ? TorusPoint(flow.dim()) : parse_point(s_x0);
      auto a = split_scales(s_a), b = split_scales(s_b);
      if (!s_f.empty()) {
        GapReport r = two_scale_scan(flow, x0, TestFunction::parse(s_f, flow.dim()), a, b);
        write_text(s_out, gaps_csv(r));
        if (!s_out.empty()) print(to_json(r));
      } else {
        auto dict = named_dictionary(s_dict.empty() ? "chars50" : s_dict, flow.dim());
        auto rep = divergence_test(flow, x0, dict, a, b, divergence_control(flow), x0);
        if (rep.divergent) write_text(s_out, gaps_csv(rep.witness_report));
        Json j = {{"scanned", rep.scanned},     {"divergent", rep.divergent}, {"witness", rep.witness},
                  {"gap", rep.gap},             {"control_gap", rep.control_gap}};
        if (!s_out.empty() || !rep.divergent) print(j);
        if (!rep.divergent) return 1;
      }
    } else if (dis->parsed()) {
      std::vector<RotationAngle> angles;
      for (const auto& e : split_top_level(d_angles)) angles.push_back(angle_from_expression(e, d_digits + 20));
      mpz_class max_coeff(d_max);
      if (!d_cv.empty()) {
        auto cv = cross_validate(angles, d_cv[0], d_cv[1], max_coeff, d_digits);
        print({{"verdict", to_json(cv.verdict)},
               {"coverage", to_json(cv.coverage)},
               {"agreement", cv.agree ? "AGREE" : "DISAGREE"}});
        if (!cv.agree) return 1;
      } else {
        auto v = d_frequencies ? frequency_family_verdict(angles, max_coeff, d_digits)
                               : rotation_family_verdict(angles, max_coeff, d_digits);
        print(to_json(v));
      }
    } else if (rel->parsed()) {
      auto load = [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error("cli.io", "cannot open " + path);
        return parse_relation(in);
      };
      if (r_close->parsed()) {
        ClosureTrace trace;
        FiniteRelation c = factor_closure(load(r_in), &trace);
        std::cout << format_relation(c);
      } else if (r_prod->parsed()) {
        std::vector<FiniteRelation> qs;
        for (const auto& p : r_ins) qs.push_back(load(p));
        auto rep = product_closure_check(qs);
        Json steps = Json::array();
        for (const auto& s : rep.trace) steps.push_back({{"J", s.factors}, {"pairs", s.pairs}, {"contained", s.contained}});
        print({{"passes", rep.passes},
               {"product_size", rep.product_size},
               {"closure_size", rep.closure_size},
               {"trace", steps}});
        if (!rep.passes) return 1;
      } else {
        FlowSpec flow = flow_from_json(json_arg(rp_flow));
        auto r = rp_probe(flow, parse_point(rp_x), parse_point(rp_xp), rp_eps, rp_delta, rp_t);
        print(to_json(r));
      }
    } else if (itp->parsed()) {
      FlowSpec flow = flow_from_json(json_arg(i_flow));
      TorusPoint x0 = i_x0.empty() ? TorusPoint(flow.dim()) : parse_point(i_x0);
      auto a = split_scales(i_a), b = split_scales(i_b);
      DistalSequence h = generate_h(flow, x0, TestFunction::parse(i_f, flow.dim()), GenerateOptions{a, b, 0});
      Json j = {{"part", h.provenance().part}, {"gap_re", h.provenance().gap_re}, {"gap_im", h.provenance().gap_im}};
      if (i_normalize) {
        auto norm = even_zero_normalize(h, a, b);
        j["normalization"] = norm.choice;
        j["gap_ratio"] = norm.ratio;
        j["warning"] = norm.warning;
        h = norm.h;
      }
      InterpolatedFunction fn = interpolate(h);
      auto eq = equicontinuity_check(h);
      j["sup_h"] = h.sup();
      j["lipschitz"] = eq.lipschitz;
      j["discrete_gap"] = sequence_scan(h, a, b).gap;
      j["continuous_gap"] = divergent_means(fn, a, b).gap;
      if (!i_seq.empty()) {
        std::ostringstream os;
        write_sequence_csv(os, h);
        write_text(i_seq, os.str());
      }
      if (!i_fn.empty()) {
        std::ostringstream os;
        write_function_csv(os, fn, i_samples);
        write_text(i_fn, os.str());
      }
      print(j);
    } else if (rp->parsed()) {
      ExperimentConfig config;
      if (!p_config.empty()) {
        config = ExperimentConfig::from_json(read_json_file(p_config));
        if (!p_out.empty()) config.out_dir = p_out;
        if (config.out_dir.empty()) config.out_dir = "out/" + config.name;
      } else {
        if (p_id.empty()) throw Error("cli.schema", "give a preset id or --config");
        config = preset_config(p_id, p_out.empty() ? "out/" + p_id : p_out);
      }
      RunResult r = run(config);
      print({{"name", config.name}, {"out_dir", config.out_dir}, {"artifacts", r.artifacts}, {"summary", r.summary}});
      return r.status;
    } else if (lp->parsed()) {
      for (const auto& p : presets()) std::printf("%-26s %-18s %s\n", p.id.c_str(), p.operation.c_str(), p.description.c_str());
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error [cli.internal]: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
