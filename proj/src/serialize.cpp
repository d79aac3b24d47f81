#include "distal/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "distal/error.hpp"

namespace distal {

namespace {

Error schema(const std::string& why) { return Error("serialize.schema", why); }

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw schema(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string as_string(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  if (j.is_number()) return format_double(j.get<double>());
  throw schema("expected a string or number");
}

Frac128 frac_from_json(const Json& j) {
  if (j.is_string()) return Frac128::from_hex(j.get<std::string>());
  if (j.is_number()) return Frac128::from_double(j.get<double>());
  throw schema("expected a coordinate");
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(Frac128 x) { return x.to_hex(); }

Json to_json(const TorusPoint& x) {
  Json out = Json::array();
  for (std::size_t i = 0; i < x.dim(); ++i) out.push_back(x[i].to_hex());
  return out;
}

Json to_json(const RotationAngle& a) {
  Json out;
  out["expr"] = a.label();
  out["decimal"] = a.decimal();
  Json cf = Json::array();
  for (const auto& q : a.cf()) cf.push_back(q.get_str());
  out["cf"] = cf;
  Json conv = Json::array();
  for (const auto& c : a.convergents()) conv.push_back(Json::array({c.p.get_str(), c.q.get_str()}));
  out["convergents"] = conv;
  out["frac"] = a.frac().to_hex();
  return out;
}

Json to_json(const CocycleSpec& c) {
  Json out;
  out["alpha"] = to_json(c.alpha());
  Json terms = Json::array();
  for (const auto& t : c.terms()) terms.push_back(Json::array({t.q.get_str(), t.a}));
  out["terms"] = terms;
  out["tail_bound"] = static_cast<double>(c.tail_bound());
  out["shift"] = c.shift().to_hex();
  out["badly_approximable"] = c.badly_approximable();
  return out;
}

Json to_json(const FlowSpec& f) {
  Json out;
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, RotationFlow>) {
          out["kind"] = "rotation";
          out["alpha"] = to_json(k.angle);
        } else if constexpr (std::is_same_v<T, SkewFlow>) {
          out["kind"] = "skew";
          out["cocycle"] = to_json(k.cocycle);
        } else if constexpr (std::is_same_v<T, ProductFlow>) {
          out["kind"] = "product";
          Json fs = Json::array();
          for (const auto& g : k.factors) fs.push_back(to_json(g));
          out["factors"] = fs;
        } else {
          out["kind"] = "time_change";
          out["base"] = to_json(*k.base);
          out["a"] = k.a;
          out["dt"] = k.dt;
        }
      },
      f.kind());
  out["dim"] = f.dim();
  return out;
}

Json to_json(const IndependenceVerdict& v) {
  Json out;
  out["status"] = v.dependent() ? "dependent" : "independent_up_to";
  if (v.certificate) {
    Json c = Json::array();
    for (const auto& q : v.certificate->coeffs) c.push_back(q.get_str());
    out["coeffs"] = c;
    out["residual"] = v.certificate->residual.to_sci(6);
    out["residual_log10"] = v.certificate->residual_log10;
  }
  out["max_coeff"] = v.max_coeff.get_str();
  out["digits"] = v.digits;
  out["norm_bound"] = v.norm_bound;
  return out;
}

Json to_json(const CoverageReport& r) {
  Json out;
  out["dim"] = r.dim;
  out["grid"] = r.grid;
  out["steps"] = r.steps;
  out["cells"] = r.cells;
  out["visited"] = r.visited;
  out["coverage"] = r.coverage;
  out["largest_empty_cluster"] = r.largest_empty_cluster;
  return out;
}

Json to_json(const GapReport& r) {
  Json out;
  out["f"] = r.f_id;
  out["sup_f"] = r.sup_f;
  Json pairs = Json::array();
  for (const auto& [a, b] : r.pairs) {
    pairs.push_back({{"scale_a", a.scale},
                     {"a_re", a.value.real()},
                     {"a_im", a.value.imag()},
                     {"scale_b", b.scale},
                     {"b_re", b.value.real()},
                     {"b_im", b.value.imag()}});
  }
  out["pairs"] = pairs;
  out["gap"] = r.gap;
  return out;
}

Json to_json(const RpProbeResult& r) {
  Json out;
  out["status"] = to_string(r.status);
  out["isometric_distance"] = r.isometric_distance;
  if (r.status == RpProbeResult::Status::Positive) {
    out["witness_time"] = r.witness_time;
    out["offset_index"] = r.offset_index;
    out["offset"] = r.offset;
    out["witness_distance"] = r.witness_distance;
  }
  out["offsets_tried"] = r.offsets_tried;
  return out;
}

RotationAngle angle_from_json(const Json& j) {
  if (j.is_string()) return angle_from_expression(j.get<std::string>());
  if (!j.is_object()) throw schema("angle must be a string or an object");
  if (j.contains("expr")) return angle_from_expression(as_string(j.at("expr")));
  std::string decimal = as_string(need(j, "decimal"));
  if (j.contains("cf")) return continued_fraction(decimal, need(j, "cf").size());
  auto point = decimal.find('.');
  int digits = point == std::string::npos ? 0 : static_cast<int>(decimal.size() - point - 1);
  return angle_from_expression(decimal, digits);
}

CocycleSpec cocycle_from_json(const Json& j) {
  RotationAngle alpha = angle_from_json(need(j, "alpha"));
  const Json& terms = need(j, "terms");
  if (terms.is_number_integer()) {
    CoeffRule rule = j.contains("coeff") ? CoeffRule::parse(as_string(j.at("coeff"))) : CoeffRule::unit();
    return build_cocycle(alpha, terms.get<std::size_t>(), rule);
  }
  if (!terms.is_array()) throw schema("cocycle terms must be a count or a list of [q, a]");
  std::vector<std::pair<mpz_class, double>> pairs;
  for (const auto& t : terms) {
    if (!t.is_array() || t.size() != 2 || !t[1].is_number()) throw schema("cocycle term must be [q, a]");
    mpz_class q;
    if (q.set_str(as_string(t[0]), 10) != 0) throw schema("cocycle frequency is not an integer");
    pairs.emplace_back(q, t[1].get<double>());
  }
  long double tail = j.contains("tail_bound") ? j.at("tail_bound").get<double>() : 0.0;
  Frac128 shift = j.contains("shift") ? frac_from_json(j.at("shift")) : Frac128{};
  return make_cocycle(alpha, pairs, tail, shift);
}

FlowSpec flow_from_json(const Json& j) {
  std::string kind = as_string(need(j, "kind"));
  if (kind == "rotation") return FlowSpec::rotation(angle_from_json(need(j, "alpha")));
  if (kind == "skew") {
    if (j.contains("cocycle")) return FlowSpec::skew(cocycle_from_json(j.at("cocycle")));
    Json c = {{"alpha", need(j, "alpha")}, {"terms", j.contains("terms") ? j.at("terms") : Json(3)}};
    if (j.contains("coeff")) c["coeff"] = j.at("coeff");
    return FlowSpec::skew(cocycle_from_json(c));
  }
  if (kind == "product") {
    std::vector<FlowSpec> fs;
    for (const auto& f : need(j, "factors")) fs.push_back(flow_from_json(f));
    return FlowSpec::product(std::move(fs));
  }
  if (kind == "time_change") {
    const Json& base = need(j, "base");
    FlowSpec b = flow_from_json(base.contains("kind") && as_string(base.at("kind")) == "time_change" ? base.at("base") : base);
    FlowSpec sampled = FlowSpec::sampled(b, j.contains("dt") ? as_string(j.at("dt")) : std::string("1"));
    std::string a = j.contains("a") ? as_string(j.at("a")) : std::string("1");
    return a == "1" ? sampled : time_change(sampled, a);
  }
  throw schema("unknown flow kind '" + kind + "'");
}

TorusPoint point_from_json(const Json& j) {
  if (!j.is_array()) throw schema("a point is a list of coordinates");
  std::vector<Frac128> c;
  for (const auto& v : j) c.push_back(frac_from_json(v));
  return TorusPoint(std::move(c));
}

TorusPoint parse_point(const std::string& text) {
  std::vector<Frac128> c;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.size() == 32 && item.find('.') == std::string::npos) {
      c.push_back(Frac128::from_hex(item));
      continue;
    }
    try {
      std::size_t used = 0;
      double v = std::stod(item, &used);
      if (used != item.size() || v < 0 || v >= 1) throw schema("coordinate '" + item + "' outside [0,1)");
      c.push_back(Frac128::from_double(v));
    } catch (const std::logic_error&) {
      throw schema("cannot parse coordinate '" + item + "'");
    }
  }
  if (c.empty()) throw schema("empty point");
  return TorusPoint(std::move(c));
}

}  // namespace distal
