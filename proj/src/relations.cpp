#include "distal/relations.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "distal/error.hpp"
#include "distal/parallel.hpp"

namespace distal {

void FiniteCarrier::validate() const {
  for (const auto& g : generators) {
    if (g.size() != n) throw Error("relations.not_bijection", "generator has the wrong length");
    std::vector<bool> hit(n, false);
    for (auto v : g) {
      if (v >= n || hit[v]) throw Error("relations.not_bijection", "generator is not a permutation");
      hit[v] = true;
    }
  }
}

FiniteRelation::FiniteRelation(std::shared_ptr<const FiniteCarrier> carrier)
    : carrier_(std::move(carrier)), bits_(carrier_->n * carrier_->n, 0) {
  carrier_->validate();
}

FiniteRelation::FiniteRelation(std::shared_ptr<const FiniteCarrier> carrier,
                               const std::vector<std::pair<std::size_t, std::size_t>>& pairs)
    : FiniteRelation(std::move(carrier)) {
  for (auto [i, j] : pairs) insert(i, j);
}

FiniteRelation FiniteRelation::diagonal(std::shared_ptr<const FiniteCarrier> carrier) {
  FiniteRelation r(std::move(carrier));
  for (std::size_t i = 0; i < r.n(); ++i) r.insert(i, i);
  return r;
}

void FiniteRelation::insert(std::size_t i, std::size_t j) {
  if (i >= n() || j >= n()) throw Error("relations.range", "pair outside the carrier");
  bits_[i * n() + j] = 1;
}

std::size_t FiniteRelation::size() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1)); }

std::vector<std::pair<std::size_t, std::size_t>> FiniteRelation::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n(); ++i)
    for (std::size_t j = 0; j < n(); ++j)
      if (contains(i, j)) out.emplace_back(i, j);
  return out;
}

bool FiniteRelation::subset_of(const FiniteRelation& other) const {
  if (other.n() != n()) return false;
  for (std::size_t k = 0; k < bits_.size(); ++k)
    if (bits_[k] && !other.bits_[k]) return false;
  return true;
}

bool FiniteRelation::is_equivalence() const {
  for (std::size_t i = 0; i < n(); ++i) {
    if (!contains(i, i)) return false;
    for (std::size_t j = 0; j < n(); ++j) {
      if (contains(i, j) != contains(j, i)) return false;
      if (!contains(i, j)) continue;
      for (std::size_t k = 0; k < n(); ++k)
        if (contains(j, k) && !contains(i, k)) return false;
    }
  }
  return true;
}

bool FiniteRelation::is_invariant() const {
  for (const auto& g : carrier_->generators)
    for (std::size_t i = 0; i < n(); ++i)
      for (std::size_t j = 0; j < n(); ++j)
        if (contains(i, j) && !contains(g[i], g[j])) return false;
  return true;
}

std::vector<std::vector<std::size_t>> FiniteRelation::classes() const {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> done(n(), false);
  for (std::size_t i = 0; i < n(); ++i) {
    if (done[i]) continue;
    std::vector<std::size_t> cls;
    for (std::size_t j = 0; j < n(); ++j)
      if (j == i || contains(i, j)) {
        cls.push_back(j);
        done[j] = true;
      }
    out.push_back(std::move(cls));
  }
  return out;
}

FiniteRelation compose(const FiniteRelation& r, const FiniteRelation& s) {
  if (r.n() != s.n()) throw Error("relations.range", "composition of relations on different carriers");
  FiniteRelation out(r.carrier_ptr());
  const std::size_t n = r.n();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!r.contains(i, j)) continue;
      for (std::size_t k = 0; k < n; ++k)
        if (s.contains(j, k)) out.insert(i, k);
    }
  return out;
}

namespace {

// Adds the diagonal, the transposes and the generator images until stable.
void saturate(FiniteRelation& r, bool reflexive) {
  const std::size_t n = r.n();
  if (reflexive)
    for (std::size_t i = 0; i < n; ++i) r.insert(i, i);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (!r.contains(i, j)) continue;
        if (!r.contains(j, i)) {
          r.insert(j, i);
          changed = true;
        }
        for (const auto& g : r.carrier().generators)
          if (!r.contains(g[i], g[j])) {
            r.insert(g[i], g[j]);
            changed = true;
          }
      }
  }
}

}  // namespace

FiniteRelation factor_closure(const FiniteRelation& r, ClosureTrace* trace) {
  FiniteRelation cur = r;
  saturate(cur, true);
  std::size_t rounds = 0;
  while (true) {
    FiniteRelation next = compose(cur, cur);
    saturate(next, true);
    if (next == cur) break;
    cur = std::move(next);
    ++rounds;
  }
  if (trace) trace->rounds = rounds;
  return cur;
}

FiniteRelation invariant_equivalence_union_find(const FiniteRelation& r) {
  const std::size_t n = r.n();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  };
  for (auto [i, j] : r.pairs()) unite(i, j);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& g : r.carrier().generators)
      for (std::size_t a = 0; a < n; ++a)
        if (unite(g[a], g[find(a)])) changed = true;
  }
  FiniteRelation out(r.carrier_ptr());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (find(a) == find(b)) out.insert(a, b);
  return out;
}

FiniteRelation transitive_closure(const FiniteRelation& r) {
  FiniteRelation out = r;
  const std::size_t n = r.n();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (!out.contains(i, k)) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (out.contains(k, j)) out.insert(i, j);
    }
  return out;
}

std::size_t product_index(const std::vector<std::size_t>& sizes, const std::vector<std::size_t>& coords) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) idx = idx * sizes[i] + coords[i];
  return idx;
}

namespace {

std::vector<std::size_t> product_coords(const std::vector<std::size_t>& sizes, std::size_t idx) {
  std::vector<std::size_t> c(sizes.size());
  for (std::size_t i = sizes.size(); i-- > 0;) {
    c[i] = idx % sizes[i];
    idx /= sizes[i];
  }
  return c;
}

}  // namespace

FiniteRelation tensor_relation(const std::vector<FiniteRelation>& qs, std::uint32_t mask,
                               std::shared_ptr<const FiniteCarrier> product) {
  std::vector<std::size_t> sizes;
  for (const auto& q : qs) sizes.push_back(q.n());
  FiniteRelation out(std::move(product));
  for (std::size_t a = 0; a < out.n(); ++a) {
    auto ca = product_coords(sizes, a);
    for (std::size_t b = 0; b < out.n(); ++b) {
      auto cb = product_coords(sizes, b);
      bool ok = true;
      for (std::size_t i = 0; i < qs.size() && ok; ++i) {
        ok = (mask >> i) & 1U ? qs[i].contains(ca[i], cb[i]) : ca[i] == cb[i];
      }
      if (ok) out.insert(a, b);
    }
  }
  return out;
}

ProductCheckReport product_closure_check(const std::vector<FiniteRelation>& qs) {
  if (qs.empty() || qs.size() > 3) throw Error("relations.size", "product check takes 1 to 3 carriers");
  std::size_t total = 1;
  for (const auto& q : qs) {
    if (q.n() == 0 || q.n() > 6) throw Error("relations.size", "carriers must have 1 to 6 points");
    total *= q.n();
  }
  auto product = std::make_shared<FiniteCarrier>();
  product->n = total;

  FiniteRelation generators(product);
  for (std::size_t i = 0; i < qs.size(); ++i) {
    FiniteRelation t = tensor_relation(qs, 1U << i, product);
    for (auto [a, b] : t.pairs()) generators.insert(a, b);
  }
  FiniteRelation closure = transitive_closure(generators);

  ProductCheckReport out;
  out.product_size = total;
  out.closure_size = closure.size();
  out.passes = true;
  for (std::size_t k = 1; k <= qs.size(); ++k) {
    FiniteRelation t = tensor_relation(qs, (1U << k) - 1, product);
    ProductCheckStep step{k, t.size(), t.subset_of(closure)};
    out.passes = out.passes && step.contained;
    out.trace.push_back(step);
  }
  return out;
}

FiniteRelation parse_relation(std::istream& in) {
  auto bad = [](const std::string& why) { return Error("relations.parse", why); };
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      auto pos = line.find_first_not_of(" \t\r");
      if (pos != std::string::npos && line[pos] != '#') return true;
    }
    return false;
  };
  if (!next_line()) throw bad("missing header");
  std::istringstream head(line);
  long long n = -1, k = -1;
  if (!(head >> n >> k) || n <= 0 || k < 0) throw bad("header must be 'n k'");
  auto carrier = std::make_shared<FiniteCarrier>();
  carrier->n = static_cast<std::size_t>(n);
  for (long long g = 0; g < k; ++g) {
    if (!next_line()) throw bad("missing generator line");
    std::istringstream ls(line);
    std::vector<std::size_t> perm;
    long long v;
    while (ls >> v) {
      if (v < 0) throw bad("negative entry in generator");
      perm.push_back(static_cast<std::size_t>(v));
    }
    if (!ls.eof()) throw bad("malformed generator line");
    carrier->generators.push_back(std::move(perm));
  }
  if (!next_line() || line.find("pairs:") == std::string::npos) throw bad("expected 'pairs:'");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  while (next_line()) {
    std::istringstream ls(line);
    long long i, j;
    if (!(ls >> i >> j) || i < 0 || j < 0 || i >= n || j >= n) throw bad("bad pair line '" + line + "'");
    pairs.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  return FiniteRelation(carrier, pairs);
}

std::string format_relation(const FiniteRelation& r) {
  std::ostringstream os;
  os << r.n() << " " << r.carrier().generators.size() << "\n";
  for (const auto& g : r.carrier().generators) {
    for (std::size_t i = 0; i < g.size(); ++i) os << (i ? " " : "") << g[i];
    os << "\n";
  }
  os << "pairs:\n";
  for (auto [i, j] : r.pairs()) os << i << " " << j << "\n";
  return os.str();
}

std::string to_string(RpProbeResult::Status s) {
  switch (s) {
    case RpProbeResult::Status::Positive:
      return "positive";
    case RpProbeResult::Status::RefutedByIsometry:
      return "refuted-by-isometry";
    case RpProbeResult::Status::Inconclusive:
      break;
  }
  return "inconclusive";
}

RpProbeResult rp_probe(const FlowSpec& flow, const TorusPoint& x, const TorusPoint& xp, double eps, double delta,
                       std::uint64_t t_max) {
  if (!(eps > 0) || !(delta > 0)) throw Error("relations.range", "eps and delta must be positive");
  if (x.dim() != flow.dim() || xp.dim() != flow.dim()) {
    throw Error("flows.dimension_mismatch", "probe points do not match the flow");
  }
  const std::size_t d = flow.dim();
  RpProbeResult out;
  auto iso = flow.isometric_coords();
  for (std::size_t i = 0; i < d; ++i)
    if (iso[i]) out.isometric_distance = std::max(out.isometric_distance, circle_distance(x[i], xp[i]));
  if (out.isometric_distance - 2 * delta > eps) {
    out.status = RpProbeResult::Status::RefutedByIsometry;
    return out;
  }

  // Lattice steps in the order 0, +1, -1, +2, -2, ... (units of delta/4).
  static constexpr int kSteps[9] = {0, 1, -1, 2, -2, 3, -3, 4, -4};
  std::size_t count = 1;
  for (std::size_t i = 0; i < d; ++i) count *= 9;
  auto offset_of = [&](std::size_t idx) {
    std::vector<double> off(d);
    for (std::size_t i = d; i-- > 0;) {
      off[i] = kSteps[idx % 9] * delta / 4.0;
      idx /= 9;
    }
    return off;
  };

  std::vector<TorusPoint> reference;
  reference.reserve(t_max);
  {
    OrbitStream s(flow, x);
    for (std::uint64_t t = 1; t <= t_max; ++t) {
      s.advance();
      reference.push_back(s.current());
    }
  }

  const std::size_t batch = std::max<std::size_t>(1, worker_count());
  for (std::size_t start = 0; start < count; start += batch) {
    std::size_t end = std::min(count, start + batch);
    std::vector<std::uint64_t> hit(end - start, 0);
    std::vector<double> hit_dist(end - start, 0);
    parallel_chunks(end - start, [&](std::size_t b, std::size_t e) {
      for (std::size_t k = b; k < e; ++k) {
        auto off = offset_of(start + k);
        TorusPoint y = xp;
        for (std::size_t i = 0; i < d; ++i) y[i] = y[i] + Frac128::from_double(off[i] - std::floor(off[i]));
        OrbitStream s(flow, y);
        for (std::uint64_t t = 1; t <= t_max; ++t) {
          s.advance();
          double dist = torus_distance(reference[t - 1], s.current());
          if (dist < eps) {
            hit[k] = t;
            hit_dist[k] = dist;
            break;
          }
        }
      }
    });
    for (std::size_t k = 0; k < hit.size(); ++k) {
      if (hit[k] == 0) continue;
      out.status = RpProbeResult::Status::Positive;
      out.witness_time = hit[k];
      out.witness_distance = hit_dist[k];
      out.offset_index = start + k;
      out.offset = offset_of(start + k);
      out.offsets_tried = start + k + 1;
      return out;
    }
    out.offsets_tried = end;
  }
  return out;
}

}  // namespace distal
