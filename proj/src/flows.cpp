#include "distal/flows.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "distal/error.hpp"

namespace distal {

namespace {

void check_dim(const FlowSpec& flow, const TorusPoint& x) {
  if (x.dim() != flow.dim()) {
    throw Error("flows.dimension_mismatch", "point has dimension " + std::to_string(x.dim()) + ", flow has " +
                                                std::to_string(flow.dim()));
  }
}

Frac128 quantize_turns(double v) {
  // v is a real number of turns; reduce to [0,1) before quantizing.
  double f = v - std::floor(v);
  return Frac128::from_double(f);
}

void collect_rates(const FlowSpec& f, std::vector<RotationAngle>& out) {
  if (const auto* r = std::get_if<RotationFlow>(&f.kind())) {
    out.push_back(r->angle);
  } else if (const auto* p = std::get_if<ProductFlow>(&f.kind())) {
    for (const auto& g : p->factors) collect_rates(g, out);
  } else {
    throw Error("flows.not_sampled", "only rotations and products of rotations can be sampled as R-flows");
  }
}

}  // namespace

FlowSpec FlowSpec::from_kind(Kind kind) {
  auto node = std::make_shared<Node>();
  node->kind = std::move(kind);
  auto& blocks = node->blocks;
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, RotationFlow>) {
          node->dim = 1;
          blocks.push_back({FlowBlock::Kind::Rotation, 0, k.angle.frac(), nullptr});
        } else if constexpr (std::is_same_v<T, SkewFlow>) {
          node->dim = 2;
          blocks.push_back({FlowBlock::Kind::Skew, 0, k.cocycle.alpha().frac(), &k.cocycle});
        } else if constexpr (std::is_same_v<T, ProductFlow>) {
          std::size_t offset = 0;
          for (const auto& f : k.factors) {
            for (FlowBlock b : f.blocks()) {
              b.coord += offset;
              blocks.push_back(b);
            }
            offset += f.dim();
          }
          node->dim = offset;
        } else {
          std::size_t i = 0;
          for (const auto& angle : k.sampled) blocks.push_back({FlowBlock::Kind::Rotation, i++, angle.frac(), nullptr});
          node->dim = k.base->dim();
        }
      },
      node->kind);
  return FlowSpec(std::move(node));
}

FlowSpec FlowSpec::rotation(RotationAngle angle) { return from_kind(RotationFlow{std::move(angle)}); }

FlowSpec FlowSpec::skew(CocycleSpec cocycle) { return from_kind(SkewFlow{std::move(cocycle)}); }

FlowSpec FlowSpec::product(std::vector<FlowSpec> factors) {
  if (factors.empty()) throw Error("flows.empty_product", "a product needs at least one factor");
  return from_kind(ProductFlow{std::move(factors)});
}

FlowSpec FlowSpec::sampled(const FlowSpec& base, const std::string& dt) {
  if (evaluate_expression(dt, 60).sign() <= 0) throw Error("flows.nonpositive_step", "time step must be positive");
  std::vector<RotationAngle> rates;
  collect_rates(base, rates);
  TimeChangeFlow tc{std::make_shared<const FlowSpec>(base), "1", dt, {}};
  for (const auto& r : rates) tc.sampled.push_back(scaled_angle(r, "(" + dt + ")"));
  return from_kind(std::move(tc));
}

FlowSpec time_change(const FlowSpec& flow, const std::string& a) {
  const auto* tc = std::get_if<TimeChangeFlow>(&flow.kind());
  if (!tc) throw Error("flows.not_sampled", "time change needs a sampled R-flow");
  if (evaluate_expression(a, 60).sign() <= 0) {
    throw Error("flows.nonpositive_time_change", "time change factor must be positive, got '" + a + "'");
  }
  std::string total = tc->a == "1" ? a : "(" + tc->a + ")*(" + a + ")";
  std::vector<RotationAngle> rates;
  collect_rates(*tc->base, rates);
  TimeChangeFlow out{tc->base, total, tc->dt, {}};
  for (const auto& r : rates) out.sampled.push_back(scaled_angle(r, "(" + total + ")*(" + tc->dt + ")"));
  return FlowSpec::from_kind(std::move(out));
}

std::string FlowSpec::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, RotationFlow>) {
          os << "Rotation(" << k.angle.label() << ")";
        } else if constexpr (std::is_same_v<T, SkewFlow>) {
          os << "Skew(" << k.cocycle.alpha().label() << ", q=[";
          for (std::size_t i = 0; i < k.cocycle.terms().size(); ++i)
            os << (i ? "," : "") << k.cocycle.terms()[i].q.get_str();
          os << "])";
        } else if constexpr (std::is_same_v<T, ProductFlow>) {
          os << "Product(";
          for (std::size_t i = 0; i < k.factors.size(); ++i) os << (i ? ", " : "") << k.factors[i].describe();
          os << ")";
        } else {
          os << "TimeChange(" << k.base->describe() << ", a=" << k.a << ", dt=" << k.dt << ")";
        }
      },
      kind());
  return os.str();
}

std::vector<bool> FlowSpec::isometric_coords() const {
  std::vector<bool> out(dim(), true);
  for (const auto& b : blocks())
    if (b.kind == FlowBlock::Kind::Skew) out[b.coord + 1] = false;
  return out;
}

std::vector<std::pair<FlowSpec, std::size_t>> FlowSpec::factors() const {
  std::vector<std::pair<FlowSpec, std::size_t>> out;
  if (const auto* p = std::get_if<ProductFlow>(&kind())) {
    std::size_t offset = 0;
    for (const auto& f : p->factors) {
      out.emplace_back(f, offset);
      offset += f.dim();
    }
  } else {
    out.emplace_back(*this, 0);
  }
  return out;
}

TorusPoint step(const FlowSpec& flow, const TorusPoint& x) {
  check_dim(flow, x);
  std::vector<Frac128> c(x.coords().begin(), x.coords().end());
  for (const auto& b : flow.blocks()) {
    if (b.kind == FlowBlock::Kind::Skew) c[b.coord + 1] = c[b.coord + 1] + quantize_turns(b.cocycle->phi(c[b.coord]));
    c[b.coord] = c[b.coord] + b.increment;
  }
  return TorusPoint(std::move(c));
}

TorusPoint step_inverse(const FlowSpec& flow, const TorusPoint& x) {
  check_dim(flow, x);
  std::vector<Frac128> c(x.coords().begin(), x.coords().end());
  for (const auto& b : flow.blocks()) {
    c[b.coord] = c[b.coord] - b.increment;
    if (b.kind == FlowBlock::Kind::Skew) c[b.coord + 1] = c[b.coord + 1] - quantize_turns(b.cocycle->phi(c[b.coord]));
  }
  return TorusPoint(std::move(c));
}

TorusPoint advance(const FlowSpec& flow, const TorusPoint& x, std::uint64_t n) {
  check_dim(flow, x);
  bool isometric = std::all_of(flow.blocks().begin(), flow.blocks().end(),
                               [](const FlowBlock& b) { return b.kind == FlowBlock::Kind::Rotation; });
  if (isometric) {
    std::vector<Frac128> c(x.coords().begin(), x.coords().end());
    for (const auto& b : flow.blocks()) c[b.coord] = c[b.coord] + b.increment.times(n);
    return TorusPoint(std::move(c));
  }
  OrbitStream s(flow, x);
  s.advance(n);
  return s.current();
}

TorusPoint project(const TorusPoint& x, std::size_t offset, std::size_t dim) {
  if (offset + dim > x.dim()) throw Error("flows.dimension_mismatch", "projection out of range");
  return TorusPoint(std::vector<Frac128>(x.coords().begin() + static_cast<std::ptrdiff_t>(offset),
                                         x.coords().begin() + static_cast<std::ptrdiff_t>(offset + dim)));
}

OrbitStream::OrbitStream(FlowSpec flow, TorusPoint x0) : flow_(std::move(flow)), current_(std::move(x0)) {
  check_dim(flow_, current_);
  for (const auto& b : flow_.blocks())
    potentials_.push_back(b.kind == FlowBlock::Kind::Skew ? b.cocycle->potential(current_[b.coord]) : 0.0);
}

void OrbitStream::advance() {
  const auto& blocks = flow_.blocks();
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    Frac128 next = current_[b.coord] + b.increment;
    if (b.kind == FlowBlock::Kind::Skew) {
      double g_next = b.cocycle->potential(next);
      double v = g_next - potentials_[i];
      Frac128 s = b.cocycle->shift();
      if (s != Frac128{}) {
        double sd = s.to_double();
        v += sd > 0.5 ? sd - 1.0 : sd;
      }
      current_[b.coord + 1] = current_[b.coord + 1] + quantize_turns(v);
      potentials_[i] = g_next;
    }
    current_[b.coord] = next;
  }
  ++index_;
}

void OrbitStream::advance(std::uint64_t n) {
  for (std::uint64_t i = 0; i < n; ++i) advance();
}

std::uint64_t cell_index(const TorusPoint& x, std::uint64_t grid) {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < x.dim(); ++i) idx = idx * grid + x[i].cell(grid);
  return idx;
}

CoverageReport density_probe(const FlowSpec& flow, const TorusPoint& x0, std::uint64_t steps, std::uint64_t grid) {
  check_dim(flow, x0);
  if (grid == 0) throw Error("flows.range", "grid resolution must be positive");
  CoverageReport r;
  r.dim = flow.dim();
  r.grid = grid;
  r.steps = steps;
  r.cells = 1;
  for (std::size_t i = 0; i < r.dim; ++i) {
    if (r.cells > (std::uint64_t{1} << 32) / grid) throw Error("flows.range", "grid too large");
    r.cells *= grid;
  }
  std::vector<std::uint8_t> seen(r.cells, 0);
  OrbitStream s(flow, x0);
  for (std::uint64_t n = 0; n < steps; ++n) {
    auto idx = cell_index(s.current(), grid);
    r.visited += seen[idx] == 0;
    seen[idx] = 1;
    s.advance();
  }
  r.coverage = static_cast<double>(r.visited) / static_cast<double>(r.cells);

  // Largest face-connected empty cluster on the periodic grid.
  std::vector<std::uint64_t> stride(r.dim, 1);
  for (std::size_t i = r.dim; i-- > 1;) stride[i - 1] = stride[i] * grid;
  std::deque<std::uint64_t> queue;
  for (std::uint64_t start = 0; start < r.cells; ++start) {
    if (seen[start]) continue;
    std::uint64_t size = 0;
    seen[start] = 2;
    queue.push_back(start);
    while (!queue.empty()) {
      std::uint64_t c = queue.front();
      queue.pop_front();
      ++size;
      for (std::size_t i = 0; i < r.dim; ++i) {
        std::uint64_t digit = (c / stride[i]) % grid;
        std::uint64_t base = c - digit * stride[i];
        for (std::uint64_t nd : {(digit + 1) % grid, (digit + grid - 1) % grid}) {
          std::uint64_t nb = base + nd * stride[i];
          if (!seen[nb]) {
            seen[nb] = 2;
            queue.push_back(nb);
          }
        }
      }
    }
    r.largest_empty_cluster = std::max(r.largest_empty_cluster, size);
  }
  return r;
}

}  // namespace distal
