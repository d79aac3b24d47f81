#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "distal/angle.hpp"
#include "distal/cocycle.hpp"
#include "distal/torus.hpp"

namespace distal {

class FlowSpec;

struct RotationFlow {
  RotationAngle angle;
};

struct SkewFlow {
  CocycleSpec cocycle;  // carries the base angle
};

struct ProductFlow {
  std::vector<FlowSpec> factors;
};

// An R-flow t -> x + t*omega on a torus (omega taken from the base rotation
// angles) observed at times k*dt after reparametrizing time by a > 0, so one
// step rotates by a*omega*dt. `a` and `dt` are kept as exact expressions.
struct TimeChangeFlow {
  std::shared_ptr<const FlowSpec> base;
  std::string a;
  std::string dt;
  std::vector<RotationAngle> sampled;  // effective per-step angles
};

// One coordinate update of the compiled orbit map.
struct FlowBlock {
  enum class Kind { Rotation, Skew };
  Kind kind = Kind::Rotation;
  std::size_t coord = 0;  // rotated coordinate; the fiber is coord + 1 for skew blocks
  Frac128 increment;
  const CocycleSpec* cocycle = nullptr;
};

class FlowSpec {
 public:
  using Kind = std::variant<RotationFlow, SkewFlow, ProductFlow, TimeChangeFlow>;

  static FlowSpec rotation(RotationAngle angle);
  static FlowSpec skew(CocycleSpec cocycle);
  static FlowSpec product(std::vector<FlowSpec> factors);
  // Declares `base` (rotations or products of rotations, angles read as
  // rates) as an R-flow sampled with step dt.
  static FlowSpec sampled(const FlowSpec& base, const std::string& dt);

  const Kind& kind() const { return node_->kind; }
  std::size_t dim() const { return node_->dim; }
  bool is_sampled_rflow() const { return std::holds_alternative<TimeChangeFlow>(node_->kind); }
  const std::vector<FlowBlock>& blocks() const { return node_->blocks; }
  std::string describe() const;

  // Coordinates along which the map is an isometry of the circle.
  std::vector<bool> isometric_coords() const;

  // For products: the factors with their coordinate offsets; otherwise the flow itself at offset 0.
  std::vector<std::pair<FlowSpec, std::size_t>> factors() const;

 private:
  struct Node {
    Kind kind;
    std::size_t dim = 0;
    std::vector<FlowBlock> blocks;
  };
  explicit FlowSpec(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static FlowSpec from_kind(Kind kind);
  friend FlowSpec time_change(const FlowSpec& flow, const std::string& a);

  std::shared_ptr<const Node> node_;
};

// Reparametrizes a sampled R-flow by a > 0. Errors: flows.nonpositive_time_change,
// flows.not_sampled.
FlowSpec time_change(const FlowSpec& flow, const std::string& a);

// One application of the map. Errors: flows.dimension_mismatch.
TorusPoint step(const FlowSpec& flow, const TorusPoint& x);
TorusPoint step_inverse(const FlowSpec& flow, const TorusPoint& x);

// Exact n-fold iterate; rotation-only flows jump directly by n*alpha.
TorusPoint advance(const FlowSpec& flow, const TorusPoint& x, std::uint64_t n);

// Restriction of a point to the coordinates [offset, offset + dim).
TorusPoint project(const TorusPoint& x, std::size_t offset, std::size_t dim);

// Sequential orbit generator. Skew blocks cache G at the current point, which
// reproduces step() bit for bit at half the trigonometric cost.
class OrbitStream {
 public:
  OrbitStream(FlowSpec flow, TorusPoint x0);

  const TorusPoint& current() const { return current_; }
  std::uint64_t step_index() const { return index_; }
  const FlowSpec& flow() const { return flow_; }
  void advance();
  void advance(std::uint64_t n);

 private:
  FlowSpec flow_;
  TorusPoint current_;
  std::uint64_t index_ = 0;
  std::vector<double> potentials_;
};

struct CoverageReport {
  std::size_t dim = 0;
  std::uint64_t grid = 0;
  std::uint64_t steps = 0;
  std::uint64_t cells = 0;
  std::uint64_t visited = 0;
  std::uint64_t largest_empty_cluster = 0;
  double coverage = 0;
};

// Fraction of the m^d grid cells met by the first N orbit points, plus the
// largest face-connected cluster of empty cells (with wrap-around). This is
// evidence for density of the orbit, never a certificate.
CoverageReport density_probe(const FlowSpec& flow, const TorusPoint& x0, std::uint64_t steps, std::uint64_t grid);

// Flat cell index of x in the m^d grid (row-major, first coordinate slowest).
std::uint64_t cell_index(const TorusPoint& x, std::uint64_t grid);

}  // namespace distal
