#include "distal/torus.hpp"

#include <algorithm>
#include <cmath>

#include "distal/error.hpp"

namespace distal {

Frac128 Frac128::from_double(double value) {
  double f = value - std::floor(value);
  if (!(f < 1.0) || !(f >= 0.0)) f = 0.0;
  double scaled = std::ldexp(f, 64);
  auto hi = static_cast<std::uint64_t>(scaled);
  auto lo = static_cast<std::uint64_t>(std::ldexp(scaled - static_cast<double>(hi), 64));
  return from_words(hi, lo);
}

Frac128 Frac128::from_dyadic(std::uint64_t num, unsigned bits) {
  if (bits > 128) throw Error("torus.range", "dyadic exponent above 128");
  return Frac128(static_cast<u128>(num) << (128 - bits));
}

Frac128 Frac128::from_hex(const std::string& hex) {
  if (hex.size() != 32) throw Error("torus.parse", "Frac128 hex must have 32 digits: " + hex);
  u128 raw = 0;
  for (char c : hex) {
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw Error("torus.parse", "bad hex digit in " + hex);
    raw = (raw << 4) | static_cast<u128>(v);
  }
  return Frac128(raw);
}

double Frac128::to_double() const {
  return std::ldexp(static_cast<double>(hi()), -64) + std::ldexp(static_cast<double>(lo()), -128);
}

std::string Frac128::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(32, '0');
  u128 v = raw_;
  for (int i = 31; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[static_cast<int>(v & 0xf)];
    v >>= 4;
  }
  return out;
}

std::uint64_t Frac128::cell(std::uint64_t m) const {
  u128 high = static_cast<u128>(hi()) * m;
  u128 low = (static_cast<u128>(lo()) * m) >> 64;
  return static_cast<std::uint64_t>((high + low) >> 64);
}

double Frac128::norm() const {
  u128 other = u128{0} - raw_;
  return Frac128(std::min(raw_, other)).to_double();
}

double circle_distance(Frac128 a, Frac128 b) { return (a - b).norm(); }

TorusPoint TorusPoint::from_doubles(std::span<const double> values) {
  std::vector<Frac128> coords;
  coords.reserve(values.size());
  for (double v : values) coords.push_back(Frac128::from_double(v));
  return TorusPoint(std::move(coords));
}

double torus_distance(const TorusPoint& a, const TorusPoint& b) {
  if (a.dim() != b.dim()) throw Error("flows.dimension_mismatch", "torus points of different dimension");
  double d = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) d = std::max(d, circle_distance(a[i], b[i]));
  return d;
}

}  // namespace distal
