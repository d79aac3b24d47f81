#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace distal {

using u128 = unsigned __int128;
using i128 = __int128;

// A point of the circle R/Z stored as raw / 2^128. Addition wraps, so group
// arithmetic on the 2^-128 lattice is exact for orbits of any length.
class Frac128 {
 public:
  constexpr Frac128() = default;
  static constexpr Frac128 from_raw(u128 raw) { return Frac128(raw); }
  static constexpr Frac128 from_words(std::uint64_t hi, std::uint64_t lo) {
    return Frac128((u128{hi} << 64) | lo);
  }
  // Reduces `value` mod 1 and truncates onto the lattice.
  static Frac128 from_double(double value);
  // Exact dyadic fraction num / 2^bits, bits <= 128.
  static Frac128 from_dyadic(std::uint64_t num, unsigned bits);
  static Frac128 from_hex(const std::string& hex);

  constexpr u128 raw() const { return raw_; }
  constexpr std::uint64_t hi() const { return static_cast<std::uint64_t>(raw_ >> 64); }
  constexpr std::uint64_t lo() const { return static_cast<std::uint64_t>(raw_); }

  double to_double() const;
  std::string to_hex() const;

  // Multiplication by an integer is exact modulo 1.
  constexpr Frac128 times(u128 k) const { return Frac128(raw_ * k); }
  constexpr Frac128 times_signed(std::int64_t k) const {
    return Frac128(raw_ * static_cast<u128>(static_cast<i128>(k)));
  }

  // floor(value * m) for m < 2^63, computed exactly.
  std::uint64_t cell(std::uint64_t m) const;
  // Circle distance min(v, 1 - v) of this value from 0, as a double.
  double norm() const;

  friend constexpr Frac128 operator+(Frac128 a, Frac128 b) { return Frac128(a.raw_ + b.raw_); }
  friend constexpr Frac128 operator-(Frac128 a, Frac128 b) { return Frac128(a.raw_ - b.raw_); }
  friend constexpr Frac128 operator-(Frac128 a) { return Frac128(u128{0} - a.raw_); }
  constexpr Frac128& operator+=(Frac128 b) {
    raw_ += b.raw_;
    return *this;
  }
  constexpr Frac128& operator-=(Frac128 b) {
    raw_ -= b.raw_;
    return *this;
  }
  friend constexpr bool operator==(Frac128 a, Frac128 b) = default;
  friend constexpr auto operator<=>(Frac128 a, Frac128 b) = default;

 private:
  constexpr explicit Frac128(u128 raw) : raw_(raw) {}
  u128 raw_ = 0;
};

constexpr Frac128 frac_add(Frac128 a, Frac128 b) { return a + b; }

// Circle distance between two points, in [0, 1/2].
double circle_distance(Frac128 a, Frac128 b);

// A point of the d-torus. Equality is exact raw-word equality.
class TorusPoint {
 public:
  TorusPoint() = default;
  explicit TorusPoint(std::size_t dim) : coords_(dim) {}
  explicit TorusPoint(std::vector<Frac128> coords) : coords_(std::move(coords)) {}
  TorusPoint(std::initializer_list<Frac128> coords) : coords_(coords) {}

  static TorusPoint from_doubles(std::span<const double> values);

  std::size_t dim() const { return coords_.size(); }
  Frac128& operator[](std::size_t i) { return coords_[i]; }
  Frac128 operator[](std::size_t i) const { return coords_[i]; }
  std::span<const Frac128> coords() const { return coords_; }
  std::span<Frac128> coords() { return coords_; }

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;

 private:
  std::vector<Frac128> coords_;
};

// Sup-metric over coordinates of the circle distance.
double torus_distance(const TorusPoint& a, const TorusPoint& b);

}  // namespace distal
