#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace equimetric {

using Point = std::size_t;    // index into the sampled space
using Element = std::size_t;  // index into a finite group
using Orbit = std::size_t;    // index into the orbit space

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Dense square table of reals, row-major.
class DistanceTable {
 public:
  DistanceTable() = default;
  explicit DistanceTable(std::size_t n, double fill = 0.0) : n_(n), values_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }

  double& operator()(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }

  std::span<const double> row(std::size_t i) const { return {values_.data() + i * n_, n_}; }
  const std::vector<double>& values() const noexcept { return values_; }

  bool operator==(const DistanceTable&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// Fixed-universe bitset over points. Member iteration is in ascending order.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

  static PointSet singleton(std::size_t universe, Point p) {
    PointSet s(universe);
    s.insert(p);
    return s;
  }

  std::size_t universe() const noexcept { return universe_; }

  bool contains(Point p) const { return (words_[p / 64] >> (p % 64)) & 1U; }
  void insert(Point p) { words_[p / 64] |= std::uint64_t{1} << (p % 64); }
  void erase(Point p) { words_[p / 64] &= ~(std::uint64_t{1} << (p % 64)); }

  std::size_t size() const;
  bool empty() const;
  bool intersects(const PointSet& other) const;
  bool is_subset_of(const PointSet& other) const;
  PointSet intersection(const PointSet& other) const;
  PointSet union_with(const PointSet& other) const;
  std::vector<Point> members() const;

  bool operator==(const PointSet&) const = default;

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace equimetric
