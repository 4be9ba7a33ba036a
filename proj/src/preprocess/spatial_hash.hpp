#pragma once

#include <array>
#include <cmath>
#include <unordered_map>
#include <vector>

#include "polyscan/core.hpp"

namespace polyscan::detail {

// Uniform grid bucket index over a subset of points, for radius queries.
class SpatialHash {
 public:
  SpatialHash(const std::vector<Point>& points, const std::vector<std::size_t>& ids,
              double cell)
      : points_(points), cell_(cell > 0 ? cell : 1.0) {
    for (std::size_t id : ids) buckets_[Key(Cell(points_[id]))].push_back(id);
  }

  // Ids within `radius` of x (radius <= cell), in insertion order per bucket.
  template <typename Fn>
  void ForEachNear(const Point& x, Fn&& fn) const {
    const std::array<long, 3> c = Cell(x);
    const int d = static_cast<int>(x.size());
    const int dz = d == 3 ? 1 : 0;
    for (long i = -1; i <= 1; ++i) {
      for (long j = -1; j <= 1; ++j) {
        for (long k = -dz; k <= dz; ++k) {
          auto it = buckets_.find(Key({c[0] + i, c[1] + j, c[2] + k}));
          if (it == buckets_.end()) continue;
          for (std::size_t id : it->second) fn(id);
        }
      }
    }
  }

 private:
  std::array<long, 3> Cell(const Point& x) const {
    std::array<long, 3> c{0, 0, 0};
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      c[k] = static_cast<long>(std::floor(x[k] / cell_));
    }
    return c;
  }
  static std::uint64_t Key(const std::array<long, 3>& c) {
    std::uint64_t h = 1469598103934665603ull;
    for (long v : c) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }

  const std::vector<Point>& points_;
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

}  // namespace polyscan::detail
