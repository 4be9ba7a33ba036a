#include <algorithm>
#include <cmath>

#include "polyscan/geometry.hpp"

namespace polyscan {

std::vector<Halfspace> SlicingHyperplanes(const Polytope& p_new,
                                          const Polytope& p_existing) {
  const std::optional<Polytope> overlap = Intersect(p_new, p_existing);
  if (!overlap) {
    throw Error(ErrorCode::kEmptyIntersection, "polytopes do not overlap");
  }
  const VertexClassification cls =
      ClassifyIntersectionVertices(p_new, p_existing);
  const int d = p_new.dim();
  std::vector<Point> v3 = UniquePoints(cls.v3);
  std::sort(v3.begin(), v3.end(), LexLess);
  std::vector<Halfspace> out;
  if (static_cast<int>(v3.size()) < d) return out;

  const Point c = Centroid(*overlap);
  auto emit = [&](Eigen::VectorXd normal, const Point& anchor,
                  double min_len) {
    const double len = normal.norm();
    if (len <= min_len) return;  // points not affinely independent
    normal /= len;
    double offset = normal.dot(anchor);
    const double side = normal.dot(c) - offset;
    if (std::abs(side) <= kTolGeom) return;  // orientation undefined
    if (side < 0) {
      normal = -normal;
      offset = -offset;
    }
    out.push_back(Halfspace{normal, offset});
  };

  const std::size_t n = v3.size();
  if (d == 2) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const Point e = v3[j] - v3[i];
        emit(Eigen::Vector2d(e[1], -e[0]), v3[i], kTolGeom);
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
          const Eigen::Vector3d a(v3[i]), b(v3[j]), q(v3[k]);
          emit(Eigen::VectorXd((b - a).cross(q - a)), v3[i],
               1e-6 * (b - a).norm() * (q - a).norm());
        }
      }
    }
  }

  // Keep the first of each group of equal hyperplanes. Equal ones have
  // nearly equal first normal components, so a sorted sweep finds them.
  std::vector<std::size_t> order(out.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out[a].normal[0] < out[b].normal[0];
  });
  std::vector<bool> dropped(out.size(), false);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (out[order[j]].normal[0] - out[order[i]].normal[0] > 1e-9) break;
      if (SameHalfspace(out[order[i]], out[order[j]], 1e-9)) {
        dropped[std::max(order[i], order[j])] = true;
      }
    }
  }
  std::vector<Halfspace> unique;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!dropped[i]) unique.push_back(std::move(out[i]));
  }
  return unique;
}

}  // namespace polyscan
