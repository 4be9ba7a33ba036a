#include "polyscan/iris.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace polyscan {

void IrisConfig::Validate() const {
  if (!(vol_growth_tol > 0 && vol_growth_tol < 1)) {
    throw Error(ErrorCode::kInvalidArgument, "vol_growth_tol must be in (0, 1)");
  }
  if (max_iters < 1) throw Error(ErrorCode::kInvalidArgument, "max_iters must be >= 1");
  if (!(seed_ball_radius > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "seed_ball_radius must be > 0");
  }
}

Polytope BoundingBox(const PointCloud& cloud, double margin) {
  if (cloud.points.empty()) throw Error(ErrorCode::kEmptyCloud, "no points");
  Point lo = cloud.points.front();
  Point hi = lo;
  for (const Point& x : cloud.points) {
    lo = lo.cwiseMin(x);
    hi = hi.cwiseMax(x);
  }
  const Point pad = Point::Constant(lo.size(), margin);
  return Polytope::Box(lo - pad, hi + pad);
}

std::vector<Halfspace> SeparatingHyperplanes(
    std::span<const std::vector<Point>> obstacles, const Ellipsoid& metric) {
  struct Candidate {
    std::size_t index;
    Point closest;
    double distance;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    if (obstacles[i].empty()) continue;
    const Point q = ClosestPointInMetric(obstacles[i], metric);
    const double dist = metric.MetricDistance(q);
    if (!(dist > 1e-12)) {
      throw Error(ErrorCode::kSeedInObstacle, "obstacle contains the seed");
    }
    candidates.push_back({i, q, dist});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.distance < b.distance;
                   });

  const Eigen::MatrixXd inv_sq =
      (metric.shape * metric.shape.transpose()).inverse();
  std::vector<Halfspace> out;
  for (const Candidate& c : candidates) {
    const std::vector<Point>& verts = obstacles[c.index];
    const bool excluded = std::any_of(out.begin(), out.end(), [&](const Halfspace& h) {
      return std::all_of(verts.begin(), verts.end(),
                         [&](const Point& v) { return h.Violation(v) >= 0.0; });
    });
    if (excluded) continue;
    Eigen::VectorXd a = inv_sq * (c.closest - metric.center);
    a.normalize();
    // Tangent plane through the closest point, pulled back to the nearest
    // vertex so rounding can never leave a vertex on the inner side.
    double b = a.dot(c.closest);
    for (const Point& v : verts) b = std::min(b, a.dot(v));
    if (!(a.dot(metric.center) < b)) {
      throw Error(ErrorCode::kSeedInObstacle, "obstacle touches the seed");
    }
    out.push_back(Halfspace{a, b});
  }
  return out;
}

std::vector<Halfspace> SeparatingHyperplanes(std::span<const Polytope> obstacles,
                                             const Ellipsoid& metric) {
  std::vector<std::vector<Point>> verts;
  verts.reserve(obstacles.size());
  for (const Polytope& o : obstacles) {
    if (o.Contains(metric.center, 0.0)) {
      throw Error(ErrorCode::kSeedInObstacle, "obstacle contains the seed");
    }
    verts.push_back(o.vertices());
  }
  return SeparatingHyperplanes(verts, metric);
}

IrisResult InflateRegion(std::span<const Polytope> obstacles, const Point& seed,
                         const Polytope& bounds, const IrisConfig& cfg) {
  cfg.Validate();
  if (!bounds.ContainsInterior(seed)) {
    throw Error(ErrorCode::kSeedOutsideBounds, "seed is not inside the bounds");
  }
  for (const Polytope& o : obstacles) {
    if (o.Contains(seed, 0.0)) {
      throw Error(ErrorCode::kSeedInObstacle, "seed lies in an obstacle");
    }
  }

  Ellipsoid ellipsoid = Ellipsoid::Ball(seed, cfg.seed_ball_radius);
  std::optional<IrisResult> best;
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    std::vector<Halfspace> rows = SeparatingHyperplanes(obstacles, ellipsoid);
    rows.insert(rows.end(), bounds.halfspaces().begin(), bounds.halfspaces().end());
    std::optional<Polytope> region = Polytope::FromHalfspaces(std::move(rows));
    if (!region) break;  // the center sits on a face; nothing to grow
    Ellipsoid next = MaxVolumeEllipsoid(*region);
    const double logdet = next.LogDet();
    if (!best) {
      best = IrisResult{*region, next, {logdet}, iter};
      ellipsoid = next;
      continue;
    }
    const double prev = best->logdet_history.back();
    // The inscribed ellipsoid must not shrink; if it would, keep the last
    // accepted pair.
    if (!(logdet >= prev)) break;
    const double growth = std::expm1(logdet - prev);
    best->region = *region;
    best->ellipsoid = next;
    best->logdet_history.push_back(logdet);
    best->iterations = iter;
    ellipsoid = next;
    if (growth < cfg.vol_growth_tol) break;
  }
  if (!best) {
    throw Error(ErrorCode::kSeedInObstacle, "no free region around the seed");
  }
  return *best;
}

}  // namespace polyscan
