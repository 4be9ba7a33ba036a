#include <algorithm>
#include <cmath>

#include "polyscan/solvers.hpp"

namespace polyscan {
namespace {

// Affine minimizer of |sum w_i p_i| with sum w_i = 1 over the corral.
Eigen::VectorXd AffineMinimizer(const std::vector<Point>& corral) {
  const Eigen::Index k = static_cast<Eigen::Index>(corral.size());
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(k + 1, k + 1);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) sys(i, j) = corral[i].dot(corral[j]);
    sys(i, k) = 1.0;
    sys(k, i) = 1.0;
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  rhs[k] = 1.0;
  return sys.completeOrthogonalDecomposition().solve(rhs).head(k);
}

}  // namespace

Point MinNormPoint(std::span<const Point> points) {
  if (points.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "min-norm point of an empty set");
  }
  double scale = 0.0;
  std::size_t first = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    scale = std::max(scale, points[i].squaredNorm());
    if (points[i].squaredNorm() < points[first].squaredNorm()) first = i;
  }
  const double tol = 1e-12 * std::max(scale, 1e-300);

  std::vector<Point> corral{points[first]};
  std::vector<std::size_t> ids{first};
  Eigen::VectorXd weights = Eigen::VectorXd::Ones(1);
  Point x = points[first];

  for (int major = 0; major < 1000; ++major) {
    std::size_t best = 0;
    double best_dot = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double v = x.dot(points[i]);
      if (v < best_dot) best_dot = v, best = i;
    }
    if (x.squaredNorm() - best_dot <= tol ||
        std::find(ids.begin(), ids.end(), best) != ids.end()) {
      break;
    }
    corral.push_back(points[best]);
    ids.push_back(best);
    weights.conservativeResize(weights.size() + 1);
    weights[weights.size() - 1] = 0.0;

    for (int minor = 0; minor < 1000; ++minor) {
      const Eigen::VectorXd alpha = AffineMinimizer(corral);
      if (alpha.minCoeff() > 1e-14) {
        weights = alpha;
        break;
      }
      double theta = 1.0;
      for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        if (alpha[i] <= 1e-14 && weights[i] - alpha[i] > 0) {
          theta = std::min(theta, weights[i] / (weights[i] - alpha[i]));
        }
      }
      weights = weights + theta * (alpha - weights);
      std::vector<Point> kept;
      std::vector<std::size_t> kept_ids;
      Eigen::VectorXd kept_w(weights.size());
      Eigen::Index n = 0;
      for (Eigen::Index i = 0; i < weights.size(); ++i) {
        if (weights[i] > 1e-14) {
          kept.push_back(corral[i]);
          kept_ids.push_back(ids[i]);
          kept_w[n++] = weights[i];
        }
      }
      if (kept.empty()) {  // numerical safeguard
        kept.push_back(corral.back());
        kept_ids.push_back(ids.back());
        kept_w[n++] = 1.0;
      }
      corral = std::move(kept);
      ids = std::move(kept_ids);
      weights = kept_w.head(n) / kept_w.head(n).sum();
    }
    Point next = Point::Zero(x.size());
    for (std::size_t i = 0; i < corral.size(); ++i) next += weights[i] * corral[i];
    if (next.squaredNorm() >= x.squaredNorm() - tol * 1e-3 && major > 0) {
      x = next.squaredNorm() < x.squaredNorm() ? next : x;
      break;
    }
    x = next;
  }
  return x;
}

Point ClosestPointInMetric(std::span<const Point> points,
                           const Ellipsoid& metric) {
  if (points.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no points");
  }
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(metric.shape);
  std::vector<Point> whitened;
  whitened.reserve(points.size());
  for (const Point& p : points) whitened.push_back(ldlt.solve(p - metric.center));
  const Point y = MinNormPoint(whitened);
  return metric.shape * y + metric.center;
}

}  // namespace polyscan
