#include "polyscan/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "spatial_hash.hpp"

namespace polyscan {

void PreprocessParams::Validate(int d) const {
  auto fail = [](const char* what) {
    throw Error(ErrorCode::kInvalidArgument, what);
  };
  if (!(d_max > 0)) fail("d_max must be > 0");
  if (n1 < 1 || n2 < 1 || n3 < 1) fail("n1, n2, n3 must be positive");
  if (n3 < d + 1) fail("n3 must be at least d + 1");
  if (!(eps1 > 0)) fail("eps1 must be > 0");
  if (!(eps2 > 0)) fail("eps2 must be > 0");
  if (!(neighbor_radius > 0)) fail("neighbor_radius must be > 0");
  if (!(slab_pad > 0)) fail("slab_pad must be > 0");
}

PointCloud CropPointCloud(const PointCloud& cloud, double d_max) {
  PointCloud out{{}, cloud.origin};
  for (const Point& x : cloud.points) {
    if ((x - cloud.origin).norm() <= d_max) out.points.push_back(x);
  }
  return out;
}

Point RandomSelect(const PointCloud& cloud, std::mt19937_64& rng) {
  if (cloud.points.empty()) throw Error(ErrorCode::kEmptyCloud, "no points left");
  std::uniform_int_distribution<std::size_t> pick(0, cloud.points.size() - 1);
  return cloud.points[pick(rng)];
}

std::vector<Point> GetNeighbors(const PointCloud& cloud, const Point& seed,
                                double radius) {
  std::vector<Point> out;
  for (const Point& x : cloud.points) {
    if ((x - seed).norm() <= radius) out.push_back(x);
  }
  return out;
}

PlaneFit Regression(std::span<const Point> points) {
  if (points.empty()) throw Error(ErrorCode::kDegenerateInput, "no points");
  const int d = static_cast<int>(points.front().size());
  if (static_cast<int>(points.size()) < d) {
    throw Error(ErrorCode::kDegenerateInput, "fewer than d points");
  }
  Point mean = Point::Zero(d);
  for (const Point& p : points) mean += p;
  mean /= static_cast<double>(points.size());
  Eigen::MatrixXd centered(points.size(), d);
  for (std::size_t i = 0; i < points.size(); ++i) {
    centered.row(static_cast<Eigen::Index>(i)) = (points[i] - mean).transpose();
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double tol = 1e-12 * std::max(1.0, sv[0]);
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) rank += sv[k] > tol ? 1 : 0;
  if (rank == 0) throw Error(ErrorCode::kDegenerateInput, "coincident points");

  PlaneFit fit;
  fit.normal = svd.matrixV().col(d - 1);
  for (int k = 0; k < d; ++k) {
    if (std::abs(fit.normal[k]) > 1e-12) {
      if (fit.normal[k] < 0) fit.normal = -fit.normal;
      break;
    }
  }
  fit.offset = -fit.normal.dot(mean);
  fit.degenerate = rank < d - 1;
  return fit;
}

namespace {

// BFS over slab points of `points[ids]`, starting from `seed`.
std::vector<std::size_t> GrowIndices(const std::vector<Point>& points,
                                     const std::vector<std::size_t>& ids,
                                     const Point& seed,
                                     const Eigen::VectorXd& normal, double offset,
                                     double eps1, double gap) {
  std::vector<std::size_t> slab;
  for (std::size_t id : ids) {
    if (std::abs(normal.dot(points[id]) + offset) < eps1) slab.push_back(id);
  }
  std::vector<std::size_t> found;
  std::vector<char> taken(points.size(), 0);
  std::deque<Point> frontier{seed};
  // The seed itself belongs to the set when it is a cloud point.
  for (std::size_t id : ids) {
    if (points[id] == seed) {
      found.push_back(id);
      taken[id] = 1;
      break;
    }
  }
  if (gap > 0) {
    const detail::SpatialHash hash(points, slab, gap);
    while (!frontier.empty()) {
      const Point m = frontier.front();
      frontier.pop_front();
      hash.ForEachNear(m, [&](std::size_t id) {
        if (taken[id] || (points[id] - m).norm() >= gap) return;
        taken[id] = 1;
        found.push_back(id);
        frontier.push_back(points[id]);
      });
    }
  }
  std::sort(found.begin(), found.end());
  return found;
}

}  // namespace

std::vector<Point> GrowPlane(const PointCloud& cloud, const Point& seed,
                             const Eigen::VectorXd& normal, double offset,
                             double eps1, double gap) {
  std::vector<std::size_t> ids(cloud.points.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  std::vector<Point> out;
  for (std::size_t id :
       GrowIndices(cloud.points, ids, seed, normal, offset, eps1, gap)) {
    out.push_back(cloud.points[id]);
  }
  return out;
}

PreprocessReport PreprocessCloud(const PointCloud& cloud,
                                 const PreprocessParams& params) {
  PreprocessReport report;
  report.cropped = CropPointCloud(cloud, params.d_max);
  if (report.cropped.points.empty()) return report;
  const std::vector<Point>& pts = report.cropped.points;
  params.Validate(static_cast<int>(pts.front().size()));

  std::vector<std::size_t> remaining(pts.size());
  for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;
  std::mt19937_64 rng(params.rng_seed);
  int failures = 0;

  while (static_cast<int>(remaining.size()) >= params.n1 && failures < params.n2) {
    ++report.iterations;
    std::uniform_int_distribution<std::size_t> pick(0, remaining.size() - 1);
    const Point seed = pts[remaining[pick(rng)]];

    const detail::SpatialHash hash(pts, remaining, params.neighbor_radius);
    std::vector<Point> neighborhood;
    std::vector<std::size_t> near_ids;
    hash.ForEachNear(seed, [&](std::size_t id) {
      if ((pts[id] - seed).norm() <= params.neighbor_radius) near_ids.push_back(id);
    });
    std::sort(near_ids.begin(), near_ids.end());
    near_ids.erase(std::unique(near_ids.begin(), near_ids.end()), near_ids.end());
    for (std::size_t id : near_ids) neighborhood.push_back(pts[id]);

    std::vector<std::size_t> plane;
    try {
      const PlaneFit fit = Regression(neighborhood);
      const double gap = params.eps2 * (report.cropped.origin - seed).norm();
      plane = GrowIndices(pts, remaining, seed, fit.normal, fit.offset,
                          params.eps1, gap);
    } catch (const Error&) {
      plane.clear();  // too few neighbors to fit a plane
    }

    if (static_cast<int>(plane.size()) > params.n3) {
      std::vector<Point> members;
      for (std::size_t id : plane) members.push_back(pts[id]);
      try {
        report.obstacles.push_back(HullOrSlab(members, params.slab_pad));
        report.members.push_back(plane);
      } catch (const Error&) {
        // Coincident returns: nothing to wall off, but still consume them.
      }
      std::vector<std::size_t> rest;
      std::set_difference(remaining.begin(), remaining.end(), plane.begin(),
                          plane.end(), std::back_inserter(rest));
      remaining = std::move(rest);
      failures = 0;
    } else {
      ++failures;
    }
  }
  return report;
}

}  // namespace polyscan
