#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "polyscan/geometry.hpp"

namespace polyscan {

/// Sensor returns in the world frame plus the sensor position.
struct PointCloud {
  std::vector<Point> points;
  Point origin;
};

struct PreprocessParams {
  double d_max = 10.0;            // crop radius (m)
  int n1 = 30;                    // stop when fewer points remain
  int n2 = 10;                    // stop after this many failures in a row
  int n3 = 20;                    // a plane needs more points than this
  double eps1 = 0.05;             // slab half-width (m)
  double eps2 = 0.02;             // gap per meter of range
  double neighbor_radius = 0.3;   // regression neighborhood (m)
  std::uint64_t rng_seed = 0;
  double slab_pad = 1e-3;         // thickness given to perfectly flat planes (m)

  /// Throws kInvalidArgument when a field is out of range for dimension d.
  void Validate(int d) const;
};

struct PlaneFit {
  Eigen::VectorXd normal;  // unit; first nonzero component positive
  double offset = 0.0;     // plane is normal . x + offset = 0
  bool degenerate = false; // points spanned fewer than d-1 dimensions
};

PointCloud CropPointCloud(const PointCloud& cloud, double d_max);

/// Uniform pick; throws kEmptyCloud.
Point RandomSelect(const PointCloud& cloud, std::mt19937_64& rng);

std::vector<Point> GetNeighbors(const PointCloud& cloud, const Point& seed,
                                double radius);

/// Total least squares plane. Throws kDegenerateInput for fewer than d points
/// or coincident points.
PlaneFit Regression(std::span<const Point> points);

/// Connected component of `seed` in the graph on the slab points
/// |normal . x + offset| < eps1 with edges between points closer than `gap`.
/// Returned in cloud order.
std::vector<Point> GrowPlane(const PointCloud& cloud, const Point& seed,
                             const Eigen::VectorXd& normal, double offset,
                             double eps1, double gap);

struct PreprocessReport {
  std::vector<Polytope> obstacles;
  /// Indices into `cropped.points` of the points behind each obstacle.
  std::vector<std::vector<std::size_t>> members;
  PointCloud cropped;
  int iterations = 0;
};

/// Plane segmentation of a scan into convex obstacles.
PreprocessReport PreprocessCloud(const PointCloud& cloud,
                                 const PreprocessParams& params);

}  // namespace polyscan
