#pragma once

#include <span>
#include <vector>

#include "polyscan/geometry.hpp"
#include "polyscan/preprocess.hpp"
#include "polyscan/solvers.hpp"

namespace polyscan {

struct IrisConfig {
  double vol_growth_tol = 0.02;   // stop when det(C) grows by less than this
  int max_iters = 10;
  double seed_ball_radius = 0.05; // initial ellipsoid (m)

  void Validate() const;
};

/// Axis-aligned box around the cloud points, grown by `margin`.
/// Throws kEmptyCloud.
Polytope BoundingBox(const PointCloud& cloud, double margin);

/// One halfspace per obstacle that still intersects the region built so far,
/// nearest obstacle (in the metric) first. Each halfspace is tangent to a
/// level set of the metric and keeps the metric's center inside.
/// Throws kSeedInObstacle if an obstacle contains the center.
std::vector<Halfspace> SeparatingHyperplanes(std::span<const Polytope> obstacles,
                                             const Ellipsoid& metric);

/// Same, for obstacles given as the generating points of their hulls
/// (a single point is allowed).
std::vector<Halfspace> SeparatingHyperplanes(
    std::span<const std::vector<Point>> obstacles, const Ellipsoid& metric);

struct IrisResult {
  Polytope region;
  Ellipsoid ellipsoid;
  /// log det C of each accepted ellipsoid, oldest first.
  std::vector<double> logdet_history;
  int iterations = 0;
};

/// Alternates separating hyperplanes and the inscribed ellipsoid, starting
/// from a small ball at `seed`. The region always includes the bounds rows.
/// Throws kSeedOutsideBounds, kSeedInObstacle.
IrisResult InflateRegion(std::span<const Polytope> obstacles, const Point& seed,
                         const Polytope& bounds, const IrisConfig& cfg = {});

}  // namespace polyscan
