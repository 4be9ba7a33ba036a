#pragma once

#include <span>
#include <vector>

#include "polyscan/geometry.hpp"

namespace polyscan {

/// The set {C u + center : |u| <= 1}, C symmetric positive definite.
struct Ellipsoid {
  Eigen::MatrixXd shape;
  Point center;

  static Ellipsoid Ball(const Point& center, double radius);

  double LogDet() const;
  /// |C^-1 (x - center)|; the set is the unit sublevel set.
  double MetricDistance(const Point& x) const;
  /// True if the ellipsoid lies in the halfspace, up to `tol` meters.
  bool InsideHalfspace(const Halfspace& h, double tol = kTolGeom) const;
};

/// Euclidean projection of `target` onto {x : A x <= b}.
///
/// Exact active-set enumeration over subsets of at most d rows; the first
/// subset satisfying the KKT conditions is returned. Throws kInfeasible.
Point QpProject(const Point& target, std::span<const Halfspace> rows);

/// Largest KKT residual of a projection result (stationarity, primal and
/// dual feasibility, complementarity), for diagnostics and tests.
double QpKktResidual(const Point& target, std::span<const Halfspace> rows,
                     const Point& solution);

struct EllipsoidSolveOptions {
  /// Target duality gap of the barrier method on log det C.
  double gap = 1e-8;
  int max_newton_steps = 400;
};

/// Maximum-volume ellipsoid inscribed in `p` via a log-barrier Newton method
/// over (C, center). Throws kDegeneratePolytope for zero-volume input.
Ellipsoid MaxVolumeEllipsoid(const Polytope& p,
                             const EllipsoidSolveOptions& opts = {});

/// Point of Conv(points) closest to the metric's center in the metric
/// |C^-1 (x - center)|. Wolfe's minimum-norm-point method in the whitened
/// coordinates.
Point ClosestPointInMetric(std::span<const Point> points,
                           const Ellipsoid& metric);

/// Minimum-norm point of the convex hull of `points` (Wolfe).
Point MinNormPoint(std::span<const Point> points);

}  // namespace polyscan
