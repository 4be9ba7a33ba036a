#pragma once

#include <optional>
#include <random>
#include <span>
#include <vector>

#include "polyscan/core.hpp"

namespace polyscan {

/// The closed halfspace {x : normal . x <= offset}. The normal is not
/// required to be unit length.
struct Halfspace {
  Eigen::VectorXd normal;
  double offset = 0.0;

  /// normal . x - offset; positive outside.
  double Violation(const Point& x) const { return normal.dot(x) - offset; }
  /// Signed Euclidean distance to the boundary hyperplane; positive outside.
  double SignedDistance(const Point& x) const {
    return Violation(x) / normal.norm();
  }
  /// Same set with a unit normal.
  Halfspace Normalized() const;
};

/// True if both describe the same closed halfspace within `tol`.
bool SameHalfspace(const Halfspace& a, const Halfspace& b,
                   double tol = kTolGeom);

/// Bounded, full-dimensional convex polytope in R^2 or R^3.
///
/// Holds a pruned H-representation together with its verified vertex set.
/// Instances are immutable apart from the id.
class Polytope {
 public:
  /// Builds the polytope {x : A x <= b}. Returns nullopt when the set is
  /// empty or has zero volume. Throws kUnbounded when it is unbounded.
  static std::optional<Polytope> FromHalfspaces(std::vector<Halfspace> rows);

  /// Adopts an already consistent representation (used by loaders and the
  /// hull routine). Throws kInvalidArgument if the invariants do not hold.
  static Polytope FromParts(std::vector<Halfspace> rows,
                            std::vector<Point> vertices);

  /// Axis-aligned box [lo, hi].
  static Polytope Box(const Point& lo, const Point& hi);

  int dim() const { return static_cast<int>(vertices_.front().size()); }
  const std::vector<Halfspace>& halfspaces() const { return rows_; }
  const std::vector<Point>& vertices() const { return vertices_; }

  PolytopeId id() const { return id_; }
  void set_id(PolytopeId id) { id_ = id; }

  /// Membership with tolerance `tol` (meters) on every row.
  bool Contains(const Point& x, double tol = kTolGeom) const;
  /// Strict interior membership: every row has slack larger than `tol`.
  bool ContainsInterior(const Point& x, double tol = kTolGeom) const;

  Point VertexMean() const;
  Point LowerCorner() const;
  Point UpperCorner() const;

 private:
  Polytope(std::vector<Halfspace> rows, std::vector<Point> vertices)
      : rows_(std::move(rows)), vertices_(std::move(vertices)) {}

  std::vector<Halfspace> rows_;
  std::vector<Point> vertices_;
  PolytopeId id_;
};

/// V1/V2/V3 split of the vertices of p1 ∩ p2.
struct VertexClassification {
  std::vector<Point> v1;  // vertices of p1 in int(p2)
  std::vector<Point> v2;  // vertices of p2 in int(p1)
  std::vector<Point> v3;  // on both boundaries
};

/// Convex hull of at least d+1 affinely independent points.
/// Throws kDegenerateInput when the points span less than d dimensions.
Polytope Hull(std::span<const Point> points);

/// Hull that tolerates flat point sets by thickening them by `pad` meters
/// along the missing directions. Used for obstacles built from planar scans.
Polytope HullOrSlab(std::span<const Point> points, double pad);

/// Vertex enumeration by facet combination with feasibility filtering.
/// Throws kUnbounded / kEmpty.
std::vector<Point> VerticesOf(std::span<const Halfspace> rows);

std::optional<Polytope> Intersect(const Polytope& p1, const Polytope& p2);

/// Minkowski difference with a ball of radius r: every offset is reduced by
/// r * |normal|. Returns nullopt when nothing (of nonzero volume) remains.
std::optional<Polytope> Shrink(const Polytope& p, double r);

/// Same rule applied to raw rows, without building a polytope.
std::vector<Halfspace> ShrinkRows(std::span<const Halfspace> rows, double r);

double Volume(const Polytope& p);
Point Centroid(const Polytope& p);

/// Euclidean projection onto a polytope.
Point ProjectPoint(const Point& target, const Polytope& onto);

/// Projection onto a union: closest per-polytope projection, ties broken by
/// the lowest id (then by position in the list). Throws kEmptySet.
Point ProjectPoint(const Point& target, std::span<const Polytope> onto);

/// Throws kEmptyIntersection when p1 ∩ p2 has zero volume.
VertexClassification ClassifyIntersectionVertices(const Polytope& p1,
                                                  const Polytope& p2);

/// Conv(p1 \ p2) computed as Conv((p1.V \ V1) ∪ V3).
Polytope ConvDifference(const Polytope& p1, const Polytope& p2);

/// Candidate halfspaces that cut the overlap with `p_existing` off `p_new`.
///
/// Every hyperplane through d affinely independent points of V3 is
/// returned once, oriented so that the centroid of the overlap lies outside.
/// Hyperplanes through that centroid are dropped. Empty when |V3| < d.
std::vector<Halfspace> SlicingHyperplanes(const Polytope& p_new,
                                          const Polytope& p_existing);

/// Simplicial fan of a polytope from its vertex mean; supports exact volume,
/// centroid and uniform sampling.
class SimplexFan {
 public:
  explicit SimplexFan(const Polytope& p);

  double volume() const { return total_volume_; }
  Point centroid() const;
  Point Sample(std::mt19937_64& rng) const;

  struct Simplex {
    std::vector<Point> corners;  // d + 1 corners
    double volume = 0.0;
  };
  const std::vector<Simplex>& simplices() const { return simplices_; }

 private:
  std::vector<Simplex> simplices_;
  std::vector<double> cumulative_;
  double total_volume_ = 0.0;
};

/// Facets of `p` as vertex index cycles; in 3D each cycle is ordered
/// counter-clockwise about the outward normal. Parallel to halfspaces().
std::vector<std::vector<int>> FacetCycles(const Polytope& p);

/// Affine rank of a point set, using `tol` on singular values.
int AffineRank(std::span<const Point> points, double tol = 1e-9);

/// Removes points closer than `tol` to an earlier point; keeps first seen.
std::vector<Point> UniquePoints(std::span<const Point> points,
                                double tol = kTolGeom);

}  // namespace polyscan
