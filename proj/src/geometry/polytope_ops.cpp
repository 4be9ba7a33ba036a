#include <algorithm>
#include <cmath>
#include <limits>

#include "polyscan/geometry.hpp"
#include "polyscan/solvers.hpp"

namespace polyscan {

std::optional<Polytope> Intersect(const Polytope& p1, const Polytope& p2) {
  if (p1.dim() != p2.dim()) {
    throw Error(ErrorCode::kInvalidArgument, "dimension mismatch");
  }
  // Separating facet: one side's vertices all strictly outside.
  auto separated = [](const Polytope& a, const Polytope& b) {
    for (const Halfspace& h : a.halfspaces()) {
      bool all_out = true;
      for (const Point& v : b.vertices()) {
        if (h.Violation(v) <= kTolGeom * h.normal.norm()) {
          all_out = false;
          break;
        }
      }
      if (all_out) return true;
    }
    return false;
  };
  if (separated(p1, p2) || separated(p2, p1)) return std::nullopt;

  // Rows of p1 that contain all of p2 cannot bound the intersection.
  std::vector<Halfspace> rows;
  for (const Halfspace& h : p1.halfspaces()) {
    bool contains_p2 = true;
    for (const Point& v : p2.vertices()) {
      if (h.Violation(v) > 0.0) {
        contains_p2 = false;
        break;
      }
    }
    if (!contains_p2) rows.push_back(h);
  }
  rows.insert(rows.end(), p2.halfspaces().begin(), p2.halfspaces().end());
  return Polytope::FromHalfspaces(std::move(rows));
}

std::vector<Halfspace> ShrinkRows(std::span<const Halfspace> rows, double r) {
  if (!(r >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "shrink radius must be >= 0");
  }
  std::vector<Halfspace> out;
  out.reserve(rows.size());
  for (const Halfspace& h : rows) {
    out.push_back(Halfspace{h.normal, h.offset - r * h.normal.norm()});
  }
  return out;
}

std::optional<Polytope> Shrink(const Polytope& p, double r) {
  if (r == 0.0) return p;
  std::optional<Polytope> out = Polytope::FromHalfspaces(ShrinkRows(p.halfspaces(), r));
  if (out) out->set_id(p.id());
  return out;
}

Point ProjectPoint(const Point& target, const Polytope& onto) {
  if (onto.Contains(target, 0.0)) return target;
  return QpProject(target, onto.halfspaces());
}

Point ProjectPoint(const Point& target, std::span<const Polytope> onto) {
  if (onto.empty()) throw Error(ErrorCode::kEmptySet, "empty union");
  std::size_t best = 0;
  Point best_point;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < onto.size(); ++i) {
    Point q = ProjectPoint(target, onto[i]);
    const double dist = (q - target).norm();
    const bool better =
        dist < best_dist ||
        (dist == best_dist && onto[i].id() < onto[best].id());
    if (better) {
      best = i;
      best_dist = dist;
      best_point = std::move(q);
    }
  }
  return best_point;
}

VertexClassification ClassifyIntersectionVertices(const Polytope& p1,
                                                  const Polytope& p2) {
  const std::optional<Polytope> both = Intersect(p1, p2);
  if (!both) {
    throw Error(ErrorCode::kEmptyIntersection, "polytopes do not overlap");
  }
  VertexClassification out;
  for (const Point& v : both->vertices()) {
    if (p2.ContainsInterior(v)) {
      out.v1.push_back(v);
    } else if (p1.ContainsInterior(v)) {
      out.v2.push_back(v);
    } else {
      out.v3.push_back(v);
    }
  }
  return out;
}

Polytope ConvDifference(const Polytope& p1, const Polytope& p2) {
  const VertexClassification cls = ClassifyIntersectionVertices(p1, p2);
  std::vector<Point> generators;
  for (const Point& v : p1.vertices()) {
    const bool in_v1 = std::any_of(cls.v1.begin(), cls.v1.end(), [&](const Point& q) {
      return (q - v).lpNorm<Eigen::Infinity>() <= kTolGeom;
    });
    if (!in_v1) generators.push_back(v);
  }
  generators.insert(generators.end(), cls.v3.begin(), cls.v3.end());
  return Hull(UniquePoints(generators));
}

}  // namespace polyscan
