#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "polyscan/geometry.hpp"

namespace polyscan {
namespace {

// Artificial box used to detect unboundedness during enumeration.
constexpr double kFarBound = 1e6;

bool Tight(const Halfspace& h, const Point& v, double tol = kTolGeom) {
  return std::abs(h.Violation(v)) <= tol * h.normal.norm();
}

// Vertex enumeration over all d-subsets of rows. `unit` holds normalized rows.
std::vector<Point> EnumerateVertices(const std::vector<Halfspace>& unit,
                                     int d) {
  const int m = static_cast<int>(unit.size());
  std::vector<Point> found;
  auto feasible = [&](const Point& x) {
    for (const Halfspace& h : unit) {
      if (h.Violation(x) > kTolGeom) return false;
    }
    return true;
  };
  auto consider = [&](const Point& x) {
    if (!x.allFinite() || !feasible(x)) return;
    for (const Point& q : found) {
      if ((q - x).lpNorm<Eigen::Infinity>() <= kTolGeom) return;
    }
    found.push_back(x);
  };
  if (d == 2) {
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        Eigen::Matrix2d a;
        a.row(0) = unit[i].normal.transpose();
        a.row(1) = unit[j].normal.transpose();
        const double det = a.determinant();
        if (std::abs(det) < 1e-12) continue;
        const Eigen::Vector2d b(unit[i].offset, unit[j].offset);
        consider(Point(a.inverse() * b));
      }
    }
  } else {
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        const Eigen::Vector3d ni = unit[i].normal;
        const Eigen::Vector3d nj = unit[j].normal;
        const Eigen::Vector3d cij = ni.cross(nj);
        if (cij.squaredNorm() < 1e-24) continue;
        for (int k = j + 1; k < m; ++k) {
          const Eigen::Vector3d nk = unit[k].normal;
          const double det = cij.dot(nk);
          if (std::abs(det) < 1e-12) continue;
          // Cramer's rule via triple products.
          const Eigen::Vector3d x =
              (unit[i].offset * nj.cross(nk) + unit[j].offset * nk.cross(ni) +
               unit[k].offset * cij) /
              det;
          consider(Point(x));
        }
      }
    }
  }
  return found;
}

}  // namespace

std::vector<Point> VerticesOf(std::span<const Halfspace> rows) {
  if (rows.empty()) throw Error(ErrorCode::kUnbounded, "no halfspaces");
  const int d = static_cast<int>(rows.front().normal.size());
  if (d != 2 && d != 3) {
    throw Error(ErrorCode::kInvalidArgument, "dimension must be 2 or 3");
  }
  std::vector<Halfspace> unit;
  unit.reserve(rows.size() + 2 * d);
  for (const Halfspace& h : rows) {
    if (h.normal.size() != d || !(h.normal.norm() > 0) ||
        !std::isfinite(h.offset)) {
      throw Error(ErrorCode::kInvalidArgument, "invalid halfspace");
    }
    unit.push_back(h.Normalized());
  }
  const std::size_t real_rows = unit.size();
  for (int k = 0; k < d; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
    e[k] = 1.0;
    unit.push_back(Halfspace{e, kFarBound});
    unit.push_back(Halfspace{-e, kFarBound});
  }
  std::vector<Point> verts = EnumerateVertices(unit, d);
  if (verts.empty()) throw Error(ErrorCode::kEmpty, "halfspaces are infeasible");
  for (const Point& v : verts) {
    for (std::size_t r = real_rows; r < unit.size(); ++r) {
      if (Tight(unit[r], v, 1.0)) {
        throw Error(ErrorCode::kUnbounded, "halfspaces admit a recession direction");
      }
    }
  }
  std::sort(verts.begin(), verts.end(), LexLess);
  return verts;
}

std::optional<Polytope> Polytope::FromHalfspaces(std::vector<Halfspace> rows) {
  std::vector<Point> verts;
  try {
    verts = VerticesOf(rows);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kEmpty) return std::nullopt;
    throw;
  }
  const int d = static_cast<int>(rows.front().normal.size());
  if (static_cast<int>(verts.size()) < d + 1 || AffineRank(verts) < d) {
    return std::nullopt;
  }

  // A row is kept when its tight vertices span a facet; duplicates of an
  // earlier kept row are dropped.
  std::vector<Halfspace> kept;
  for (const Halfspace& h : rows) {
    std::vector<Point> tight;
    for (const Point& v : verts) {
      if (Tight(h, v)) tight.push_back(v);
    }
    if (static_cast<int>(tight.size()) < d || AffineRank(tight) != d - 1) {
      continue;
    }
    bool duplicate = false;
    for (const Halfspace& k : kept) {
      if (SameHalfspace(k, h, 1e-9)) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept.push_back(h);
  }
  return Polytope(std::move(kept), std::move(verts));
}

Polytope Polytope::FromParts(std::vector<Halfspace> rows,
                             std::vector<Point> vertices) {
  if (vertices.empty() || rows.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "polytope needs rows and vertices");
  }
  const int d = static_cast<int>(vertices.front().size());
  if ((d != 2 && d != 3) || static_cast<int>(vertices.size()) < d + 1) {
    throw Error(ErrorCode::kInvalidArgument, "polytope needs d+1 vertices");
  }
  for (const Point& v : vertices) {
    if (v.size() != d || !v.allFinite()) {
      throw Error(ErrorCode::kInvalidArgument, "vertex has wrong dimension");
    }
    int tight = 0;
    for (const Halfspace& h : rows) {
      if (h.normal.size() != d) {
        throw Error(ErrorCode::kInvalidArgument, "row has wrong dimension");
      }
      const double viol = h.Violation(v) / h.normal.norm();
      if (viol > kTolGeom) {
        throw Error(ErrorCode::kInvalidArgument,
                    "vertex violates a halfspace by " + std::to_string(viol));
      }
      if (viol >= -kTolGeom) ++tight;
    }
    if (tight < d) {
      throw Error(ErrorCode::kInvalidArgument, "vertex is not tight on d rows");
    }
  }
  return Polytope(std::move(rows), std::move(vertices));
}

Polytope Polytope::Box(const Point& lo, const Point& hi) {
  const Eigen::Index d = lo.size();
  std::vector<Halfspace> rows;
  for (Eigen::Index k = 0; k < d; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
    e[k] = 1.0;
    rows.push_back(Halfspace{e, hi[k]});
    rows.push_back(Halfspace{-e, -lo[k]});
  }
  std::optional<Polytope> p = FromHalfspaces(std::move(rows));
  if (!p) throw Error(ErrorCode::kDegenerateInput, "box has zero volume");
  return *std::move(p);
}

bool Polytope::Contains(const Point& x, double tol) const {
  for (const Halfspace& h : rows_) {
    if (h.Violation(x) > tol * h.normal.norm()) return false;
  }
  return true;
}

bool Polytope::ContainsInterior(const Point& x, double tol) const {
  for (const Halfspace& h : rows_) {
    if (h.Violation(x) >= -tol * h.normal.norm()) return false;
  }
  return true;
}

Point Polytope::VertexMean() const {
  Point m = Point::Zero(dim());
  for (const Point& v : vertices_) m += v;
  return m / static_cast<double>(vertices_.size());
}

Point Polytope::LowerCorner() const {
  Point lo = vertices_.front();
  for (const Point& v : vertices_) lo = lo.cwiseMin(v);
  return lo;
}

Point Polytope::UpperCorner() const {
  Point hi = vertices_.front();
  for (const Point& v : vertices_) hi = hi.cwiseMax(v);
  return hi;
}

std::vector<std::vector<int>> FacetCycles(const Polytope& p) {
  const int d = p.dim();
  const auto& verts = p.vertices();
  std::vector<std::vector<int>> cycles;
  cycles.reserve(p.halfspaces().size());
  for (const Halfspace& h : p.halfspaces()) {
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(verts.size()); ++i) {
      if (Tight(h, verts[i])) idx.push_back(i);
    }
    if (d == 3 && idx.size() > 3) {
      const Eigen::Vector3d n = h.normal.normalized();
      Eigen::Vector3d c = Eigen::Vector3d::Zero();
      for (int i : idx) c += Eigen::Vector3d(verts[i]);
      c /= static_cast<double>(idx.size());
      const Eigen::Vector3d u =
          (n.unitOrthogonal());
      const Eigen::Vector3d w = n.cross(u);
      std::vector<double> angle(verts.size());
      for (int i : idx) {
        const Eigen::Vector3d r = Eigen::Vector3d(verts[i]) - c;
        angle[i] = std::atan2(r.dot(w), r.dot(u));
      }
      std::sort(idx.begin(), idx.end(),
                [&](int a, int b) { return angle[a] < angle[b]; });
    } else if (d == 3 && idx.size() == 3) {
      const Eigen::Vector3d a(verts[idx[0]]), b(verts[idx[1]]), c(verts[idx[2]]);
      if ((b - a).cross(c - a).dot(h.normal) < 0) std::swap(idx[1], idx[2]);
    }
    cycles.push_back(std::move(idx));
  }
  return cycles;
}

SimplexFan::SimplexFan(const Polytope& p) {
  const int d = p.dim();
  const auto& verts = p.vertices();
  const Point apex = p.VertexMean();
  auto add = [&](std::vector<Point> corners) {
    Eigen::MatrixXd m(d, d);
    for (int k = 0; k < d; ++k) m.col(k) = corners[k + 1] - corners[0];
    const double vol = std::abs(m.determinant()) / (d == 2 ? 2.0 : 6.0);
    if (vol <= 0.0) return;
    simplices_.push_back(Simplex{std::move(corners), vol});
  };
  for (const std::vector<int>& cycle : FacetCycles(p)) {
    if (d == 2) {
      if (cycle.size() < 2) continue;
      add({apex, verts[cycle.front()], verts[cycle.back()]});
    } else {
      for (std::size_t k = 1; k + 1 < cycle.size(); ++k) {
        add({apex, verts[cycle[0]], verts[cycle[k]], verts[cycle[k + 1]]});
      }
    }
  }
  cumulative_.reserve(simplices_.size());
  for (const Simplex& s : simplices_) {
    total_volume_ += s.volume;
    cumulative_.push_back(total_volume_);
  }
}

Point SimplexFan::centroid() const {
  Point c = Point::Zero(simplices_.empty() ? 0 : simplices_[0].corners[0].size());
  for (const Simplex& s : simplices_) {
    Point sc = Point::Zero(c.size());
    for (const Point& q : s.corners) sc += q;
    c += s.volume * sc / static_cast<double>(s.corners.size());
  }
  return c / total_volume_;
}

Point SimplexFan::Sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double pick = unif(rng) * total_volume_;
  auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), pick);
  if (it == cumulative_.end()) --it;
  const Simplex& s = simplices_[static_cast<std::size_t>(it - cumulative_.begin())];
  // Uniform barycentric weights from sorted uniforms.
  const std::size_t n = s.corners.size();  // at most 4
  std::array<double, 4> cuts{};
  for (std::size_t k = 0; k + 1 < n; ++k) cuts[k] = unif(rng);
  std::sort(cuts.begin(), cuts.begin() + static_cast<std::ptrdiff_t>(n - 1));
  Point x = Point::Zero(s.corners[0].size());
  double prev = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double next = k + 1 < n ? cuts[k] : 1.0;
    x += (next - prev) * s.corners[k];
    prev = next;
  }
  return x;
}

double Volume(const Polytope& p) { return SimplexFan(p).volume(); }

Point Centroid(const Polytope& p) { return SimplexFan(p).centroid(); }

}  // namespace polyscan
