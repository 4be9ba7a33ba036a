#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "polyscan/geometry.hpp"

namespace polyscan {
namespace {

double Cross2(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain; returns counter-clockwise vertices without
// collinear points.
std::vector<Point> MonotoneChain(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), LexLess);
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Point& a, const Point& b) {
                          return (a - b).lpNorm<Eigen::Infinity>() == 0.0;
                        }),
            pts.end());
  if (pts.size() < 3) return pts;
  double extent = 0.0;
  for (const Point& p : pts) extent = std::max(extent, p.cwiseAbs().maxCoeff());
  const double eps = 1e-12 * std::max(1.0, extent * extent);

  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point& p : pts) {
    while (k >= 2 && Cross2(hull[k - 2], hull[k - 1], p) <= eps) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && Cross2(hull[k - 2], hull[k - 1], pts[i]) <= eps) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

Polytope Hull2D(std::span<const Point> points) {
  std::vector<Point> ccw = MonotoneChain({points.begin(), points.end()});
  if (ccw.size() < 3) {
    throw Error(ErrorCode::kDegenerateInput, "2D hull has zero area");
  }
  std::vector<Halfspace> rows;
  rows.reserve(ccw.size());
  for (std::size_t i = 0; i < ccw.size(); ++i) {
    const Point& a = ccw[i];
    const Point& b = ccw[(i + 1) % ccw.size()];
    Eigen::Vector2d n(b[1] - a[1], a[0] - b[0]);
    n.normalize();
    rows.push_back(Halfspace{n, n.dot(a.head<2>())});
  }
  return Polytope::FromParts(std::move(rows), std::move(ccw));
}

// Incremental 3D hull with breadth-first visibility search from the face
// farthest below each new point.
class Hull3D {
 public:
  explicit Hull3D(std::span<const Point> points) {
    pts_.reserve(points.size());
    double extent = 0.0;
    for (const Point& p : points) {
      pts_.emplace_back(p[0], p[1], p[2]);
      extent = std::max(extent, p.cwiseAbs().maxCoeff());
    }
    eps_ = 1e-10 * std::max(1.0, extent);
  }

  Polytope Build() {
    InitialTetrahedron();
    std::vector<int> order(pts_.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> dist(pts_.size());
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      dist[i] = (pts_[i] - interior_).squaredNorm();
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return dist[a] > dist[b]; });
    for (int i : order) AddPoint(i);
    return Extract();
  }

 private:
  struct Face {
    std::array<int, 3> v;
    Eigen::Vector3d n;
    double off;
    bool alive = true;
  };

  static std::int64_t Key(int a, int b) {
    return (static_cast<std::int64_t>(a) << 32) | static_cast<std::uint32_t>(b);
  }

  void InitialTetrahedron() {
    const int n = static_cast<int>(pts_.size());
    int i0 = 0;
    for (int i = 1; i < n; ++i) {
      if (pts_[i].x() < pts_[i0].x()) i0 = i;
    }
    int i1 = i0;
    double best = -1;
    for (int i = 0; i < n; ++i) {
      const double d = (pts_[i] - pts_[i0]).squaredNorm();
      if (d > best) best = d, i1 = i;
    }
    const Eigen::Vector3d u = (pts_[i1] - pts_[i0]).normalized();
    int i2 = i0;
    best = -1;
    for (int i = 0; i < n; ++i) {
      const Eigen::Vector3d w = pts_[i] - pts_[i0];
      const double d = (w - w.dot(u) * u).squaredNorm();
      if (d > best) best = d, i2 = i;
    }
    const Eigen::Vector3d nrm =
        (pts_[i1] - pts_[i0]).cross(pts_[i2] - pts_[i0]).normalized();
    int i3 = i0;
    best = -1;
    for (int i = 0; i < n; ++i) {
      const double d = std::abs(nrm.dot(pts_[i] - pts_[i0]));
      if (d > best) best = d, i3 = i;
    }
    if (best <= eps_ || i0 == i1 || i2 == i0 || i2 == i1) {
      throw Error(ErrorCode::kDegenerateInput, "3D hull has zero volume");
    }
    interior_ = (pts_[i0] + pts_[i1] + pts_[i2] + pts_[i3]) / 4.0;
    const std::array<std::array<int, 3>, 4> tris = {
        {{i0, i1, i2}, {i0, i1, i3}, {i0, i2, i3}, {i1, i2, i3}}};
    for (auto t : tris) {
      const Eigen::Vector3d nn =
          (pts_[t[1]] - pts_[t[0]]).cross(pts_[t[2]] - pts_[t[0]]);
      if (nn.dot(interior_ - pts_[t[0]]) > 0) std::swap(t[1], t[2]);
      AddFace(t[0], t[1], t[2]);
    }
  }

  void AddFace(int a, int b, int c) {
    Face f;
    f.v = {a, b, c};
    Eigen::Vector3d nn = (pts_[b] - pts_[a]).cross(pts_[c] - pts_[a]);
    const double len = nn.norm();
    f.n = len > 0 ? Eigen::Vector3d(nn / len) : Eigen::Vector3d::Zero();
    f.off = f.n.dot(pts_[a]);
    const int idx = static_cast<int>(faces_.size());
    faces_.push_back(f);
    edges_[Key(a, b)] = idx;
    edges_[Key(b, c)] = idx;
    edges_[Key(c, a)] = idx;
  }

  double Height(const Face& f, int i) const {
    return f.n.dot(pts_[i]) - f.off;
  }

  void AddPoint(int i) {
    int start = -1;
    double best = eps_;
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      if (!faces_[f].alive) continue;
      const double h = Height(faces_[f], i);
      if (h > best) best = h, start = static_cast<int>(f);
    }
    if (start < 0) return;

    std::vector<int> visible{start};
    std::vector<char> mark(faces_.size(), 0);
    mark[start] = 1;
    for (std::size_t q = 0; q < visible.size(); ++q) {
      const Face& f = faces_[visible[q]];
      for (int e = 0; e < 3; ++e) {
        const int a = f.v[e], b = f.v[(e + 1) % 3];
        const auto it = edges_.find(Key(b, a));
        if (it == edges_.end()) continue;
        const int g = it->second;
        if (mark[g] || !faces_[g].alive) continue;
        if (Height(faces_[g], i) > eps_) {
          mark[g] = 1;
          visible.push_back(g);
        }
      }
    }

    std::vector<std::pair<int, int>> horizon;
    for (int fi : visible) {
      const Face& f = faces_[fi];
      for (int e = 0; e < 3; ++e) {
        const int a = f.v[e], b = f.v[(e + 1) % 3];
        const auto it = edges_.find(Key(b, a));
        if (it == edges_.end() || !mark[it->second]) horizon.emplace_back(a, b);
      }
    }
    for (int fi : visible) {
      Face& f = faces_[fi];
      f.alive = false;
      for (int e = 0; e < 3; ++e) edges_.erase(Key(f.v[e], f.v[(e + 1) % 3]));
    }
    for (const auto& [a, b] : horizon) AddFace(a, b, i);
  }

  Polytope Extract() const {
    std::vector<Halfspace> rows;
    std::vector<Eigen::Vector3d> normals;
    std::vector<int> used;
    for (const Face& f : faces_) {
      if (!f.alive || f.n.squaredNorm() == 0.0) continue;
      bool merged = false;
      for (std::size_t r = 0; r < normals.size(); ++r) {
        if (normals[r].dot(f.n) > 1.0 - 1e-12 &&
            std::abs(rows[r].offset - f.off) <= eps_ * 10) {
          merged = true;
          break;
        }
      }
      if (!merged) {
        normals.push_back(f.n);
        rows.push_back(Halfspace{Eigen::VectorXd(f.n), f.off});
      }
      for (int v : f.v) used.push_back(v);
    }
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());

    // Keep only extreme points: tight rows must span R^3.
    std::vector<Point> verts;
    for (int v : used) {
      Eigen::MatrixXd tight(0, 3);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (std::abs(normals[r].dot(pts_[v]) - rows[r].offset) <= kTolGeom) {
          tight.conservativeResize(tight.rows() + 1, 3);
          tight.row(tight.rows() - 1) = normals[r].transpose();
        }
      }
      if (tight.rows() >= 3 &&
          Eigen::FullPivLU<Eigen::MatrixXd>(tight).rank() == 3) {
        verts.push_back(Point(pts_[v]));
      }
    }
    return Polytope::FromParts(std::move(rows), std::move(verts));
  }

  std::vector<Eigen::Vector3d> pts_;
  std::vector<Face> faces_;
  std::unordered_map<std::int64_t, int> edges_;
  Eigen::Vector3d interior_;
  double eps_ = 1e-10;
};

}  // namespace

Polytope Hull(std::span<const Point> points) {
  if (points.empty()) {
    throw Error(ErrorCode::kDegenerateInput, "hull of no points");
  }
  const int d = static_cast<int>(points.front().size());
  if (d != 2 && d != 3) {
    throw Error(ErrorCode::kInvalidArgument, "dimension must be 2 or 3");
  }
  if (static_cast<int>(points.size()) < d + 1 || AffineRank(points) < d) {
    throw Error(ErrorCode::kDegenerateInput,
                "points are affinely dependent; hull has zero volume");
  }
  return d == 2 ? Hull2D(points) : Hull3D(points).Build();
}

Polytope HullOrSlab(std::span<const Point> points, double pad) {
  if (points.empty()) {
    throw Error(ErrorCode::kDegenerateInput, "hull of no points");
  }
  const Eigen::Index d = points.front().size();
  Point mean = Point::Zero(d);
  for (const Point& p : points) mean += p;
  mean /= static_cast<double>(points.size());
  Eigen::MatrixXd centered(points.size(), d);
  for (std::size_t i = 0; i < points.size(); ++i) {
    centered.row(i) = (points[i] - mean).transpose();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeFullV);
  const Eigen::MatrixXd axes = svd.matrixV();

  // Principal directions along which the set is thinner than `pad`.
  std::vector<Eigen::Index> flat;
  std::vector<Eigen::Index> spread;
  for (Eigen::Index k = 0; k < d; ++k) {
    const Eigen::VectorXd proj = centered * axes.col(k);
    if (proj.maxCoeff() - proj.minCoeff() < pad) {
      flat.push_back(k);
    } else {
      spread.push_back(k);
    }
  }
  if (flat.empty()) return Hull(points);

  // Extreme points inside the spanned subspace, flattened onto it.
  std::vector<Point> base;
  auto lift = [&](const Eigen::VectorXd& coords) {
    Point p = mean;
    for (std::size_t j = 0; j < spread.size(); ++j) {
      p += coords[j] * axes.col(spread[j]);
    }
    return p;
  };
  if (spread.empty()) {
    base.push_back(mean);
  } else if (spread.size() == 1) {
    const Eigen::VectorXd proj = centered * axes.col(spread[0]);
    base.push_back(lift(Eigen::VectorXd::Constant(1, proj.minCoeff())));
    base.push_back(lift(Eigen::VectorXd::Constant(1, proj.maxCoeff())));
  } else {
    std::vector<Point> planar;
    planar.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      planar.push_back(Eigen::Vector2d(centered.row(i).dot(axes.col(spread[0])),
                                       centered.row(i).dot(axes.col(spread[1]))));
    }
    for (const Point& q : MonotoneChain(std::move(planar))) base.push_back(lift(q));
  }

  std::vector<Point> padded;
  const std::size_t combos = std::size_t{1} << flat.size();
  for (const Point& b : base) {
    for (std::size_t mask = 0; mask < combos; ++mask) {
      Point p = b;
      for (std::size_t j = 0; j < flat.size(); ++j) {
        const double sign = (mask >> j) & 1 ? 1.0 : -1.0;
        p += sign * pad * axes.col(flat[j]);
      }
      padded.push_back(p);
    }
  }
  return Hull(padded);
}

}  // namespace polyscan
