// Generators and brute-force oracles shared by the test binaries. Nothing
// here calls into the code paths it is used to check.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "polyscan/geometry.hpp"

namespace polyscan::testing {

inline Point P(double x, double y) { return Eigen::Vector2d(x, y); }
inline Point P(double x, double y, double z) { return Eigen::Vector3d(x, y, z); }

inline Polytope Box2(double x0, double y0, double x1, double y1) {
  return Polytope::Box(P(x0, y0), P(x1, y1));
}

inline double Uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::vector<Point> RandomPoints(std::mt19937_64& rng, int n, int d,
                                       double lo, double hi) {
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) {
    Point p(d);
    for (int k = 0; k < d; ++k) p[k] = Uniform(rng, lo, hi);
    pts.push_back(p);
  }
  return pts;
}

/// Random full-dimensional convex polytope: hull of n points in
/// [center - size/2, center + size/2]^d.
inline Polytope RandomPolytope(std::mt19937_64& rng, int d, const Point& center,
                               double size, int n = 12) {
  while (true) {
    std::vector<Point> pts = RandomPoints(rng, n, d, -size / 2, size / 2);
    for (Point& p : pts) p += center;
    try {
      return Hull(pts);
    } catch (const Error&) {
    }
  }
}

/// Membership scan written directly against the halfspace rows.
inline bool InsideRows(const std::vector<Halfspace>& rows, const Point& x,
                       double tol) {
  for (const Halfspace& h : rows) {
    if (h.normal.dot(x) - h.offset > tol * h.normal.norm()) return false;
  }
  return true;
}

/// Rejection-sampling Monte-Carlo estimate of volume and centroid.
struct McEstimate {
  double volume = 0.0;
  Point centroid;
};

inline McEstimate MonteCarlo(const Polytope& p, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Point lo = p.LowerCorner();
  const Point hi = p.UpperCorner();
  const int d = p.dim();
  double box = 1.0;
  for (int k = 0; k < d; ++k) box *= hi[k] - lo[k];
  Point sum = Point::Zero(d);
  int hits = 0;
  for (int i = 0; i < samples; ++i) {
    Point x(d);
    for (int k = 0; k < d; ++k) x[k] = Uniform(rng, lo[k], hi[k]);
    if (InsideRows(p.halfspaces(), x, 0.0)) {
      ++hits;
      sum += x;
    }
  }
  return McEstimate{box * hits / samples, sum / std::max(hits, 1)};
}

/// Distance from x to the closest point of a convex polygon/polyhedron
/// boundary-or-interior, by brute-force over a dense set of samples.
inline double DistanceToSamples(const Point& x, const std::vector<Point>& samples) {
  double best = std::numeric_limits<double>::infinity();
  for (const Point& s : samples) best = std::min(best, (x - s).norm());
  return best;
}

/// Floyd-Warshall all-pairs shortest path costs.
inline std::vector<std::vector<double>> FloydWarshall(
    int n, const std::vector<std::tuple<int, int, double>>& edges) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, inf));
  for (int i = 0; i < n; ++i) dist[i][i] = 0.0;
  for (const auto& [a, b, w] : edges) {
    dist[a][b] = std::min(dist[a][b], w);
    dist[b][a] = std::min(dist[b][a], w);
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (dist[i][k] + dist[k][j] < dist[i][j]) dist[i][j] = dist[i][k] + dist[k][j];
      }
    }
  }
  return dist;
}

/// Sets equal up to tolerance, order-insensitive.
inline bool SamePointSet(const std::vector<Point>& a, const std::vector<Point>& b,
                         double tol) {
  auto covered = [tol](const std::vector<Point>& x, const std::vector<Point>& y) {
    for (const Point& p : x) {
      bool hit = false;
      for (const Point& q : y) {
        if ((p - q).norm() <= tol) {
          hit = true;
          break;
        }
      }
      if (!hit) return false;
    }
    return true;
  };
  return covered(a, b) && covered(b, a);
}

}  // namespace polyscan::testing
