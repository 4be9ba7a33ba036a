#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "polyscan/iris.hpp"
#include "support.hpp"

using namespace polyscan;
using namespace polyscan::testing;

namespace {

std::vector<Polytope> RoomWalls(double w, double t) {
  return {Box2(0, 0, w, t), Box2(0, w - t, w, w), Box2(0, 0, t, w), Box2(w - t, 0, w, w)};
}

void CheckObstacleFree(const Polytope& region, const std::vector<Polytope>& obstacles) {
  for (const Polytope& o : obstacles) {
    for (const Point& v : o.vertices()) CHECK_FALSE(region.ContainsInterior(v, kTolGeom));
  }
}

}  // namespace

TEST_CASE("bounding box") {
  PointCloud c{{P(0, 0), P(2, 1)}, P(0, 0)};
  CHECK(SamePointSet(BoundingBox(c, 0).vertices(), Box2(0, 0, 2, 1).vertices(), 0));
  CHECK(SamePointSet(BoundingBox(c, 0.5).vertices(), Box2(-0.5, -0.5, 2.5, 1.5).vertices(), 0));
  PointCloud none{{}, P(0, 0)};
  CHECK_THROWS_AS(BoundingBox(none, 0), Error);

  std::mt19937_64 rng(2);
  PointCloud r{RandomPoints(rng, 300, 3, -4, 4), P(0, 0, 0)};
  const Polytope box = BoundingBox(r, 0.1);
  for (const Point& x : r.points) CHECK(InsideRows(box.halfspaces(), x, 0.0));
}

TEST_CASE("separating hyperplanes for point obstacles") {
  const Ellipsoid unit = Ellipsoid::Ball(P(0, 0), 1.0);
  const std::vector<std::vector<Point>> one{{P(1, 0)}};
  const auto a = SeparatingHyperplanes(one, unit);
  REQUIRE(a.size() == 1);
  CHECK((a[0].normal - P(1, 0)).norm() < 1e-12);
  CHECK(a[0].offset == doctest::Approx(1.0));

  const std::vector<std::vector<Point>> two{{P(2, 0)}, {P(-2, 0)}};
  const auto b = SeparatingHyperplanes(two, unit);
  REQUIRE(b.size() == 2);
  CHECK((b[0].normal - P(1, 0)).norm() < 1e-12);
  CHECK(b[0].offset == doctest::Approx(2.0));
  CHECK((b[1].normal - P(-1, 0)).norm() < 1e-12);
  CHECK(b[1].offset == doctest::Approx(2.0));
}

TEST_CASE("separating hyperplanes skip shadowed obstacles") {
  const Ellipsoid unit = Ellipsoid::Ball(P(0, 0), 1.0);
  const std::vector<Polytope> obs{Box2(1, -1, 1.5, 1), Box2(3, -0.5, 4, 0.5)};
  CHECK(SeparatingHyperplanes(obs, unit).size() == 1);
  const std::vector<Polytope> inside{Box2(-1, -1, 1, 1)};
  CHECK_THROWS_AS(SeparatingHyperplanes(inside, unit), Error);
}

TEST_CASE("separating hyperplanes are sound on random scenes") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 2 + trial % 2;
    std::vector<Polytope> obs;
    for (int i = 0; i < 6; ++i) {
      Point c(d);
      for (int k = 0; k < d; ++k) c[k] = Uniform(rng, -5, 5);
      if (c.norm() < 1.5) continue;
      obs.push_back(RandomPolytope(rng, d, c, 1.0, 8));
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Random(d, d);
    const Ellipsoid metric{0.2 * (a * a.transpose()) + 0.2 * Eigen::MatrixXd::Identity(d, d),
                           Point::Zero(d)};
    const auto rows = SeparatingHyperplanes(obs, metric);
    for (const Halfspace& h : rows) CHECK(h.Violation(metric.center) < 0);
    for (const Polytope& o : obs) {
      for (const Point& v : o.vertices()) CHECK_FALSE(InsideRows(rows, v, -1e-300));
    }
  }
}

TEST_CASE("inflate with no obstacles fills the bounds") {
  const Polytope bounds = Box2(-2, -1, 2, 1);
  const auto r = InflateRegion({}, P(0.3, 0.2), bounds);
  CHECK(SamePointSet(r.region.vertices(), bounds.vertices(), 1e-12));
  CHECK(std::abs(r.ellipsoid.shape(0, 0) - 2.0) < 1e-6);
  CHECK(std::abs(r.ellipsoid.shape(1, 1) - 1.0) < 1e-6);
  CHECK(r.ellipsoid.center.norm() < 1e-6);
}

TEST_CASE("inflate in a square room stays off the walls") {
  const auto walls = RoomWalls(6, 0.1);
  const Polytope bounds = Box2(-1, -1, 7, 7);
  const auto r = InflateRegion(walls, P(3, 3), bounds);
  CheckObstacleFree(r.region, walls);
  for (const Point& v : r.region.vertices()) {
    CHECK(v[0] >= 0.1 - 1e-7);
    CHECK(v[0] <= 5.9 + 1e-7);
    CHECK(v[1] >= 0.1 - 1e-7);
    CHECK(v[1] <= 5.9 + 1e-7);
  }
  CHECK(Volume(r.region) > 30.0);
}

TEST_CASE("inflate between two parallel walls") {
  const std::vector<Polytope> walls{Box2(-5, 1, 5, 1.2), Box2(-5, -1.2, 5, -1)};
  const auto r = InflateRegion(walls, P(0.2, 0.1), Box2(-4, -3, 4, 3));
  // Minor semi-axis: the smaller eigenvalue of C.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r.ellipsoid.shape);
  CHECK(es.eigenvalues().minCoeff() <= 1.0 + 1e-6);
  CheckObstacleFree(r.region, walls);
}

TEST_CASE("inflate errors") {
  const std::vector<Polytope> obs{Box2(0, 0, 1, 1)};
  CHECK_THROWS_AS(InflateRegion(obs, P(0.5, 0.5), Box2(-3, -3, 3, 3)), Error);
  CHECK_THROWS_AS(InflateRegion(obs, P(5, 5), Box2(-3, -3, 3, 3)), Error);
  try {
    InflateRegion(obs, P(5, 5), Box2(-3, -3, 3, 3));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSeedOutsideBounds);
  }
}

TEST_CASE("inflate invariants on random scenes") {
  std::mt19937_64 rng(5);
  int done = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 2;
    const Polytope bounds = Polytope::Box(Point::Zero(d), Point::Constant(d, 10));
    std::vector<Polytope> obs;
    const int n = 3 + trial % 8;
    for (int i = 0; i < n; ++i) {
      Point c(d);
      for (int k = 0; k < d; ++k) c[k] = Uniform(rng, 1, 9);
      obs.push_back(RandomPolytope(rng, d, c, Uniform(rng, 0.5, 2.5), 8));
    }
    Point seed(d);
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
      for (int k = 0; k < d; ++k) seed[k] = Uniform(rng, 0.5, 9.5);
      ok = std::none_of(obs.begin(), obs.end(),
                        [&](const Polytope& o) { return o.Contains(seed, 0.1); });
    }
    if (!ok) continue;
    const auto r = InflateRegion(obs, seed, bounds);
    ++done;
    CheckObstacleFree(r.region, obs);
    for (const Point& v : r.region.vertices()) CHECK(bounds.Contains(v));
    for (std::size_t i = 1; i < r.logdet_history.size(); ++i) {
      CHECK(std::exp(r.logdet_history[i]) >= std::exp(r.logdet_history[i - 1]) - 1e-9);
    }
    for (const Halfspace& h : r.region.halfspaces()) CHECK(r.ellipsoid.InsideHalfspace(h, 1e-7));

    IrisConfig one;
    one.max_iters = 1;
    CHECK(InflateRegion(obs, seed, bounds, one).region.Contains(seed));
  }
  CHECK(done > 20);
}
