#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "polyscan/graph.hpp"
#include "support.hpp"

using namespace polyscan;
using namespace polyscan::testing;

namespace {

PolytopeId Id(int v) { return PolytopeId{v}; }

FreeSpace RandomBoxes(std::mt19937_64& rng, int n) {
  FreeSpace fs;
  for (int i = 0; i < n; ++i) {
    const double x = Uniform(rng, 0, 6), y = Uniform(rng, 0, 6);
    fs.Insert(Box2(x, y, x + Uniform(rng, 0.5, 2.5), y + Uniform(rng, 0.5, 2.5)));
  }
  return fs;
}

bool SameGraph(const TransitionGraph& a, const TransitionGraph& b) {
  if (a.nodes().size() != b.nodes().size() || a.edges().size() != b.edges().size()) {
    return false;
  }
  for (const auto& [id, c] : a.nodes()) {
    if (!b.HasNode(id) || b.nodes().at(id) != c) return false;
  }
  for (const auto& [key, e] : a.edges()) {
    const GraphEdge* f = b.FindEdge(key.first, key.second);
    if (f == nullptr || f->cross != e.cross || f->distance != e.distance) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("edge distance") {
  const auto [cross, dist] = EdgeDistance(Box2(0, 0, 2, 1), Box2(1, 0, 3, 1));
  CHECK((cross - P(1.5, 0.5)).norm() < 1e-12);
  CHECK(dist == doctest::Approx(1.0));
  const auto same = EdgeDistance(Box2(0, 0, 1, 1), Box2(0, 0, 1, 1));
  CHECK(same.second < 1e-12);
  CHECK_THROWS_AS(EdgeDistance(Box2(0, 0, 1, 1), Box2(1, 0, 2, 1)), Error);

  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const Polytope a = RandomPolytope(rng, 2 + i % 2, Point::Zero(2 + i % 2), 2.0);
    const Polytope b = RandomPolytope(rng, 2 + i % 2, Point::Constant(2 + i % 2, 0.5), 2.0);
    try {
      const auto [c, d] = EdgeDistance(a, b);
      CHECK(d >= (Centroid(a) - Centroid(b)).norm() - 1e-12);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kNoOverlap);
    }
  }
}

TEST_CASE("graph construction") {
  FreeSpace one;
  one.Insert(Box2(0, 0, 1, 1));
  const TransitionGraph g1 = BuildDiscreteGraph(one);
  CHECK(g1.nodes().size() == 1);
  CHECK(g1.edges().empty());

  FreeSpace chain;
  chain.Insert(Box2(0, 0, 2, 1));
  chain.Insert(Box2(1, 0, 4, 1));
  chain.Insert(Box2(3, 0, 6, 1));
  const TransitionGraph g3 = BuildDiscreteGraph(chain);
  CHECK(g3.edges().size() == 2);
  CHECK(g3.FindEdge(Id(0), Id(1)) != nullptr);
  CHECK(g3.FindEdge(Id(2), Id(1)) != nullptr);
  CHECK(g3.FindEdge(Id(0), Id(2)) == nullptr);
}

TEST_CASE("graph edges match pairwise intersection and incremental updates agree") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const FreeSpace fs = RandomBoxes(rng, 3 + trial % 8);
    const TransitionGraph full = BuildDiscreteGraph(fs);
    const auto& polys = fs.polytopes();
    for (std::size_t i = 0; i < polys.size(); ++i) {
      for (std::size_t j = i + 1; j < polys.size(); ++j) {
        const Point lo = polys[i].LowerCorner().cwiseMax(polys[j].LowerCorner());
        const Point hi = polys[i].UpperCorner().cwiseMin(polys[j].UpperCorner());
        const double area = std::max(0.0, hi[0] - lo[0]) * std::max(0.0, hi[1] - lo[1]);
        CHECK((full.FindEdge(polys[i].id(), polys[j].id()) != nullptr) == (area > 1e-9));
      }
    }
    TransitionGraph inc;
    FreeSpace growing;
    for (const Polytope& p : polys) {
      growing.Insert(p);
      const std::size_t edges_before = inc.edges().size();
      UpdateDiscreteGraph(inc, growing);
      CHECK(inc.edges().size() >= edges_before);
    }
    CHECK(SameGraph(full, inc));
    for (const auto& [key, e] : full.edges()) {
      const Polytope& a = *fs.Find(key.first);
      const Polytope& b = *fs.Find(key.second);
      CHECK(a.Contains(e.cross, 0.0));
      CHECK(b.Contains(e.cross, 0.0));
      CHECK(a.Contains(full.nodes().at(key.first), 0.0));
      CHECK(b.Contains(full.nodes().at(key.second), 0.0));
      const double expect = (full.nodes().at(key.first) - e.cross).norm() +
                            (full.nodes().at(key.second) - e.cross).norm();
      CHECK(std::abs(e.distance - expect) <= 1e-9);
    }
  }
}

TEST_CASE("shortest path by hand") {
  TransitionGraph g;
  for (int i = 0; i < 3; ++i) g.AddNode(Id(i), P(i, 0));
  g.AddEdge({Id(0), Id(1), P(0, 0), 1.0});
  g.AddEdge({Id(1), Id(2), P(0, 0), 1.0});
  g.AddEdge({Id(0), Id(2), P(0, 0), 3.0});
  const GraphPath self = ShortestPath(g, Id(1), Id(1));
  CHECK(self.ids == std::vector<PolytopeId>{Id(1)});
  CHECK(self.cost == 0.0);
  const GraphPath p = ShortestPath(g, Id(0), Id(2));
  CHECK(p.ids == std::vector<PolytopeId>{Id(0), Id(1), Id(2)});
  CHECK(p.cost == 2.0);

  g.AddNode(Id(7), P(9, 9));
  CHECK_THROWS_AS(ShortestPath(g, Id(0), Id(7)), Error);
  CHECK_THROWS_AS(ShortestPath(g, Id(0), Id(8)), Error);
}

TEST_CASE("shortest path ties take the smallest id sequence") {
  TransitionGraph g;
  for (int i = 0; i < 4; ++i) g.AddNode(Id(i), P(i, 0));
  g.AddEdge({Id(0), Id(2), P(0, 0), 1.0});
  g.AddEdge({Id(2), Id(3), P(0, 0), 1.0});
  g.AddEdge({Id(0), Id(1), P(0, 0), 1.0});
  g.AddEdge({Id(1), Id(3), P(0, 0), 1.0});
  CHECK(ShortestPath(g, Id(0), Id(3)).ids == std::vector<PolytopeId>{Id(0), Id(1), Id(3)});
  CHECK(ShortestPath(g, Id(3), Id(0)).ids == std::vector<PolytopeId>{Id(3), Id(1), Id(0)});
}

TEST_CASE("shortest path matches Floyd-Warshall and is symmetric") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const FreeSpace fs = RandomBoxes(rng, 2 + trial % 11);
    const TransitionGraph g = BuildDiscreteGraph(fs);
    const int n = static_cast<int>(fs.size());
    std::vector<std::tuple<int, int, double>> edges;
    for (const auto& [key, e] : g.edges()) {
      edges.emplace_back(static_cast<int>(key.first.value), static_cast<int>(key.second.value),
                         e.distance);
    }
    const auto fw = FloydWarshall(n, edges);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (std::isinf(fw[a][b])) {
          CHECK_THROWS_AS(ShortestPath(g, Id(a), Id(b)), Error);
          continue;
        }
        const GraphPath p = ShortestPath(g, Id(a), Id(b));
        CHECK(std::abs(p.cost - fw[a][b]) <= 1e-12 * std::max(1.0, fw[a][b]));
        CHECK(std::abs(p.cost - ShortestPath(g, Id(b), Id(a)).cost) <= 1e-12 * std::max(1.0, p.cost));
      }
    }
  }
}
