#include "polyscan/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace polyscan {

const GraphEdge* TransitionGraph::FindEdge(PolytopeId a, PolytopeId b) const {
  if (b < a) std::swap(a, b);
  auto it = edges_.find({a, b});
  return it == edges_.end() ? nullptr : &it->second;
}

std::vector<PolytopeId> TransitionGraph::Neighbors(PolytopeId id) const {
  auto it = adjacency_.find(id);
  if (it == adjacency_.end()) return {};
  return it->second;
}

void TransitionGraph::AddNode(PolytopeId id, Point centroid) {
  nodes_[id] = std::move(centroid);
  adjacency_[id];
}

void TransitionGraph::AddEdge(GraphEdge edge) {
  if (edge.b < edge.a) std::swap(edge.a, edge.b);
  auto insert_sorted = [](std::vector<PolytopeId>& list, PolytopeId id) {
    auto pos = std::lower_bound(list.begin(), list.end(), id);
    if (pos == list.end() || *pos != id) list.insert(pos, id);
  };
  insert_sorted(adjacency_[edge.a], edge.b);
  insert_sorted(adjacency_[edge.b], edge.a);
  const EdgeKey key{edge.a, edge.b};
  edges_[key] = std::move(edge);
}

std::pair<Point, double> EdgeDistance(const Polytope& p1, const Polytope& p2) {
  const std::optional<Polytope> both = Intersect(p1, p2);
  if (!both) throw Error(ErrorCode::kNoOverlap, "polytopes do not intersect");
  const SimplexFan fan(*both);
  if (!(fan.volume() > kMinEdgeVolume)) {
    throw Error(ErrorCode::kNoOverlap, "intersection has no volume");
  }
  Point cross = fan.centroid();
  const double dist = (Centroid(p1) - cross).norm() + (Centroid(p2) - cross).norm();
  return {std::move(cross), dist};
}

namespace {

bool BoxesOverlap(const Polytope& a, const Polytope& b) {
  return ((a.LowerCorner().array() <= b.UpperCorner().array()) &&
          (b.LowerCorner().array() <= a.UpperCorner().array()))
      .all();
}

void ConnectPair(TransitionGraph& g, const Polytope& lo, const Polytope& hi) {
  if (!BoxesOverlap(lo, hi)) return;
  try {
    auto [cross, dist] = EdgeDistance(lo, hi);
    g.AddEdge(GraphEdge{lo.id(), hi.id(), std::move(cross), dist});
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoOverlap) throw;
  }
}

}  // namespace

TransitionGraph BuildDiscreteGraph(const FreeSpace& fs) {
  TransitionGraph g;
  UpdateDiscreteGraph(g, fs);
  return g;
}

void UpdateDiscreteGraph(TransitionGraph& g, const FreeSpace& fs) {
  const auto& polys = fs.polytopes();  // ascending ids
  for (std::size_t j = 0; j < polys.size(); ++j) {
    if (g.HasNode(polys[j].id())) continue;
    g.AddNode(polys[j].id(), Centroid(polys[j]));
    // Pair arguments always go lower id first so both update paths compute
    // bit-identical edges.
    for (std::size_t i = 0; i < polys.size(); ++i) {
      if (i == j) continue;
      if (i > j && !g.HasNode(polys[i].id())) continue;  // handled when i is added
      const Polytope& lo = i < j ? polys[i] : polys[j];
      const Polytope& hi = i < j ? polys[j] : polys[i];
      ConnectPair(g, lo, hi);
    }
  }
}

GraphPath ShortestPath(const TransitionGraph& g, PolytopeId from, PolytopeId to) {
  if (!g.HasNode(from) || !g.HasNode(to)) {
    throw Error(ErrorCode::kInvalidArgument, "unknown node id");
  }
  // Distances to `to`, then a greedy walk from `from` that always takes the
  // smallest id on a shortest path.
  const double inf = std::numeric_limits<double>::infinity();
  std::map<PolytopeId, double> dist;
  for (const auto& [id, c] : g.nodes()) dist[id] = inf;
  using Item = std::pair<double, PolytopeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
  dist[to] = 0.0;
  queue.push({0.0, to});
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    for (PolytopeId v : g.Neighbors(u)) {
      const double nd = d + g.FindEdge(u, v)->distance;
      if (nd < dist[v]) {
        dist[v] = nd;
        queue.push({nd, v});
      }
    }
  }
  if (dist[from] == inf) {
    throw Error(ErrorCode::kUnreachable,
                "no path from " + ToString(from) + " to " + ToString(to));
  }

  GraphPath path;
  path.ids.push_back(from);
  std::vector<PolytopeId> visited{from};
  PolytopeId u = from;
  while (u != to) {
    const double target = dist[u];
    const double slack = 1e-12 * std::max(1.0, target);
    std::optional<PolytopeId> next;
    for (PolytopeId v : g.Neighbors(u)) {  // ascending
      const double w = g.FindEdge(u, v)->distance;
      const bool seen = std::find(visited.begin(), visited.end(), v) != visited.end();
      if (!seen && std::abs(w + dist[v] - target) <= slack) {
        next = v;
        break;
      }
    }
    if (!next) {
      throw Error(ErrorCode::kUnreachable, "path reconstruction failed");
    }
    path.cost += g.FindEdge(u, *next)->distance;
    path.ids.push_back(*next);
    visited.push_back(*next);
    u = *next;
  }
  return path;
}

}  // namespace polyscan
