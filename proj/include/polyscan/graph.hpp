#pragma once

#include <map>
#include <utility>
#include <vector>

#include "polyscan/freespace.hpp"

namespace polyscan {

struct GraphEdge {
  PolytopeId a;  // a < b
  PolytopeId b;
  Point cross;   // centroid of the intersection
  double distance = 0.0;
};

/// Nodes are free polytopes; edges join polytopes whose intersection has
/// positive volume.
class TransitionGraph {
 public:
  using EdgeKey = std::pair<PolytopeId, PolytopeId>;

  const std::map<PolytopeId, Point>& nodes() const { return nodes_; }
  const std::map<EdgeKey, GraphEdge>& edges() const { return edges_; }

  bool HasNode(PolytopeId id) const { return nodes_.count(id) > 0; }
  const GraphEdge* FindEdge(PolytopeId a, PolytopeId b) const;
  /// Neighbors in ascending id order.
  std::vector<PolytopeId> Neighbors(PolytopeId id) const;

  void AddNode(PolytopeId id, Point centroid);
  void AddEdge(GraphEdge edge);

 private:
  std::map<PolytopeId, Point> nodes_;
  std::map<EdgeKey, GraphEdge> edges_;
  std::map<PolytopeId, std::vector<PolytopeId>> adjacency_;
};

/// Intersection centroid and |C1 - cross| + |C2 - cross|.
/// Throws kNoOverlap when the intersection has no volume.
std::pair<Point, double> EdgeDistance(const Polytope& p1, const Polytope& p2);

/// Minimum intersection volume for an edge.
inline constexpr double kMinEdgeVolume = 1e-9;

/// Full rebuild from the free space.
TransitionGraph BuildDiscreteGraph(const FreeSpace& fs);

/// Adds nodes for polytopes of fs missing from g, with their edges.
/// Produces the same graph as a full rebuild.
void UpdateDiscreteGraph(TransitionGraph& g, const FreeSpace& fs);

struct GraphPath {
  std::vector<PolytopeId> ids;
  double cost = 0.0;  // edge distances summed along the path, in order
};

/// Dijkstra. Among minimum-cost paths the lexicographically smallest id
/// sequence is returned. Throws kUnreachable, or kInvalidArgument for
/// unknown ids.
GraphPath ShortestPath(const TransitionGraph& g, PolytopeId from, PolytopeId to);

}  // namespace polyscan
