#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "polyscan/freespace.hpp"
#include "polyscan/graph.hpp"
#include "polyscan/iris.hpp"
#include "polyscan/preprocess.hpp"

namespace polyscan {

/// Ground truth for the simulator.
struct WorldModel {
  Polytope bounds;
  std::vector<Polytope> obstacles;
  /// Detection probability per obstacle; 1 is opaque, below 1 models glass.
  std::vector<double> materials;

  int dim() const { return bounds.dim(); }
  /// Throws kInvalidArgument when an obstacle leaves the bounds or the
  /// materials do not match the obstacles.
  void Validate() const;
  /// Inside the bounds and outside every obstacle (boundaries count as
  /// blocked).
  bool IsFree(const Point& x) const;
  /// Euclidean distance from x to the nearest obstacle or bounds facet;
  /// 0 when x is not free.
  double Clearance(const Point& x) const;
};

enum class SensorMode { kOmnidirectional, kLimitedFov };

struct SensorModel {
  SensorMode mode = SensorMode::kOmnidirectional;
  double fov_h = 86.0;     // degrees, limited-fov sweep width
  double fov_v = 57.0;     // degrees, elevation span (3D only)
  double range = 10.0;     // m
  int rays_azimuth = 1440; // per full turn, or per sweep for limited-fov
  int rays_elevation = 1;  // 3D only
  double noise_sigma = 0.01;
  std::uint64_t rng_seed = 0;

  void Validate() const;
};

/// Returns of one scan plus the end points of rays that returned nothing.
struct ScanRays {
  PointCloud cloud;
  std::vector<Point> misses;
};

/// Ray directions of one scan (unit vectors), in emission order.
std::vector<Point> RayDirections(const SensorModel& sensor, int dim);

/// Casts every ray from `pose`. Hits on glass are kept with the obstacle's
/// detection probability; a missed glass return lets the ray continue.
/// Points get Gaussian noise along the surface normal. Throws kPoseInObstacle.
ScanRays CastScan(const WorldModel& world, const SensorModel& sensor,
                  const Point& pose);

/// The returned points of CastScan.
PointCloud SimulateScan(const WorldModel& world, const SensorModel& sensor,
                        const Point& pose);

enum class CellState : std::uint8_t { kUnknown, kFree, kOccupied };

/// Regular grid over the bounding box of the world bounds. Cells whose
/// center lies outside the bounds start occupied.
class ExplorationGrid {
 public:
  ExplorationGrid(const Polytope& bounds, double cell_size);

  int dim() const { return static_cast<int>(shape_.size()); }
  double cell_size() const { return cell_size_; }
  const std::vector<int>& shape() const { return shape_; }
  std::size_t size() const { return cells_.size(); }
  const std::vector<CellState>& cells() const { return cells_; }

  CellState at(std::size_t cell) const { return cells_[cell]; }
  void set(std::size_t cell, CellState s) { cells_[cell] = s; }
  Point Center(std::size_t cell) const;
  /// Cell containing x, clamped to the grid.
  std::size_t CellOf(const Point& x) const;
  /// The 3^d - 1 surrounding cells that exist.
  std::vector<std::size_t> Neighbors(std::size_t cell) const;

  /// Cells crossed by the segment become free unless already occupied; the
  /// end cell becomes occupied when `hit`.
  void IntegrateRay(const Point& from, const Point& to, bool hit);
  void Integrate(const ScanRays& scan);

  /// Free cells next to an unknown cell that has no occupied neighbor.
  std::vector<std::size_t> FrontierCells() const;
  /// Free cells whose whole neighborhood is free.
  std::vector<std::size_t> InteriorFreeCells() const;
  std::size_t Count(CellState s) const;

 private:
  std::vector<int> Coords(std::size_t cell) const;

  Point lower_;
  double cell_size_;
  std::vector<int> shape_;
  std::vector<CellState> cells_;
};

enum class RobotMode { kScan, kMove };

struct TrajectorySample {
  int tick = 0;
  Point position;
  RobotMode mode = RobotMode::kScan;
  /// Number of polytopes in the free space when the sample was taken.
  std::size_t fs_size = 0;
};

struct RobotState {
  Point position;
  double radius = 0.0;
  RobotMode mode = RobotMode::kScan;
  Point x_des;
  std::vector<TrajectorySample> trajectory;
  int tick = 0;
};

struct ExploreParams {
  double robot_radius = 0.2;
  PreprocessParams preprocess;
  IrisConfig iris;
  AddCriteriaConfig add;
  double epsilon = 0.1;          // waypoint arrival (m)
  double step = 0.05;            // motion per tick (m)
  double cell_size = 0.25;       // exploration grid (m)
  int extra_seeds = 3;           // inflation seeds besides the robot
  double revisit_radius = 0.5;   // skip waypoints this close to a scan pose
  int unreachable_limit = 3;     // attempts before a frontier is dropped
  std::uint64_t seed = 0;

  void Validate(int dim) const;
};

struct UpdateReport {
  std::vector<PolytopeId> inserted;
  std::vector<Point> seeds;      // seeds inflated, robot first
  int skipped_seeds = 0;         // seeds inside an obstacle
  int obstacles = 0;             // segmented planes
  std::vector<Polytope> planes;  // their slabs, before shadowing
  int loose_points = 0;          // returns left over by segmentation
};

/// One scan worth of free-space growth: segmentation, inflation from the
/// robot position and up to params.extra_seeds candidates, robot-radius
/// shrink and insertion. `candidates` are extra seed positions in priority
/// order; they are picked by greedy farthest-point selection. When fs is
/// empty the robot region is inserted without the add criteria.
UpdateReport UpdateFreeSpace(const Point& x, const PointCloud& cloud, FreeSpace& fs,
                             const ExploreParams& params,
                             const std::vector<Point>& candidates = {},
                             std::uint64_t scan_seed = 0);

struct Waypoint {
  Point position;
  std::size_t frontier_cell = 0;
};

/// Nearest frontier cell (Euclidean, then lowest index) whose projection onto
/// fs is not within `revisit_radius` of a visited pose and not blacklisted.
/// The projection is pulled 1 cm toward the centroid of its polytope so it
/// lies strictly inside. nullopt means done.
std::optional<Waypoint> FrontierWaypoint(const ExplorationGrid& grid, const FreeSpace& fs,
                                         const Point& x,
                                         const std::vector<Point>& visited = {},
                                         double revisit_radius = 0.0,
                                         const std::set<std::size_t>& blacklist = {});

/// Next intermediate target: x_des when one polytope holds both points,
/// otherwise the cross point of the first edge on the cheapest graph path
/// over all polytopes containing x and x_des. Throws kUnreachable.
Point GenerateXNext(const Point& x, const Point& x_des, const TransitionGraph& g,
                    const FreeSpace& fs);

/// Straight-line motion to `target` in equal ticks of at most `step`,
/// landing on it. Every position is checked against fs.
/// Throws kSafetyViolation.
void Navigate(RobotState& state, const Point& target, double step, const FreeSpace& fs);

struct ScanEvent {
  int scan = 0;
  const Point* position = nullptr;
  const ScanRays* rays = nullptr;
  const FreeSpace* fs = nullptr;
  const TransitionGraph* graph = nullptr;
  const UpdateReport* update = nullptr;
};

struct ExplorationResult {
  FreeSpace fs;
  TransitionGraph graph;
  std::vector<TrajectorySample> trajectory;
  ExplorationGrid grid;
  int scans = 0;
  std::string termination;  // "done", "budget" or "unreachable"
};

/// Scan/move loop: scan, grow fs and the graph, pick a frontier waypoint and
/// travel to it through polytope intersections. At most max(1, budget) scans.
/// Throws kInitialClearanceViolation, kPoseInObstacle, kSafetyViolation.
ExplorationResult RunExploration(const WorldModel& world, const SensorModel& sensor,
                                 const ExploreParams& params, const Point& start,
                                 int budget,
                                 const std::function<void(const ScanEvent&)>& on_scan = {});

}  // namespace polyscan
