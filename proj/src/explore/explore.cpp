#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>

#include "polyscan/explore.hpp"

namespace polyscan {

void ExploreParams::Validate(int dim) const {
  preprocess.Validate(dim);
  iris.Validate();
  add.Validate();
  if (!(robot_radius >= 0)) throw Error(ErrorCode::kInvalidArgument, "robot_radius must be >= 0");
  if (!(epsilon > 0) || !(step > 0) || !(cell_size > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon, step and cell_size must be > 0");
  }
  if (extra_seeds < 0) throw Error(ErrorCode::kInvalidArgument, "extra_seeds must be >= 0");
  if (!(revisit_radius >= 0)) {
    throw Error(ErrorCode::kInvalidArgument, "revisit_radius must be >= 0");
  }
  if (unreachable_limit < 1) {
    throw Error(ErrorCode::kInvalidArgument, "unreachable_limit must be >= 1");
  }
}

namespace {

std::uint64_t Mix(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Unit normals of the polytope used to stand in for the crop ball.
std::vector<Eigen::VectorXd> BallNormals(int d) {
  std::vector<Eigen::VectorXd> normals;
  if (d == 2) {
    for (int k = 0; k < 16; ++k) {
      const double a = 2.0 * std::numbers::pi * k / 16;
      Eigen::VectorXd n(2);
      n << std::cos(a), std::sin(a);
      normals.push_back(n);
    }
    return normals;
  }
  for (int i = -1; i <= 1; ++i) {
    for (int j = -1; j <= 1; ++j) {
      for (int k = -1; k <= 1; ++k) {
        if (i == 0 && j == 0 && k == 0) continue;
        Eigen::VectorXd n(3);
        n << i, j, k;
        normals.push_back(n.normalized());
      }
    }
  }
  return normals;
}

// Rows of a polytope inscribed in the ball of radius `radius` around c.
std::vector<Halfspace> CropRows(const Point& c, double radius) {
  const int d = static_cast<int>(c.size());
  static const std::map<int, double> scale = [] {
    std::map<int, double> out;
    for (int dim : {2, 3}) {
      std::vector<Halfspace> unit;
      for (const auto& n : BallNormals(dim)) unit.push_back(Halfspace{n, 1.0});
      double far = 0;
      for (const Point& v : VerticesOf(unit)) far = std::max(far, v.norm());
      out[dim] = 1.0 / far;
    }
    return out;
  }();
  std::vector<Halfspace> rows;
  for (const auto& n : BallNormals(d)) {
    rows.push_back(Halfspace{n, n.dot(c) + radius * scale.at(d)});
  }
  return rows;
}

// Obstacle extended away from the sensor so the space it hides is blocked.
Polytope Shadow(std::span<const Point> points, const Point& x, double far, double pad) {
  std::vector<Point> all(points.begin(), points.end());
  for (const Point& p : points) {
    const Point dir = p - x;
    const double n = dir.norm();
    if (n > 0) all.push_back(p + (far / n) * dir);
  }
  return HullOrSlab(all, pad);
}

}  // namespace

UpdateReport UpdateFreeSpace(const Point& x, const PointCloud& cloud, FreeSpace& fs,
                             const ExploreParams& params,
                             const std::vector<Point>& candidates,
                             std::uint64_t scan_seed) {
  const int d = static_cast<int>(x.size());
  params.Validate(d);
  UpdateReport report;
  if (cloud.points.empty()) return report;

  PreprocessParams pp = params.preprocess;
  pp.rng_seed = Mix(scan_seed, 1);
  PointCloud centered = cloud;
  centered.origin = x;
  const PreprocessReport pre = PreprocessCloud(centered, pp);
  if (pre.cropped.points.empty()) return report;
  report.obstacles = static_cast<int>(pre.obstacles.size());
  report.planes = pre.obstacles;

  // Planes and loose returns both become obstacles, each with its shadow.
  const double far = 2.0 * pp.d_max;
  std::vector<Polytope> obstacles;
  std::vector<char> used(pre.cropped.points.size(), 0);
  for (std::size_t i = 0; i < pre.obstacles.size(); ++i) {
    obstacles.push_back(Shadow(pre.obstacles[i].vertices(), x, far, pp.slab_pad));
    for (std::size_t m : pre.members[i]) used[m] = 1;
  }
  // Loose returns are grouped like plane points (gap grows with range) and
  // each group is blocked by its hull.
  std::vector<std::size_t> loose;
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (!used[i]) loose.push_back(i);
  }
  report.loose_points = static_cast<int>(loose.size());
  std::vector<std::size_t> group(loose.size());
  for (std::size_t a = 0; a < loose.size(); ++a) group[a] = a;
  std::function<std::size_t(std::size_t)> root = [&](std::size_t a) {
    return group[a] == a ? a : group[a] = root(group[a]);
  };
  const auto& pts = pre.cropped.points;
  for (std::size_t a = 0; a < loose.size(); ++a) {
    for (std::size_t b = a + 1; b < loose.size(); ++b) {
      const Point& pa = pts[loose[a]];
      const Point& pb = pts[loose[b]];
      const double gap = pp.eps2 * std::max((pa - x).norm(), (pb - x).norm());
      if ((pa - pb).norm() < gap) group[root(b)] = root(a);
    }
  }
  std::map<std::size_t, std::vector<Point>> groups;
  for (std::size_t a = 0; a < loose.size(); ++a) groups[root(a)].push_back(pts[loose[a]]);
  for (const auto& [key, members] : groups) {
    obstacles.push_back(Shadow(members, x, far, pp.slab_pad));
  }

  // Box around the returns and the robot, cut to the crop ball.
  const double margin = params.robot_radius + params.iris.seed_ball_radius + 0.05;
  Point lo = x.array() - margin;
  Point hi = x.array() + margin;
  for (const Point& p : pre.cropped.points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  std::vector<Halfspace> rows = Polytope::Box(lo, hi).halfspaces();
  for (Halfspace& h : CropRows(x, pp.d_max)) rows.push_back(std::move(h));
  const std::optional<Polytope> bounds = Polytope::FromHalfspaces(std::move(rows));
  if (!bounds) return report;

  auto inflate = [&](const Point& seed, int iters) -> std::optional<Polytope> {
    IrisConfig cfg = params.iris;
    cfg.max_iters = iters;
    try {
      const IrisResult r = InflateRegion(obstacles, seed, *bounds, cfg);
      return ShrinkForRobot(r.region, params.robot_radius);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSeedInObstacle && e.code() != ErrorCode::kSeedOutsideBounds) {
        throw;
      }
      return std::nullopt;
    }
  };
  AddCriteriaConfig add = params.add;
  add.require_overlap = true;
  add.rng_seed = Mix(scan_seed, 2);
  auto insert = [&](const Polytope& p) {
    if (fs.empty()) {
      report.inserted.push_back(fs.Insert(p));
      return;
    }
    const AddReport r = AddNewPoly(p, fs, add);
    report.inserted.insert(report.inserted.end(), r.inserted.begin(), r.inserted.end());
  };

  // Robot seed. The region may drift off the seed over the iterations; the
  // first iteration always keeps it.
  report.seeds.push_back(x);
  std::optional<Polytope> own = inflate(x, params.iris.max_iters);
  if (!own || !own->Contains(x, 0.0)) {
    std::optional<Polytope> first = inflate(x, 1);
    if (first && first->Contains(x, 0.0)) own = std::move(first);
  }
  if (own) {
    insert(*own);
  } else {
    ++report.skipped_seeds;
  }

  // Extra seeds by greedy farthest-point selection among usable candidates.
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Point& c = candidates[i];
    if (!bounds->ContainsInterior(c, params.iris.seed_ball_radius)) continue;
    const bool blocked = std::any_of(obstacles.begin(), obstacles.end(), [&](const Polytope& o) {
      return o.Contains(c, params.iris.seed_ball_radius);
    });
    if (!blocked) usable.push_back(i);
  }
  std::vector<double> spread(usable.size());
  for (std::size_t j = 0; j < usable.size(); ++j) spread[j] = (candidates[usable[j]] - x).norm();
  std::vector<char> taken(usable.size(), 0);
  for (int k = 0; k < params.extra_seeds; ++k) {
    std::optional<std::size_t> best;
    for (std::size_t j = 0; j < usable.size(); ++j) {
      if (taken[j] || fs.Contains(candidates[usable[j]], 0.0)) continue;
      if (!best || spread[j] > spread[*best]) best = j;
    }
    if (!best) break;
    taken[*best] = 1;
    const Point& seed = candidates[usable[*best]];
    for (std::size_t j = 0; j < usable.size(); ++j) {
      spread[j] = std::min(spread[j], (candidates[usable[j]] - seed).norm());
    }
    report.seeds.push_back(seed);
    if (std::optional<Polytope> p = inflate(seed, params.iris.max_iters)) {
      insert(*p);
    } else {
      ++report.skipped_seeds;
    }
  }
  return report;
}

std::optional<Waypoint> FrontierWaypoint(const ExplorationGrid& grid, const FreeSpace& fs,
                                         const Point& x, const std::vector<Point>& visited,
                                         double revisit_radius,
                                         const std::set<std::size_t>& blacklist) {
  if (fs.empty()) return std::nullopt;
  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t c : grid.FrontierCells()) {
    if (!blacklist.count(c)) order.emplace_back((grid.Center(c) - x).norm(), c);
  }
  std::sort(order.begin(), order.end());

  const auto& polys = fs.polytopes();
  std::vector<Point> centroids;
  for (const Polytope& p : polys) centroids.push_back(Centroid(p));
  for (const auto& [dist, cell] : order) {
    const Point target = grid.Center(cell);
    double best = std::numeric_limits<double>::infinity();
    std::size_t which = 0;
    Point proj;
    for (std::size_t i = 0; i < polys.size(); ++i) {
      const Point box = target.cwiseMax(polys[i].LowerCorner()).cwiseMin(polys[i].UpperCorner());
      if ((box - target).norm() >= best) continue;
      Point q = ProjectPoint(target, polys[i]);
      const double dq = (q - target).norm();
      if (dq < best) {
        best = dq;
        which = i;
        proj = std::move(q);
      }
    }
    const Point inward = centroids[which] - proj;
    const double n = inward.norm();
    const Point w = n <= 0.01 ? centroids[which] : Point(proj + (0.01 / n) * inward);
    const bool seen = std::any_of(visited.begin(), visited.end(), [&](const Point& v) {
      return (v - w).norm() <= revisit_radius;
    });
    if (!seen) return Waypoint{w, cell};
  }
  return std::nullopt;
}

Point GenerateXNext(const Point& x, const Point& x_des, const TransitionGraph& g,
                    const FreeSpace& fs) {
  std::vector<PolytopeId> from;
  std::vector<PolytopeId> to;
  for (const Polytope& p : fs.polytopes()) {
    const bool has_x = p.Contains(x, 0.0);
    const bool has_goal = p.Contains(x_des, 0.0);
    if (has_x && has_goal) return x_des;
    if (has_x) from.push_back(p.id());
    if (has_goal) to.push_back(p.id());
  }
  if (from.empty() || to.empty()) {
    throw Error(ErrorCode::kUnreachable, "start or goal is outside the free space");
  }
  std::optional<GraphPath> best;
  for (PolytopeId a : from) {
    for (PolytopeId b : to) {
      try {
        GraphPath path = ShortestPath(g, a, b);
        if (!best || path.cost < best->cost) best = std::move(path);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kUnreachable) throw;
      }
    }
  }
  if (!best) throw Error(ErrorCode::kUnreachable, "no graph path to the goal");
  return g.FindEdge(best->ids[0], best->ids[1])->cross;
}

void Navigate(RobotState& state, const Point& target, double step, const FreeSpace& fs) {
  if (!(step > 0)) throw Error(ErrorCode::kInvalidArgument, "step must be > 0");
  const Point start = state.position;
  const double length = (target - start).norm();
  if (length == 0.0) return;
  const bool shared = std::any_of(fs.polytopes().begin(), fs.polytopes().end(),
                                  [&](const Polytope& p) {
                                    return p.Contains(start, 0.0) && p.Contains(target, 0.0);
                                  });
  if (!shared) {
    throw Error(ErrorCode::kSafetyViolation, "motion segment leaves every polytope");
  }
  const int ticks = std::max(1, static_cast<int>(std::ceil(length / step - 1e-9)));
  for (int i = 1; i <= ticks; ++i) {
    const Point p = i == ticks ? target : Point(start + (static_cast<double>(i) / ticks) * (target - start));
    if (!fs.Contains(p, 0.0)) {
      throw Error(ErrorCode::kSafetyViolation, "robot left the free space");
    }
    state.position = p;
    state.trajectory.push_back(TrajectorySample{++state.tick, p, RobotMode::kMove, fs.size()});
  }
}

ExplorationResult RunExploration(const WorldModel& world, const SensorModel& sensor,
                                 const ExploreParams& params, const Point& start, int budget,
                                 const std::function<void(const ScanEvent&)>& on_scan) {
  world.Validate();
  sensor.Validate();
  const int d = world.dim();
  params.Validate(d);
  if (start.size() != d) throw Error(ErrorCode::kInvalidArgument, "start has wrong dimension");
  if (world.Clearance(start) < params.robot_radius + params.iris.seed_ball_radius) {
    throw Error(ErrorCode::kInitialClearanceViolation,
                "start needs clearance of robot radius plus seed ball radius");
  }

  ExplorationResult result{FreeSpace(params.robot_radius), TransitionGraph(), {},
                           ExplorationGrid(world.bounds, params.cell_size), 0, ""};
  RobotState state;
  state.position = start;
  state.radius = params.robot_radius;
  state.x_des = start;
  state.trajectory.push_back(TrajectorySample{0, start, RobotMode::kScan, 0});

  const int max_scans = std::max(1, budget);
  std::vector<Point> scan_poses;
  std::map<std::size_t, int> attempts;
  std::set<std::size_t> blacklist;
  std::optional<Waypoint> goal;
  std::size_t hops = 0;

  auto next_goal = [&]() {
    goal = FrontierWaypoint(result.grid, result.fs, state.position, scan_poses,
                            params.revisit_radius, blacklist);
    if (goal) {
      state.x_des = goal->position;
      state.mode = RobotMode::kMove;
      hops = 0;
    }
    return goal.has_value();
  };
  auto give_up_on_goal = [&]() {
    if (++attempts[goal->frontier_cell] >= params.unreachable_limit) {
      blacklist.insert(goal->frontier_cell);
    }
  };

  while (true) {
    if (state.mode == RobotMode::kScan) {
      SensorModel s = sensor;
      s.rng_seed = Mix(sensor.rng_seed, static_cast<std::uint64_t>(result.scans));
      const ScanRays rays = CastScan(world, s, state.position);
      result.grid.Integrate(rays);
      std::vector<Point> candidates;
      for (std::size_t c : result.grid.InteriorFreeCells()) {
        candidates.push_back(result.grid.Center(c));
      }
      const UpdateReport update =
          UpdateFreeSpace(state.position, rays.cloud, result.fs, params, candidates,
                          Mix(params.seed, static_cast<std::uint64_t>(result.scans)));
      UpdateDiscreteGraph(result.graph, result.fs);
      scan_poses.push_back(state.position);
      ++result.scans;
      if (!result.fs.Contains(state.position, 0.0)) {
        throw Error(ErrorCode::kInitialClearanceViolation,
                    "the first free polytope does not contain the start");
      }
      state.trajectory.push_back(
          TrajectorySample{++state.tick, state.position, RobotMode::kScan, result.fs.size()});
      if (on_scan) {
        on_scan(ScanEvent{result.scans, &state.position, &rays, &result.fs, &result.graph,
                          &update});
      }
      if (!next_goal()) {
        result.termination = blacklist.empty() ? "done" : "unreachable";
        break;
      }
      if (result.scans >= max_scans) {
        result.termination = "budget";
        break;
      }
      continue;
    }

    Point next;
    try {
      next = GenerateXNext(state.position, state.x_des, result.graph, result.fs);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnreachable) throw;
      give_up_on_goal();
      if (!next_goal()) {
        result.termination = "unreachable";
        break;
      }
      continue;
    }
    Navigate(state, next, params.step, result.fs);
    if ((state.position - state.x_des).norm() <= params.epsilon) {
      state.mode = RobotMode::kScan;
    } else if (++hops > 4 * result.fs.size() + 8) {
      give_up_on_goal();
      if (!next_goal()) {
        result.termination = "unreachable";
        break;
      }
    }
  }
  result.trajectory = std::move(state.trajectory);
  return result;
}

}  // namespace polyscan
