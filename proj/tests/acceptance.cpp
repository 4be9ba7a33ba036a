// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.
//
// Environment: POLYSCAN_WORLDS (bundled worlds, default "worlds") and
// POLYSCAN_CLI (the command line binary, needed by the determinism check).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "polyscan/io.hpp"
#include "support.hpp"
#include "world_oracles.hpp"

namespace fs = std::filesystem;
using namespace polyscan;
using namespace polyscan::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

std::string Fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string WorldsDir() {
  const char* env = std::getenv("POLYSCAN_WORLDS");
  return env ? env : "worlds";
}

// Counter-clockwise hull of 2D points (monotone chain).
std::vector<Eigen::Vector2d> Hull2(std::vector<Eigen::Vector2d> pts) {
  std::sort(pts.begin(), pts.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  if (pts.size() < 3) return pts;
  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a - o).x() * (b - o).y() - (a - o).y() * (b - o).x();
  };
  std::vector<Eigen::Vector2d> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

// Distance from x to a convex polygon given by counter-clockwise vertices.
double DistanceToPolygon(const Eigen::Vector2d& x, const std::vector<Eigen::Vector2d>& poly) {
  bool inside = true;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Eigen::Vector2d& a = poly[i];
    const Eigen::Vector2d& b = poly[(i + 1) % poly.size()];
    const Eigen::Vector2d e = b - a;
    if (e.x() * (x - a).y() - e.y() * (x - a).x() < 0) inside = false;
    best = std::min(best, SegmentDistance(x, a, b));
  }
  return inside ? 0.0 : best;
}

Outcome ConvDifferenceOracle() {
  std::mt19937_64 rng(101);
  int pairs = 0, degenerate = 0;
  double worst = 0.0;
  bool ok = true;
  while (pairs < 200) {
    const Polytope a = RandomPolytope(rng, 2, P(0.5, 0.5), 1.0);
    const Polytope b = RandomPolytope(rng, 2, P(Uniform(rng, 0.3, 1.2), Uniform(rng, 0.3, 1.2)), 1.0);
    if (!Intersect(a, b)) continue;
    ++pairs;
    // Grid samples of a that are not in the interior of b.
    std::vector<Eigen::Vector2d> samples;
    const Point lo = a.LowerCorner(), hi = a.UpperCorner();
    for (double x = std::floor(lo[0] / 0.01) * 0.01; x <= hi[0]; x += 0.01) {
      for (double y = std::floor(lo[1] / 0.01) * 0.01; y <= hi[1]; y += 0.01) {
        const Point s = P(x, y);
        if (!InsideRows(a.halfspaces(), s, 0.0)) continue;
        bool in_b = true;
        for (const Halfspace& h : b.halfspaces()) in_b = in_b && h.normal.dot(s) < h.offset;
        if (!in_b) samples.emplace_back(x, y);
      }
    }
    // The boundary of a \ b is sampled at the same pitch; a lattice alone
    // misses wedges thinner than the pitch.
    auto edge_samples = [&](const Polytope& poly, const std::function<bool(const Point&)>& keep) {
      std::vector<Eigen::Vector2d> ring;
      for (const Point& v : poly.vertices()) ring.emplace_back(v[0], v[1]);
      ring = Hull2(ring);
      for (std::size_t i = 0; i < ring.size(); ++i) {
        const Eigen::Vector2d u = ring[i], w = ring[(i + 1) % ring.size()];
        const int steps = static_cast<int>(std::ceil((w - u).norm() / 0.01));
        for (int k = 0; k <= steps; ++k) {
          const Eigen::Vector2d q = u + (w - u) * (static_cast<double>(k) / steps);
          if (keep(P(q.x(), q.y()))) samples.push_back(q);
        }
      }
    };
    edge_samples(a, [&](const Point& s) {
      for (const Halfspace& h : b.halfspaces()) {
        if (h.normal.dot(s) >= h.offset) return true;
      }
      return false;
    });
    edge_samples(b, [&](const Point& s) { return InsideRows(a.halfspaces(), s, 1e-12); });
    const std::vector<Eigen::Vector2d> oracle = Hull2(samples);
    std::optional<Polytope> diff;
    try {
      diff = ConvDifference(a, b);
    } catch (const Error&) {
    }
    std::vector<Eigen::Vector2d> mine;
    if (diff) {
      for (const Point& v : diff->vertices()) mine.emplace_back(v[0], v[1]);
    }
    if (!diff || oracle.size() < 3) {
      // An empty or flat difference on one side: the other side must be
      // within tolerance of it (or of a point when both are empty).
      ++degenerate;
      const std::vector<Eigen::Vector2d>& some = diff ? mine : oracle;
      const std::vector<Eigen::Vector2d>& other = diff ? samples : std::vector<Eigen::Vector2d>{};
      double h = 0.0;
      for (const auto& v : some) {
        double d = other.empty() ? 0.0 : std::numeric_limits<double>::infinity();
        for (const auto& s : other) d = std::min(d, (s - v).norm());
        for (const auto& u : some) d = other.empty() ? std::max(d, (u - v).norm()) : d;
        h = std::max(h, d);
      }
      worst = std::max(worst, h);
      if (h > 0.02) ok = false;
      continue;
    }
    mine = Hull2(mine);
    double h = 0.0;
    for (const auto& v : mine) h = std::max(h, DistanceToPolygon(v, oracle));
    for (const auto& v : oracle) h = std::max(h, DistanceToPolygon(v, mine));
    worst = std::max(worst, h);
    if (h > 0.02) ok = false;
  }
  ok = ok && worst <= 0.02;
  return {ok, "200 pairs (" + std::to_string(degenerate) + " empty differences), max Hausdorff " +
                  Fmt("%.4f", worst) + " <= 0.02"};
}

Outcome TerminationBound() {
  std::mt19937_64 rng(202);
  int worst_margin = std::numeric_limits<int>::max();
  bool ok = true;
  int max_points = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = trial % 4 == 3 ? 3 : 2;
    PointCloud cloud{{}, Point::Zero(d)};
    const int target = static_cast<int>(Uniform(rng, 200, 5000));
    const int walls = 1 + trial % 6;
    const double noise = Uniform(rng, 0.0, 0.03);
    std::normal_distribution<double> jitter(0.0, noise);
    const int scattered = static_cast<int>(target * Uniform(rng, 0.0, 0.3));
    for (int w = 0; w < walls; ++w) {
      // A random plane patch (segment in 2D) with noisy samples.
      Point c(d), u(d), v(d);
      for (int k = 0; k < d; ++k) {
        c[k] = Uniform(rng, -6, 6);
        u[k] = Uniform(rng, -1, 1);
        v[k] = Uniform(rng, -1, 1);
      }
      u.normalize();
      v -= v.dot(u) * u;
      v.normalize();
      Point normal = d == 2 ? Point(P(-u[1], u[0])) : Point(Eigen::Vector3d(u).cross(Eigen::Vector3d(v)));
      const double len = Uniform(rng, 1, 6);
      for (int i = 0; i < (target - scattered) / walls; ++i) {
        Point p = c + Uniform(rng, -len / 2, len / 2) * u + jitter(rng) * normal;
        if (d == 3) p += Uniform(rng, -len / 2, len / 2) * v;
        cloud.points.push_back(p);
      }
    }
    while (static_cast<int>(cloud.points.size()) < target) {
      Point p(d);
      for (int k = 0; k < d; ++k) p[k] = Uniform(rng, -8, 8);
      cloud.points.push_back(p);
    }
    max_points = std::max(max_points, static_cast<int>(cloud.points.size()));
    PreprocessParams params;
    params.rng_seed = trial;
    const PreprocessReport r = PreprocessCloud(cloud, params);
    const double n = static_cast<double>(r.cropped.points.size());
    const double bound = params.n2 * (n / params.n3 + 1);
    worst_margin = std::min(worst_margin, static_cast<int>(std::floor(bound)) - r.iterations);
    if (r.iterations > bound) ok = false;
  }
  return {ok, "100 clouds up to " + std::to_string(max_points) +
                  " points, smallest slack to the iteration bound " + std::to_string(worst_margin)};
}

Outcome IrisSoundness() {
  std::mt19937_64 rng(303);
  int scenes = 0;
  int violations = 0;
  double worst_drop = 0.0;
  while (scenes < 50) {
    const int d = scenes % 5 == 4 ? 3 : 2;
    const Polytope bounds = Polytope::Box(Point::Zero(d), Point::Constant(d, 10));
    std::vector<Polytope> obs;
    const int n = 3 + static_cast<int>(Uniform(rng, 0, 8));
    for (int i = 0; i < n; ++i) {
      Point c(d);
      for (int k = 0; k < d; ++k) c[k] = Uniform(rng, 1, 9);
      obs.push_back(RandomPolytope(rng, d, c, Uniform(rng, 0.5, 3.0), 8));
    }
    Point seed(d);
    for (int k = 0; k < d; ++k) seed[k] = Uniform(rng, 0.5, 9.5);
    const bool blocked = std::any_of(obs.begin(), obs.end(), [&](const Polytope& o) {
      return InsideRows(o.halfspaces(), seed, 0.1);
    });
    if (blocked) continue;
    ++scenes;
    const IrisResult r = InflateRegion(obs, seed, bounds);
    for (const Polytope& o : obs) {
      for (const Point& v : o.vertices()) {
        // Outside: some row of the region is violated or tight within 1e-7.
        bool outside = false;
        for (const Halfspace& h : r.region.halfspaces()) {
          outside = outside || h.normal.dot(v) - h.offset >= -1e-7 * h.normal.norm();
        }
        violations += outside ? 0 : 1;
      }
    }
    for (std::size_t i = 1; i < r.logdet_history.size(); ++i) {
      const double drop = std::exp(r.logdet_history[i - 1]) - std::exp(r.logdet_history[i]);
      worst_drop = std::max(worst_drop, drop);
    }
  }
  return {violations == 0 && worst_drop <= 1e-9,
          "50 scenes, " + std::to_string(violations) + " obstacle vertices inside, largest det decrease " +
              Fmt("%.2e", worst_drop) + " <= 1e-9"};
}

// Distance from an interior point to the boundary: edges in 2D, facet planes in 3D.
double BoundaryDistance(const Polytope& p, const Point& x) {
  if (p.dim() == 2) {
    std::vector<Eigen::Vector2d> v;
    for (const Point& q : p.vertices()) v.emplace_back(q[0], q[1]);
    v = Hull2(v);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
      best = std::min(best, SegmentDistance(Eigen::Vector2d(x[0], x[1]), v[i], v[(i + 1) % v.size()]));
    }
    return best;
  }
  double best = std::numeric_limits<double>::infinity();
  for (const Halfspace& h : p.halfspaces()) {
    best = std::min(best, (h.offset - h.normal.dot(x)) / h.normal.norm());
  }
  return best;
}

Outcome ShrinkCorrectness() {
  std::mt19937_64 rng(404);
  double worst = std::numeric_limits<double>::infinity();
  int checked = 0, empty = 0;
  for (int i = 0; i < 100; ++i) {
    const int d = i % 3 == 2 ? 3 : 2;
    const Polytope p = RandomPolytope(rng, d, Point::Zero(d), Uniform(rng, 0.5, 4.0), 10);
    for (double r : {0.05, 0.2}) {
      const std::optional<Polytope> s = Shrink(p, r);
      if (!s) {
        ++empty;
        continue;
      }
      for (const Point& v : s->vertices()) {
        worst = std::min(worst, BoundaryDistance(p, v) - r);
        ++checked;
      }
    }
  }
  return {worst >= -1e-7, std::to_string(checked) + " shrunk vertices (" + std::to_string(empty) +
                              " empty shrinks), worst distance - r = " + Fmt("%.2e", worst) + " >= -1e-7"};
}

Outcome GraphExactness() {
  std::mt19937_64 rng(505);
  int mismatches = 0, edges = 0, queries = 0, membership = 0;
  for (int trial = 0; trial < 100; ++trial) {
    FreeSpace space;
    const int n = 2 + trial % 11;
    for (int i = 0; i < n; ++i) {
      const double x = Uniform(rng, 0, 5), y = Uniform(rng, 0, 5);
      if (trial % 2) {
        space.Insert(Box2(x, y, x + Uniform(rng, 0.5, 2.5), y + Uniform(rng, 0.5, 2.5)));
      } else {
        space.Insert(RandomPolytope(rng, 2, P(x, y), Uniform(rng, 1.0, 3.0), 8));
      }
    }
    const TransitionGraph g = BuildDiscreteGraph(space);
    std::vector<PolytopeId> ids;
    for (const auto& [id, c] : g.nodes()) ids.push_back(id);
    std::vector<std::tuple<int, int, double>> weighted;
    for (const auto& [key, e] : g.edges()) {
      ++edges;
      const Polytope& p1 = *space.Find(e.a);
      const Polytope& p2 = *space.Find(e.b);
      const bool ok = p1.Contains(g.nodes().at(e.a), 0.0) && p1.Contains(e.cross, 0.0) &&
                      p2.Contains(g.nodes().at(e.b), 0.0) && p2.Contains(e.cross, 0.0);
      membership += ok ? 0 : 1;
      const int ia = static_cast<int>(std::find(ids.begin(), ids.end(), e.a) - ids.begin());
      const int ib = static_cast<int>(std::find(ids.begin(), ids.end(), e.b) - ids.begin());
      weighted.emplace_back(ia, ib, e.distance);
    }
    // Floyd-Warshall with successor tracking; the oracle cost is its path
    // summed edge by edge from the start, the same order the planner uses.
    const int m = static_cast<int>(ids.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> dist(m, std::vector<double>(m, inf));
    std::vector<std::vector<int>> next(m, std::vector<int>(m, -1));
    std::map<std::pair<int, int>, double> w;
    for (int i = 0; i < m; ++i) {
      dist[i][i] = 0;
      next[i][i] = i;
    }
    for (const auto& [a, b, d] : weighted) {
      dist[a][b] = dist[b][a] = d;
      next[a][b] = b;
      next[b][a] = a;
      w[{a, b}] = w[{b, a}] = d;
    }
    for (int k = 0; k < m; ++k) {
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          if (dist[i][k] + dist[k][j] < dist[i][j]) {
            dist[i][j] = dist[i][k] + dist[k][j];
            next[i][j] = next[i][k];
          }
        }
      }
    }
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        ++queries;
        if (dist[i][j] == inf) {
          try {
            ShortestPath(g, ids[i], ids[j]);
            ++mismatches;
          } catch (const Error& e) {
            mismatches += e.code() == ErrorCode::kUnreachable ? 0 : 1;
          }
          continue;
        }
        double oracle = 0.0;
        for (int at = i; at != j; at = next[at][j]) oracle += w[{at, next[at][j]}];
        const GraphPath path = ShortestPath(g, ids[i], ids[j]);
        if (path.cost != oracle) ++mismatches;
      }
    }
  }
  return {mismatches == 0 && membership == 0,
          std::to_string(queries) + " queries, " + std::to_string(mismatches) + " cost mismatches; " +
              std::to_string(edges) + " edges, " + std::to_string(membership) + " membership failures"};
}

// Every tick after the first scan must be inside fs (exact halfspace check).
Outcome Safety() {
  const WorldFile wf = WorldFromJson(ReadJsonFile(fs::path(WorldsDir()) / "office.json"));
  int runs = 0, violations = 0, outside = 0, ticks = 0;
  double min_clearance = std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ExploreParams params;
    params.seed = seed;
    SensorModel sensor;
    sensor.rng_seed = seed;
    try {
      const ExplorationResult r = RunExploration(wf.world, sensor, params, *wf.start, 15);
      ++runs;
      for (const TrajectorySample& s : r.trajectory) {
        ++ticks;
        const bool in = std::any_of(r.fs.polytopes().begin(), r.fs.polytopes().end(),
                                    [&](const Polytope& p) { return InsideRows(p.halfspaces(), s.position, 0.0); });
        outside += in ? 0 : 1;
        min_clearance = std::min(min_clearance, OracleClearance(wf.world, s.position));
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSafetyViolation) throw;
      ++violations;
    }
  }
  return {runs == 10 && violations == 0 && outside == 0,
          std::to_string(runs) + " runs, " + std::to_string(violations) + " safety violations, " +
              std::to_string(outside) + " of " + std::to_string(ticks) + " ticks outside fs, min clearance " +
              Fmt("%.3f", min_clearance) + " m"};
}

Outcome Coverage7() {
  const WorldFile wf = WorldFromJson(ReadJsonFile(fs::path(WorldsDir()) / "open_maze.json"));
  const ExploreParams params;
  const ExplorationResult r = RunExploration(wf.world, SensorModel{}, params, *wf.start, 15);
  const Coverage c = CoverageOf(wf.world, r.fs, params.robot_radius, *wf.start, 100000, 7);
  const int components = ComponentCount(r.graph);
  return {r.scans <= 15 && c.fraction >= 0.90 && components == 1,
          std::to_string(r.scans) + " scans (" + r.termination + "), coverage " + Fmt("%.4f", c.fraction) +
              " >= 0.90 over " + std::to_string(c.reachable_samples) + " samples, " +
              std::to_string(components) + " component(s)"};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome Determinism() {
  const char* cli = std::getenv("POLYSCAN_CLI");
  if (!cli) return {false, "POLYSCAN_CLI is not set"};
  const fs::path work = fs::temp_directory_path() / "polyscan_acceptance";
  fs::remove_all(work);
  std::vector<fs::path> worlds;
  for (const auto& entry : fs::directory_iterator(WorldsDir())) {
    if (entry.path().extension() == ".json") worlds.push_back(entry.path());
  }
  std::sort(worlds.begin(), worlds.end());
  int same = 0, compared = 0;
  std::string differing;
  for (const fs::path& world : worlds) {
    fs::path config = world;
    config.replace_extension(".cfg");
    for (int run = 0; run < 2; ++run) {
      const fs::path out = work / world.stem() / std::to_string(run);
      std::string cmd = std::string("\"") + cli + "\" explore \"" + world.string() + "\" --seed 42 --out-dir \"" +
                        out.string() + "\"";
      if (fs::exists(config)) cmd += " --config \"" + config.string() + "\"";
      cmd += " > /dev/null";
      if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
    }
    for (const char* file : {"freespace.json", "graph.json"}) {
      ++compared;
      const std::string a = Slurp(work / world.stem() / "0" / file);
      const std::string b = Slurp(work / world.stem() / "1" / file);
      if (!a.empty() && a == b) {
        ++same;
      } else {
        differing += " " + world.stem().string() + "/" + file;
      }
    }
  }
  return {compared > 0 && same == compared,
          std::to_string(worlds.size()) + " worlds, " + std::to_string(same) + "/" + std::to_string(compared) +
              " files byte-identical" + (differing.empty() ? "" : ", differ:" + differing)};
}

Outcome SolverKernels() {
  std::mt19937_64 rng(909);
  double worst_axes = 0.0, worst_clamp = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int d = 2 + i % 2;
    Point lo(d), hi(d);
    for (int k = 0; k < d; ++k) {
      lo[k] = Uniform(rng, -5, 5);
      hi[k] = lo[k] + Uniform(rng, 0.1, 8);
    }
    const Ellipsoid e = MaxVolumeEllipsoid(Polytope::Box(lo, hi));
    // Semi-axes are the singular values of the shape matrix; a box gives the half widths.
    Eigen::VectorXd axes = Eigen::JacobiSVD<Eigen::MatrixXd>(e.shape).singularValues();
    Eigen::VectorXd half = (hi - lo) / 2;
    std::sort(axes.data(), axes.data() + d);
    std::sort(half.data(), half.data() + d);
    worst_axes = std::max(worst_axes, ((axes - half).array() / half.array()).abs().maxCoeff());
  }
  for (int i = 0; i < 1000; ++i) {
    const int d = 2 + i % 2;
    Point lo(d), hi(d), x(d);
    for (int k = 0; k < d; ++k) {
      lo[k] = Uniform(rng, -3, 2);
      hi[k] = lo[k] + Uniform(rng, 0.05, 4);
      x[k] = Uniform(rng, -6, 6);
    }
    const Point q = QpProject(x, Polytope::Box(lo, hi).halfspaces());
    worst_clamp = std::max(worst_clamp, (q - x.cwiseMax(lo).cwiseMin(hi)).lpNorm<Eigen::Infinity>());
  }
  return {worst_axes <= 1e-6 && worst_clamp <= 1e-8,
          "1000 ellipsoids, worst relative semi-axis error " + Fmt("%.2e", worst_axes) +
              " <= 1e-6; 1000 projections, worst clamp error " + Fmt("%.2e", worst_clamp) + " <= 1e-8"};
}

struct Criterion {
  int number;
  const char* name;
  double limit_s;  // 0: no limit
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "convex difference vs sampled hull", 30, ConvDifferenceOracle},
      {2, "segmentation iteration bound", 60, TerminationBound},
      {3, "region inflation soundness and monotonicity", 120, IrisSoundness},
      {4, "robot-radius shrink", 10, ShrinkCorrectness},
      {5, "graph and planning exactness", 10, GraphExactness},
      {6, "exploration safety on the office world", 300, Safety},
      {7, "open-maze coverage and connectivity", 180, Coverage7},
      {8, "determinism of explore outputs", 0, Determinism},
      {9, "solver kernels on boxes", 20, SolverKernels},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("aborted: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = c.limit_s == 0 || secs < c.limit_s;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::string timing = Fmt("%.1f s", secs);
    if (c.limit_s > 0) timing += Fmt(" (< %.0f s)", c.limit_s);
    std::cout << (pass ? "PASS" : "FAIL") << "  " << c.number << ". " << c.name << ": " << o.detail << "; "
              << timing << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
