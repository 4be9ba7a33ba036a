// Command line front end: discretize one scan, run a simulated exploration,
// plan through a saved free space, or render any output as SVG.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "polyscan/io.hpp"

namespace fs = std::filesystem;
using namespace polyscan;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kInfeasibleExit = 3 };

int ExitFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return kUsage;
    case ErrorCode::kUnreachable:
    case ErrorCode::kEmpty:
    case ErrorCode::kEmptySet:
    case ErrorCode::kEmptyIntersection:
    case ErrorCode::kEmptyCloud:
    case ErrorCode::kInfeasible:
    case ErrorCode::kNoOverlap:
    case ErrorCode::kSeedInObstacle:
    case ErrorCode::kSeedOutsideBounds:
    case ErrorCode::kPoseInObstacle:
    case ErrorCode::kInitialClearanceViolation:
      return kInfeasibleExit;
    default:
      return kData;
  }
}

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::optional<int> budget;
  std::optional<double> robot_radius;
  bool svg = false;
  std::vector<std::string> set;
  std::string origin, start, goal;
  std::string input;
  std::string graph;
  std::vector<std::string> inputs;
  std::string output;
};

// Config file first, then flags.
RunConfig Resolve(const Options& o) {
  RunConfig cfg;
  if (!o.config.empty()) ApplyConfigFile(o.config, cfg);
  for (const std::string& kv : o.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kInvalidArgument, "--set expects key=value");
    SetConfigValue(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.budget) cfg.budget = *o.budget;
  if (o.robot_radius) cfg.explore.robot_radius = *o.robot_radius;
  if (!o.origin.empty()) cfg.origin = ParsePointArg(o.origin);
  if (!o.start.empty()) cfg.start = ParsePointArg(o.start);
  if (!o.goal.empty()) cfg.goal = ParsePointArg(o.goal);
  cfg.explore.seed = cfg.seed;
  cfg.sensor.rng_seed = cfg.seed;
  return cfg;
}

// Input files are data: anything wrong with them is a data error.
template <typename F>
auto LoadData(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInvalidArgument) throw;
    const std::string msg = e.what();
    throw Error(ErrorCode::kParse, msg.substr(msg.find(": ") + 2));
  }
}

fs::path OutDir(const Options& o) {
  fs::create_directories(o.out_dir);
  return o.out_dir;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
}

template <typename F>
void WriteStream(const fs::path& path, F&& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  f(out);
}

std::vector<Polytope> Polys(const FreeSpace& space) {
  return {space.polytopes().begin(), space.polytopes().end()};
}

int Discretize(const Options& o) {
  const RunConfig cfg = Resolve(o);
  if (!cfg.origin) throw Error(ErrorCode::kInvalidArgument, "discretize needs --origin");
  const PointCloud cloud = LoadData([&] { return ReadPointCloud(o.input, *cfg.origin); });
  FreeSpace space(cfg.explore.robot_radius);
  const UpdateReport rep = UpdateFreeSpace(*cfg.origin, cloud, space, cfg.explore, {}, cfg.seed);

  const fs::path dir = OutDir(o);
  WriteJsonFile(dir / "obstacles.json", ObstaclesToJson(rep.planes));
  WriteJsonFile(dir / "freespace.json", FreeSpaceToJson(space));
  SvgScene scene;
  scene.title = fs::path(o.input).filename().string();
  scene.obstacles = rep.planes;
  scene.free_space = Polys(space);
  scene.cloud = cloud.points;
  scene.markers = {*cfg.origin};
  WriteText(dir / "discretize.svg", RenderSvg(scene));
  std::cout << cloud.points.size() << " points, " << rep.planes.size() << " obstacles, "
            << space.size() << " free polytopes\n";
  return kOk;
}

int Explore(const Options& o) {
  const RunConfig cfg = Resolve(o);
  const WorldFile wf = LoadData([&] {
    WorldFile w = WorldFromJson(ReadJsonFile(o.input));
    w.world.Validate();
    return w;
  });
  const std::optional<Point> start = cfg.start ? cfg.start : wf.start;
  if (!start) throw Error(ErrorCode::kInvalidArgument, "no start in the world file; pass --start");

  const fs::path dir = OutDir(o);
  if (o.svg) fs::create_directories(dir / "frames");
  auto frame = [&](const ScanEvent& e) {
    if (!o.svg) return;
    SvgScene scene;
    char name[32];
    std::snprintf(name, sizeof name, "scan_%03d", e.scan);
    scene.title = name;
    scene.bounds = wf.world.bounds;
    scene.obstacles = wf.world.obstacles;
    scene.free_space = Polys(*e.fs);
    scene.graph = e.graph;
    scene.cloud = e.rays->cloud.points;
    scene.markers = {*e.position};
    WriteText(dir / "frames" / (std::string(name) + ".svg"), RenderSvg(scene));
  };
  const ExplorationResult r =
      RunExploration(wf.world, cfg.sensor, cfg.explore, *start, cfg.budget, frame);

  WriteJsonFile(dir / "freespace.json", FreeSpaceToJson(r.fs));
  WriteJsonFile(dir / "graph.json", GraphToJson(r.graph));
  WriteStream(dir / "trajectory.csv", [&](std::ostream& out) { WriteTrajectoryCsv(out, r.trajectory); });
  WriteStream(dir / "grid.pgm", [&](std::ostream& out) { WriteGridPgm(out, r.grid); });
  Json config = Json::object();
  for (const auto& [key, value] : ConfigValues(cfg)) config[key] = value;
  Json meta{{"world", fs::path(o.input).filename().string()},
            {"start", PointToJson(*start)},
            {"scans", r.scans},
            {"termination", r.termination},
            {"polytopes", r.fs.size()},
            {"edges", r.graph.edges().size()},
            {"ticks", r.trajectory.empty() ? 0 : r.trajectory.back().tick},
            {"config", config}};
  WriteJsonFile(dir / "run.json", meta);
  if (o.svg) {
    SvgScene scene;
    scene.title = fs::path(o.input).stem().string();
    scene.bounds = wf.world.bounds;
    scene.obstacles = wf.world.obstacles;
    scene.free_space = Polys(r.fs);
    scene.graph = &r.graph;
    for (const TrajectorySample& s : r.trajectory) scene.trajectory.push_back(s.position);
    WriteText(dir / "explore.svg", RenderSvg(scene));
  }
  std::cout << r.scans << " scans, " << r.fs.size() << " free polytopes, "
            << r.graph.edges().size() << " edges, " << r.termination << "\n";
  return kOk;
}

int Plan(const Options& o) {
  const RunConfig cfg = Resolve(o);
  if (!cfg.start || !cfg.goal) throw Error(ErrorCode::kInvalidArgument, "plan needs --start and --goal");
  const FreeSpace space = LoadData([&] { return FreeSpaceFromJson(ReadJsonFile(o.input)); });
  const TransitionGraph g = o.graph.empty()
                                ? BuildDiscreteGraph(space)
                                : LoadData([&] { return GraphFromJson(ReadJsonFile(o.graph)); });
  const Point goal = *cfg.goal;
  Point x = *cfg.start;
  if (!Locate(space, x)) throw Error(ErrorCode::kUnreachable, "start is outside the free space");
  if (!Locate(space, goal)) throw Error(ErrorCode::kUnreachable, "goal is outside the free space");

  std::vector<Point> waypoints;
  double length = 0.0;
  do {
    if (waypoints.size() > space.size() + 1) {
      throw Error(ErrorCode::kUnreachable, "no progress toward the goal");
    }
    const Point next = GenerateXNext(x, goal, g, space);
    length += (next - x).norm();
    waypoints.push_back(next);
    x = next;
  } while (x != goal);

  Json list = Json::array();
  for (const Point& p : waypoints) list.push_back(PointToJson(p));
  const fs::path dir = OutDir(o);
  WriteJsonFile(dir / "waypoints.json", Json{{"start", PointToJson(*cfg.start)},
                                             {"goal", PointToJson(goal)},
                                             {"waypoints", list},
                                             {"length", length}});
  if (o.svg) {
    SvgScene scene;
    scene.title = "plan";
    scene.free_space = Polys(space);
    scene.graph = &g;
    scene.trajectory = {*cfg.start};
    for (const Point& p : waypoints) scene.trajectory.push_back(p);
    scene.markers = {*cfg.start, goal};
    WriteText(dir / "plan.svg", RenderSvg(scene));
  }
  std::cout << waypoints.size() << " waypoints, length " << length << "\n";
  return kOk;
}

int Render(const Options& o) {
  SvgScene scene;
  std::optional<TransitionGraph> graph;
  std::vector<std::string> inputs = o.inputs;
  if (!o.graph.empty()) inputs.push_back(o.graph);
  for (const std::string& path : inputs) {
    const Json j = LoadData([&] { return ReadJsonFile(path); });
    if (!j.is_object()) throw Error(ErrorCode::kParse, path + ": expected a JSON object");
    LoadData([&] {
      if (j.contains("polytopes")) {
        const FreeSpace space = FreeSpaceFromJson(j);
        for (const Polytope& p : space.polytopes()) scene.free_space.push_back(p);
      } else if (j.contains("bounds")) {
        const WorldFile w = WorldFromJson(j);
        scene.bounds = w.world.bounds;
        for (const Polytope& p : w.world.obstacles) scene.obstacles.push_back(p);
        if (w.start) scene.markers.push_back(*w.start);
      } else if (j.contains("obstacles")) {
        for (const Polytope& p : ObstaclesFromJson(j)) scene.obstacles.push_back(p);
      } else if (j.contains("nodes")) {
        graph = GraphFromJson(j);
      } else if (j.contains("waypoints")) {
        scene.trajectory.push_back(PointFromJson(j.at("start"), path + ": start"));
        for (const Json& p : j.at("waypoints")) scene.trajectory.push_back(PointFromJson(p, path));
        scene.markers.push_back(scene.trajectory.front());
        scene.markers.push_back(scene.trajectory.back());
      } else {
        throw Error(ErrorCode::kParse, path + ": not a free space, world, obstacle, graph or plan file");
      }
      return 0;
    });
  }
  if (graph) scene.graph = &*graph;
  scene.title = fs::path(o.inputs.front()).stem().string();
  const fs::path out = o.output.empty() ? OutDir(o) / (scene.title + ".svg") : fs::path(o.output);
  WriteText(out, RenderSvg(scene));
  std::cout << out.string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free-space discretization and exploration in convex polytopes"};
  app.require_subcommand(1);
  Options o;
  auto global = [&](CLI::App* cmd) {
    cmd->option_defaults()->always_capture_default();
    cmd->add_option("--config", o.config, "key = value config file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--out-dir", o.out_dir, "output directory");
    cmd->add_option("--budget", o.budget, "maximum number of scans");
    cmd->add_option("--robot-radius", o.robot_radius, "robot radius (m)");
    cmd->add_flag("--svg", o.svg, "write SVG output");
    cmd->add_option("--set", o.set, "override one config key, key=value");
  };

  CLI::App* discretize = app.add_subcommand("discretize", "free polytopes from one point cloud");
  global(discretize);
  discretize->add_option("cloud", o.input, "PCD or CSV point cloud")->required();
  discretize->add_option("--origin", o.origin, "sensor position x,y[,z]");

  CLI::App* explore = app.add_subcommand("explore", "simulated exploration of a world file");
  global(explore);
  explore->add_option("world", o.input, "world JSON")->required();
  explore->add_option("--start", o.start, "start position x,y[,z]");

  CLI::App* plan = app.add_subcommand("plan", "waypoints through a saved free space");
  global(plan);
  plan->add_option("freespace", o.input, "free space JSON")->required();
  plan->add_option("--graph", o.graph, "graph JSON (rebuilt when omitted)");
  plan->add_option("--start", o.start, "start x,y[,z]");
  plan->add_option("--goal", o.goal, "goal x,y[,z]");

  CLI::App* render = app.add_subcommand("render", "SVG of output files");
  global(render);
  render->add_option("inputs", o.inputs, "JSON files to overlay")->required();
  render->add_option("--graph", o.graph, "graph JSON to overlay");
  render->add_option("-o,--output", o.output, "SVG path (default <out-dir>/<first input>.svg)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*discretize) return Discretize(o);
    if (*explore) return Explore(o);
    if (*plan) return Plan(o);
    return Render(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitFor(e.code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
}
