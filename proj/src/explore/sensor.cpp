#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "polyscan/explore.hpp"

namespace polyscan {

void SensorModel::Validate() const {
  if (!(range > 0)) throw Error(ErrorCode::kInvalidArgument, "sensor range must be > 0");
  if (rays_azimuth < 1 || rays_elevation < 1) {
    throw Error(ErrorCode::kInvalidArgument, "ray counts must be >= 1");
  }
  if (!(fov_h > 0 && fov_h <= 360) || !(fov_v > 0 && fov_v <= 180)) {
    throw Error(ErrorCode::kInvalidArgument, "field of view out of range");
  }
  if (!(noise_sigma >= 0)) throw Error(ErrorCode::kInvalidArgument, "noise_sigma must be >= 0");
}

std::vector<Point> RayDirections(const SensorModel& sensor, int dim) {
  sensor.Validate();
  const double deg = std::numbers::pi / 180.0;
  std::vector<double> azimuths;
  if (sensor.mode == SensorMode::kOmnidirectional) {
    for (int i = 0; i < sensor.rays_azimuth; ++i) {
      azimuths.push_back(2.0 * std::numbers::pi * i / sensor.rays_azimuth);
    }
  } else {
    // A full turn in sweeps of fov_h; the union covers every heading.
    const int sweeps = static_cast<int>(std::ceil(360.0 / sensor.fov_h - 1e-9));
    for (int s = 0; s < sweeps; ++s) {
      for (int i = 0; i < sensor.rays_azimuth; ++i) {
        const double offset = ((i + 0.5) / sensor.rays_azimuth - 0.5) * sensor.fov_h;
        azimuths.push_back((s * sensor.fov_h + offset) * deg);
      }
    }
  }
  std::vector<Point> dirs;
  if (dim == 2) {
    for (double a : azimuths) {
      Point u(2);
      u << std::cos(a), std::sin(a);
      dirs.push_back(u);
    }
    return dirs;
  }
  for (double a : azimuths) {
    for (int j = 0; j < sensor.rays_elevation; ++j) {
      const double e =
          sensor.rays_elevation == 1
              ? 0.0
              : ((j + 0.5) / sensor.rays_elevation - 0.5) * sensor.fov_v * deg;
      Point u(3);
      u << std::cos(e) * std::cos(a), std::cos(e) * std::sin(a), std::sin(e);
      dirs.push_back(u);
    }
  }
  return dirs;
}

namespace {

struct Crossing {
  double t;
  std::size_t obstacle;
  Eigen::VectorXd normal;
};

// Entry parameter of the ray into a convex polytope, with the entry facet.
std::optional<Crossing> Enter(const Polytope& p, const Point& x, const Point& u,
                              std::size_t index) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  const Halfspace* facet = nullptr;
  for (const Halfspace& h : p.halfspaces()) {
    const double den = h.normal.dot(u);
    const double room = h.offset - h.normal.dot(x);
    if (std::abs(den) < 1e-15) {
      if (room < 0) return std::nullopt;
      continue;
    }
    const double t = room / den;
    if (den > 0) {
      hi = std::min(hi, t);
    } else if (t > lo) {
      lo = t;
      facet = &h;
    }
  }
  if (facet == nullptr || lo < 0 || lo > hi) return std::nullopt;
  return Crossing{lo, index, facet->normal.normalized()};
}

// Exit parameter of the ray from the bounds, with the exit facet.
Crossing Exit(const Polytope& bounds, const Point& x, const Point& u) {
  Crossing best{std::numeric_limits<double>::infinity(), 0, Eigen::VectorXd()};
  for (const Halfspace& h : bounds.halfspaces()) {
    const double den = h.normal.dot(u);
    if (den <= 1e-15) continue;
    const double t = (h.offset - h.normal.dot(x)) / den;
    if (t < best.t) best = Crossing{t, 0, h.normal.normalized()};
  }
  return best;
}

}  // namespace

ScanRays CastScan(const WorldModel& world, const SensorModel& sensor, const Point& pose) {
  if (!world.IsFree(pose)) {
    throw Error(ErrorCode::kPoseInObstacle, "scan pose is not in free space");
  }
  const std::vector<Point> dirs = RayDirections(sensor, world.dim());
  std::mt19937_64 rng(sensor.rng_seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, sensor.noise_sigma);

  ScanRays out;
  out.cloud.origin = pose;
  std::vector<Crossing> crossings;
  for (const Point& u : dirs) {
    crossings.clear();
    for (std::size_t i = 0; i < world.obstacles.size(); ++i) {
      if (auto c = Enter(world.obstacles[i], pose, u, i)) crossings.push_back(std::move(*c));
    }
    std::sort(crossings.begin(), crossings.end(),
              [](const Crossing& a, const Crossing& b) {
                return a.t < b.t || (a.t == b.t && a.obstacle < b.obstacle);
              });
    const Crossing wall = Exit(world.bounds, pose, u);
    const Crossing* hit = nullptr;
    for (const Crossing& c : crossings) {
      if (c.t >= wall.t || c.t > sensor.range) break;
      const double p = world.materials[c.obstacle];
      if (p >= 1.0 || (p > 0.0 && coin(rng) < p)) {
        hit = &c;
        break;
      }
    }
    if (hit == nullptr && wall.t <= sensor.range) hit = &wall;
    if (hit == nullptr) {
      out.misses.push_back(pose + sensor.range * u);
      continue;
    }
    Point point = pose + hit->t * u;
    if (sensor.noise_sigma > 0) point += noise(rng) * hit->normal;
    out.cloud.points.push_back(std::move(point));
  }
  return out;
}

PointCloud SimulateScan(const WorldModel& world, const SensorModel& sensor,
                        const Point& pose) {
  return CastScan(world, sensor, pose).cloud;
}

}  // namespace polyscan
