#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "polyscan/io.hpp"

namespace polyscan {

namespace {

[[noreturn]] void Bad(const std::string& key, const std::string& value, const char* want) {
  throw Error(ErrorCode::kInvalidArgument,
              "bad value \"" + value + "\" for " + key + " (expected " + want + ")");
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double ParseDouble(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size()) Bad(key, v, "a number");
  return out;
}

template <typename Int>
Int ParseInt(const std::string& key, const std::string& v) {
  Int out = 0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size()) Bad(key, v, "an integer");
  return out;
}

std::string Format(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string FormatPoint(const std::optional<Point>& p) {
  if (!p) return "";
  std::string out;
  for (Eigen::Index i = 0; i < p->size(); ++i) out += (i ? "," : "") + Format((*p)[i]);
  return out;
}

struct Entry {
  const char* key;
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define POLYSCAN_DOUBLE(name, field)                                                    \
  Entry {                                                                               \
    name, [](RunConfig& c, const std::string& k, const std::string& v) {                \
      c.field = ParseDouble(k, v);                                                      \
    },                                                                                  \
        [](const RunConfig& c) { return Format(c.field); }                              \
  }
#define POLYSCAN_INT(name, field, type)                                                 \
  Entry {                                                                               \
    name, [](RunConfig& c, const std::string& k, const std::string& v) {                \
      c.field = ParseInt<type>(k, v);                                                   \
    },                                                                                  \
        [](const RunConfig& c) { return std::to_string(c.field); }                      \
  }
#define POLYSCAN_POINT(name, field)                                                     \
  Entry {                                                                               \
    name, [](RunConfig& c, const std::string&, const std::string& v) {                  \
      c.field = ParsePointArg(v);                                                       \
    },                                                                                  \
        [](const RunConfig& c) { return FormatPoint(c.field); }                         \
  }

const std::vector<Entry>& Entries() {
  static const std::vector<Entry> entries = {
      POLYSCAN_INT("seed", seed, std::uint64_t),
      POLYSCAN_INT("budget", budget, int),
      POLYSCAN_POINT("origin", origin),
      POLYSCAN_POINT("start", start),
      POLYSCAN_POINT("goal", goal),
      POLYSCAN_DOUBLE("robot_radius", explore.robot_radius),
      POLYSCAN_DOUBLE("preprocess.d_max", explore.preprocess.d_max),
      POLYSCAN_INT("preprocess.n1", explore.preprocess.n1, int),
      POLYSCAN_INT("preprocess.n2", explore.preprocess.n2, int),
      POLYSCAN_INT("preprocess.n3", explore.preprocess.n3, int),
      POLYSCAN_DOUBLE("preprocess.eps1", explore.preprocess.eps1),
      POLYSCAN_DOUBLE("preprocess.eps2", explore.preprocess.eps2),
      POLYSCAN_DOUBLE("preprocess.neighbor_radius", explore.preprocess.neighbor_radius),
      POLYSCAN_DOUBLE("preprocess.slab_pad", explore.preprocess.slab_pad),
      POLYSCAN_DOUBLE("iris.vol_growth_tol", explore.iris.vol_growth_tol),
      POLYSCAN_INT("iris.max_iters", explore.iris.max_iters, int),
      POLYSCAN_DOUBLE("iris.seed_ball_radius", explore.iris.seed_ball_radius),
      POLYSCAN_DOUBLE("add.min_new_volume", explore.add.min_new_volume),
      POLYSCAN_DOUBLE("add.min_new_fraction", explore.add.min_new_fraction),
      POLYSCAN_INT("add.mc_samples", explore.add.mc_samples, int),
      POLYSCAN_DOUBLE("add.slice_overlap", explore.add.slice_overlap),
      POLYSCAN_DOUBLE("explore.epsilon", explore.epsilon),
      POLYSCAN_DOUBLE("explore.step", explore.step),
      POLYSCAN_DOUBLE("explore.cell_size", explore.cell_size),
      POLYSCAN_INT("explore.extra_seeds", explore.extra_seeds, int),
      POLYSCAN_DOUBLE("explore.revisit_radius", explore.revisit_radius),
      POLYSCAN_INT("explore.unreachable_limit", explore.unreachable_limit, int),
      Entry{"sensor.mode",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              if (v == "omnidirectional") {
                c.sensor.mode = SensorMode::kOmnidirectional;
              } else if (v == "limited-fov") {
                c.sensor.mode = SensorMode::kLimitedFov;
              } else {
                Bad(k, v, "omnidirectional or limited-fov");
              }
            },
            [](const RunConfig& c) {
              return std::string(c.sensor.mode == SensorMode::kOmnidirectional
                                     ? "omnidirectional"
                                     : "limited-fov");
            }},
      POLYSCAN_DOUBLE("sensor.fov_h", sensor.fov_h),
      POLYSCAN_DOUBLE("sensor.fov_v", sensor.fov_v),
      POLYSCAN_DOUBLE("sensor.range", sensor.range),
      POLYSCAN_INT("sensor.rays_azimuth", sensor.rays_azimuth, int),
      POLYSCAN_INT("sensor.rays_elevation", sensor.rays_elevation, int),
      POLYSCAN_DOUBLE("sensor.noise_sigma", sensor.noise_sigma),
  };
  return entries;
}

#undef POLYSCAN_DOUBLE
#undef POLYSCAN_INT
#undef POLYSCAN_POINT

}  // namespace

Point ParsePointArg(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ',');) {
    values.push_back(ParseDouble("point", Trim(part)));
  }
  if (values.size() != 2 && values.size() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "expected x,y or x,y,z but got \"" + text + "\"");
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void SetConfigValue(RunConfig& cfg, const std::string& key, const std::string& value) {
  for (const Entry& e : Entries()) {
    if (key == e.key) {
      e.set(cfg, key, value);
      return;
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown config key \"" + key + "\"");
}

std::vector<std::pair<std::string, std::string>> ConfigValues(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const Entry& e : Entries()) out.emplace_back(e.key, e.get(cfg));
  return out;
}

void ApplyConfig(std::istream& in, const std::string& name, RunConfig& cfg) {
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = name + ":" + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, where + "expected key = value");
    }
    try {
      SetConfigValue(cfg, Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)));
    } catch (const Error& e) {
      const std::string msg = e.what();
      throw Error(e.code(), where + msg.substr(msg.find(": ") + 2));
    }
  }
}

void ApplyConfigFile(const std::filesystem::path& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  ApplyConfig(in, path.string(), cfg);
}

}  // namespace polyscan
