#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyscan/explore.hpp"

namespace polyscan {

using Json = nlohmann::ordered_json;

// ---- JSON ----------------------------------------------------------------

/// {"id": string, "halfspaces": [{"normal", "offset"}], "vertices": [[..]]}
Json PolytopeToJson(const Polytope& p, const std::string& id);
/// Vertices may be omitted, in which case they are computed. `where` names
/// the element in error messages. Throws kParse.
Polytope PolytopeFromJson(const Json& j, const std::string& where);

/// {"robot_radius": f, "polytopes": [...]}, ids written as decimal strings.
Json FreeSpaceToJson(const FreeSpace& fs);
FreeSpace FreeSpaceFromJson(const Json& j);

/// {"nodes": [{"id", "centroid"}], "edges": [{"a", "b", "cross", "distance"}]}
Json GraphToJson(const TransitionGraph& g);
TransitionGraph GraphFromJson(const Json& j);

/// {"obstacles": [...]}
Json ObstaclesToJson(std::span<const Polytope> obstacles);
std::vector<Polytope> ObstaclesFromJson(const Json& j);

/// {"bounds", "obstacles", "materials"} with an optional "start" point.
struct WorldFile {
  WorldModel world;
  std::optional<Point> start;
};
WorldFile WorldFromJson(const Json& j);

Json PointToJson(const Point& p);
Point PointFromJson(const Json& j, const std::string& where);

/// Throws kIo when the file cannot be read, kParse on malformed JSON.
Json ReadJsonFile(const std::filesystem::path& path);
/// Two-space indented, trailing newline.
void WriteJsonFile(const std::filesystem::path& path, const Json& j);

// ---- point clouds --------------------------------------------------------

/// ASCII PCD with FIELDS starting x y [z]. Points keep the first `dim`
/// coordinates. Errors carry the line number.
std::vector<Point> ParsePcd(std::istream& in, int dim, const std::string& name);
/// One point per line, comma or whitespace separated; '#' starts a comment.
std::vector<Point> ParseCsv(std::istream& in, int dim, const std::string& name);
/// By extension: .pcd or anything else as CSV. Origin sets the dimension.
PointCloud ReadPointCloud(const std::filesystem::path& path, const Point& origin);
void WritePcd(std::ostream& out, std::span<const Point> points);

// ---- run outputs ---------------------------------------------------------

/// tick,x,y[,z],mode
void WriteTrajectoryCsv(std::ostream& out, std::span<const TrajectorySample> trajectory);
/// Binary PGM: free 255, unknown 128, occupied 0; 3D grids are collapsed
/// top-down (occupied over free over unknown). Row 0 is the largest y.
void WriteGridPgm(std::ostream& out, const ExplorationGrid& grid);

// ---- configuration -------------------------------------------------------

/// Every tunable of the command line tool.
struct RunConfig {
  ExploreParams explore;
  SensorModel sensor;
  std::uint64_t seed = 0;
  int budget = 15;
  std::optional<Point> origin;
  std::optional<Point> start;
  std::optional<Point> goal;
};

/// Parses key = value lines ('#' comments, blank lines allowed) into `cfg`.
/// Unknown keys and malformed values throw kInvalidArgument with the line.
void ApplyConfig(std::istream& in, const std::string& name, RunConfig& cfg);
void ApplyConfigFile(const std::filesystem::path& path, RunConfig& cfg);
/// Sets one key; the same names as in config files.
void SetConfigValue(RunConfig& cfg, const std::string& key, const std::string& value);
/// All keys with their current values, in a stable order.
std::vector<std::pair<std::string, std::string>> ConfigValues(const RunConfig& cfg);

/// "x,y[,z]"; throws kInvalidArgument.
Point ParsePointArg(const std::string& text);

// ---- SVG -----------------------------------------------------------------

struct SvgScene {
  std::string title;
  std::optional<Polytope> bounds;
  std::vector<Polytope> obstacles;
  std::vector<Polytope> free_space;
  const TransitionGraph* graph = nullptr;
  std::vector<Point> cloud;
  std::vector<Point> trajectory;
  std::vector<Point> markers;
};

/// SVG 1.1 document. 3D content is drawn top-down (x right, y up) and the
/// title says so. One <polygon> per free polytope, class "free".
std::string RenderSvg(const SvgScene& scene);

}  // namespace polyscan
