#include <charconv>
#include <fstream>
#include <sstream>

#include "polyscan/io.hpp"

namespace polyscan {

namespace {

[[noreturn]] void Fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kParse, where + ": " + what);
}

const Json& Field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) Fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) Fail(where, std::string("missing \"") + key + "\"");
  return *it;
}

double Number(const Json& j, const std::string& where) {
  if (!j.is_number()) Fail(where, "expected a number");
  return j.get<double>();
}

std::int64_t IdFromString(const Json& j, const std::string& where) {
  if (!j.is_string()) Fail(where, "id must be a string");
  const std::string s = j.get<std::string>();
  std::int64_t v = -1;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || v < 0) {
    Fail(where, "id \"" + s + "\" is not a non-negative integer");
  }
  return v;
}

}  // namespace

Json PointToJson(const Point& p) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) out.push_back(p[i]);
  return out;
}

Point PointFromJson(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) Fail(where, "expected an array of numbers");
  Point p(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) p[i] = Number(j[i], where);
  return p;
}

Json PolytopeToJson(const Polytope& p, const std::string& id) {
  Json rows = Json::array();
  for (const Halfspace& h : p.halfspaces()) {
    rows.push_back(Json{{"normal", PointToJson(h.normal)}, {"offset", h.offset}});
  }
  Json verts = Json::array();
  for (const Point& v : p.vertices()) verts.push_back(PointToJson(v));
  return Json{{"id", id}, {"halfspaces", rows}, {"vertices", verts}};
}

Polytope PolytopeFromJson(const Json& j, const std::string& where) {
  const Json& rows_json = Field(j, "halfspaces", where);
  if (!rows_json.is_array()) Fail(where, "\"halfspaces\" must be an array");
  std::vector<Halfspace> rows;
  for (std::size_t i = 0; i < rows_json.size(); ++i) {
    const std::string at = where + ".halfspaces[" + std::to_string(i) + "]";
    rows.push_back(Halfspace{PointFromJson(Field(rows_json[i], "normal", at), at),
                             Number(Field(rows_json[i], "offset", at), at)});
  }
  try {
    if (j.contains("vertices")) {
      const Json& vj = j["vertices"];
      if (!vj.is_array()) Fail(where, "\"vertices\" must be an array");
      std::vector<Point> verts;
      for (std::size_t i = 0; i < vj.size(); ++i) {
        verts.push_back(PointFromJson(vj[i], where + ".vertices[" + std::to_string(i) + "]"));
      }
      return Polytope::FromParts(std::move(rows), std::move(verts));
    }
    std::optional<Polytope> p = Polytope::FromHalfspaces(std::move(rows));
    if (!p) Fail(where, "polytope is empty or flat");
    return *std::move(p);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) throw;
    Fail(where, e.what());
  }
}

Json FreeSpaceToJson(const FreeSpace& fs) {
  Json polys = Json::array();
  for (const Polytope& p : fs.polytopes()) polys.push_back(PolytopeToJson(p, ToString(p.id())));
  return Json{{"robot_radius", fs.robot_radius()}, {"polytopes", polys}};
}

FreeSpace FreeSpaceFromJson(const Json& j) {
  const double r = Number(Field(j, "robot_radius", "freespace"), "freespace.robot_radius");
  const Json& pj = Field(j, "polytopes", "freespace");
  if (!pj.is_array()) Fail("freespace", "\"polytopes\" must be an array");
  std::vector<Polytope> polys;
  for (std::size_t i = 0; i < pj.size(); ++i) {
    const std::string at = "freespace.polytopes[" + std::to_string(i) + "]";
    Polytope p = PolytopeFromJson(pj[i], at);
    p.set_id(PolytopeId{IdFromString(Field(pj[i], "id", at), at)});
    polys.push_back(std::move(p));
  }
  try {
    return FreeSpace::FromPolytopes(r, std::move(polys));
  } catch (const Error& e) {
    Fail("freespace", e.what());
  }
}

Json GraphToJson(const TransitionGraph& g) {
  Json nodes = Json::array();
  for (const auto& [id, c] : g.nodes()) {
    nodes.push_back(Json{{"id", ToString(id)}, {"centroid", PointToJson(c)}});
  }
  Json edges = Json::array();
  for (const auto& [key, e] : g.edges()) {
    edges.push_back(Json{{"a", ToString(e.a)},
                         {"b", ToString(e.b)},
                         {"cross", PointToJson(e.cross)},
                         {"distance", e.distance}});
  }
  return Json{{"nodes", nodes}, {"edges", edges}};
}

TransitionGraph GraphFromJson(const Json& j) {
  TransitionGraph g;
  const Json& nodes = Field(j, "nodes", "graph");
  const Json& edges = Field(j, "edges", "graph");
  if (!nodes.is_array() || !edges.is_array()) Fail("graph", "nodes and edges must be arrays");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string at = "graph.nodes[" + std::to_string(i) + "]";
    g.AddNode(PolytopeId{IdFromString(Field(nodes[i], "id", at), at)},
              PointFromJson(Field(nodes[i], "centroid", at), at));
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string at = "graph.edges[" + std::to_string(i) + "]";
    GraphEdge e{PolytopeId{IdFromString(Field(edges[i], "a", at), at)},
                PolytopeId{IdFromString(Field(edges[i], "b", at), at)},
                PointFromJson(Field(edges[i], "cross", at), at),
                Number(Field(edges[i], "distance", at), at)};
    if (!g.HasNode(e.a) || !g.HasNode(e.b)) Fail(at, "edge refers to an unknown node");
    g.AddEdge(std::move(e));
  }
  return g;
}

Json ObstaclesToJson(std::span<const Polytope> obstacles) {
  Json list = Json::array();
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    list.push_back(PolytopeToJson(obstacles[i], "obstacle-" + std::to_string(i)));
  }
  return Json{{"obstacles", list}};
}

std::vector<Polytope> ObstaclesFromJson(const Json& j) {
  const Json& list = Field(j, "obstacles", "obstacles");
  if (!list.is_array()) Fail("obstacles", "\"obstacles\" must be an array");
  std::vector<Polytope> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    out.push_back(PolytopeFromJson(list[i], "obstacles[" + std::to_string(i) + "]"));
  }
  return out;
}

WorldFile WorldFromJson(const Json& j) {
  Polytope bounds = PolytopeFromJson(Field(j, "bounds", "world"), "world.bounds");
  std::vector<Polytope> obstacles = ObstaclesFromJson(j);
  std::vector<double> materials;
  if (j.contains("materials")) {
    const Json& m = j["materials"];
    if (!m.is_array()) Fail("world", "\"materials\" must be an array");
    for (std::size_t i = 0; i < m.size(); ++i) {
      materials.push_back(Number(m[i], "world.materials[" + std::to_string(i) + "]"));
    }
  } else {
    materials.assign(obstacles.size(), 1.0);
  }
  WorldFile out{WorldModel{std::move(bounds), std::move(obstacles), std::move(materials)},
                std::nullopt};
  if (j.contains("start")) out.start = PointFromJson(j["start"], "world.start");
  try {
    out.world.Validate();
  } catch (const Error& e) {
    Fail("world", e.what());
  }
  return out;
}

Json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

void WriteJsonFile(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

}  // namespace polyscan
