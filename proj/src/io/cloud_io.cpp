#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "polyscan/io.hpp"

namespace polyscan {

namespace {

[[noreturn]] void Fail(const std::string& name, int line, const std::string& what) {
  throw Error(ErrorCode::kParse, name + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> Tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

double ToDouble(const std::string& s, const std::string& name, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    Fail(name, line, "bad number \"" + s + "\"");
  }
  if (used != s.size() || !std::isfinite(v)) Fail(name, line, "bad number \"" + s + "\"");
  return v;
}

}  // namespace

std::vector<Point> ParsePcd(std::istream& in, int dim, const std::string& name) {
  std::vector<std::string> fields;
  long declared = -1;
  bool data = false;
  std::vector<Point> points;
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> tok = Tokens(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (!data) {
      const std::string& key = tok[0];
      if (key == "FIELDS") {
        fields.assign(tok.begin() + 1, tok.end());
        if (fields.size() < 2 || fields[0] != "x" || fields[1] != "y" ||
            (dim == 3 && (fields.size() < 3 || fields[2] != "z"))) {
          Fail(name, line_no, "FIELDS must start with x y" + std::string(dim == 3 ? " z" : ""));
        }
      } else if (key == "POINTS") {
        if (tok.size() != 2) Fail(name, line_no, "POINTS needs one value");
        const double n = ToDouble(tok[1], name, line_no);
        if (n < 0 || n != std::floor(n)) Fail(name, line_no, "POINTS must be a count");
        declared = static_cast<long>(n);
      } else if (key == "DATA") {
        if (tok.size() != 2 || tok[1] != "ascii") Fail(name, line_no, "only DATA ascii is supported");
        if (fields.empty()) Fail(name, line_no, "DATA before FIELDS");
        data = true;
      } else if (key == "VERSION" || key == "SIZE" || key == "TYPE" || key == "COUNT" ||
                 key == "WIDTH" || key == "HEIGHT" || key == "VIEWPOINT") {
        continue;
      } else {
        Fail(name, line_no, "unknown header entry \"" + key + "\"");
      }
      continue;
    }
    if (tok.size() != fields.size()) {
      Fail(name, line_no, "expected " + std::to_string(fields.size()) + " values");
    }
    Point p(dim);
    for (int k = 0; k < dim; ++k) p[k] = ToDouble(tok[k], name, line_no);
    points.push_back(std::move(p));
  }
  if (!data) Fail(name, line_no, "missing DATA line");
  if (declared >= 0 && declared != static_cast<long>(points.size())) {
    Fail(name, line_no, "POINTS says " + std::to_string(declared) + " but found " +
                            std::to_string(points.size()));
  }
  return points;
}

std::vector<Point> ParseCsv(std::istream& in, int dim, const std::string& name) {
  std::vector<Point> points;
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    const std::vector<std::string> tok = Tokens(line);
    if (tok.empty()) continue;
    if (static_cast<int>(tok.size()) < dim) {
      Fail(name, line_no, "expected at least " + std::to_string(dim) + " values");
    }
    Point p(dim);
    for (int k = 0; k < dim; ++k) p[k] = ToDouble(tok[k], name, line_no);
    points.push_back(std::move(p));
  }
  return points;
}

PointCloud ReadPointCloud(const std::filesystem::path& path, const Point& origin) {
  const int dim = static_cast<int>(origin.size());
  if (dim != 2 && dim != 3) throw Error(ErrorCode::kInvalidArgument, "origin must be 2D or 3D");
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  PointCloud cloud;
  cloud.origin = origin;
  cloud.points = path.extension() == ".pcd" ? ParsePcd(in, dim, path.string())
                                            : ParseCsv(in, dim, path.string());
  return cloud;
}

void WritePcd(std::ostream& out, std::span<const Point> points) {
  const int dim = points.empty() ? 3 : static_cast<int>(points.front().size());
  out << "VERSION .7\n";
  out << (dim == 3 ? "FIELDS x y z\nSIZE 4 4 4\nTYPE F F F\nCOUNT 1 1 1\n"
                   : "FIELDS x y\nSIZE 4 4\nTYPE F F\nCOUNT 1 1\n");
  out << "WIDTH " << points.size() << "\nHEIGHT 1\nPOINTS " << points.size() << "\nDATA ascii\n";
  out << std::setprecision(17);
  for (const Point& p : points) {
    for (int k = 0; k < dim; ++k) out << (k ? " " : "") << p[k];
    out << '\n';
  }
}

void WriteTrajectoryCsv(std::ostream& out, std::span<const TrajectorySample> trajectory) {
  const int dim = trajectory.empty() ? 2 : static_cast<int>(trajectory.front().position.size());
  out << (dim == 3 ? "tick,x,y,z,mode\n" : "tick,x,y,mode\n");
  out << std::setprecision(17);
  for (const TrajectorySample& s : trajectory) {
    out << s.tick;
    for (int k = 0; k < dim; ++k) out << ',' << s.position[k];
    out << ',' << (s.mode == RobotMode::kScan ? "scan" : "move") << '\n';
  }
}

void WriteGridPgm(std::ostream& out, const ExplorationGrid& grid) {
  const int w = grid.shape()[0];
  const int h = grid.shape()[1];
  const int layers = grid.dim() == 3 ? grid.shape()[2] : 1;
  std::vector<unsigned char> pixels(static_cast<std::size_t>(w) * h, 128);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      CellState s = CellState::kUnknown;
      for (int z = 0; z < layers; ++z) {
        const CellState c =
            grid.at(static_cast<std::size_t>(x) + static_cast<std::size_t>(w) * (y + static_cast<std::size_t>(h) * z));
        if (c == CellState::kOccupied) s = c;
        if (c == CellState::kFree && s == CellState::kUnknown) s = c;
      }
      pixels[static_cast<std::size_t>(h - 1 - y) * w + x] =
          s == CellState::kFree ? 255 : s == CellState::kOccupied ? 0 : 128;
    }
  }
  out << "P5\n" << w << ' ' << h << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
}

}  // namespace polyscan
