#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "polyscan/io.hpp"

namespace polyscan {

namespace {

using Vec2 = Eigen::Vector2d;

// Counter-clockwise hull of the points' x-y projection (monotone chain).
std::vector<Vec2> Outline(std::span<const Point> points) {
  std::vector<Vec2> pts;
  for (const Point& p : points) pts.emplace_back(p[0], p[1]);
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

class Frame {
 public:
  Frame(const Vec2& lo, const Vec2& hi) : lo_(lo), hi_(hi) {
    const Vec2 span = (hi - lo).cwiseMax(Vec2(1e-9, 1e-9));
    scale_ = 760.0 / std::max(span.x(), span.y());
    width_ = span.x() * scale_ + 40;
    height_ = span.y() * scale_ + 70;
  }
  double X(double x) const { return 20 + (x - lo_.x()) * scale_; }
  double Y(double y) const { return height_ - 20 - (y - lo_.y()) * scale_; }
  double width() const { return width_; }
  double height() const { return height_; }

 private:
  Vec2 lo_, hi_;
  double scale_ = 1, width_ = 0, height_ = 0;
};

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void Polygon(std::ostream& out, const Frame& f, const Polytope& p, const char* cls) {
  out << "<polygon class=\"" << cls << "\" points=\"";
  bool first = true;
  for (const Vec2& v : Outline(p.vertices())) {
    out << (first ? "" : " ") << f.X(v.x()) << ',' << f.Y(v.y());
    first = false;
  }
  out << "\"/>\n";
}

}  // namespace

std::string RenderSvg(const SvgScene& scene) {
  std::vector<Point> extent;
  int dim = 2;
  auto take = [&](const Point& p) {
    extent.push_back(p);
    dim = std::max(dim, static_cast<int>(p.size()));
  };
  if (scene.bounds) {
    for (const Point& v : scene.bounds->vertices()) take(v);
  }
  for (const auto* list : {&scene.obstacles, &scene.free_space}) {
    for (const Polytope& p : *list) {
      for (const Point& v : p.vertices()) take(v);
    }
  }
  for (const auto* list : {&scene.cloud, &scene.trajectory, &scene.markers}) {
    for (const Point& p : *list) take(p);
  }
  if (scene.graph) {
    for (const auto& [id, c] : scene.graph->nodes()) take(c);
  }
  Vec2 lo(0, 0), hi(1, 1);
  if (!extent.empty()) {
    lo = hi = Vec2(extent.front()[0], extent.front()[1]);
    for (const Point& p : extent) {
      lo = lo.cwiseMin(Vec2(p[0], p[1]));
      hi = hi.cwiseMax(Vec2(p[0], p[1]));
    }
  }
  const Frame f(lo, hi);
  std::string title = scene.title;
  if (dim == 3) title += " (top-down orthographic projection)";

  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << f.width()
      << "\" height=\"" << f.height() << "\" viewBox=\"0 0 " << f.width() << ' ' << f.height()
      << "\">\n"
      << "<title>" << Escape(title) << "</title>\n"
      << "<style>\n"
      << ".bounds{fill:none;stroke:#000;stroke-width:2}\n"
      << ".obstacle{fill:#777;stroke:#333;stroke-width:1}\n"
      << ".free{fill:#3a7bd5;fill-opacity:0.25;stroke:#1f4f99;stroke-width:1}\n"
      << ".edge{fill:none;stroke:#d13;stroke-width:1.5}\n"
      << ".node{fill:#d13}\n"
      << ".cross{fill:#fff;stroke:#d13}\n"
      << ".cloud{fill:#111}\n"
      << ".trajectory{fill:none;stroke:#0a0;stroke-width:2}\n"
      << ".marker{fill:#fa0;stroke:#000}\n"
      << "</style>\n"
      << "<text x=\"20\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" << Escape(title)
      << "</text>\n";
  if (scene.bounds) Polygon(out, f, *scene.bounds, "bounds");
  for (const Polytope& p : scene.obstacles) Polygon(out, f, p, "obstacle");
  for (const Polytope& p : scene.free_space) Polygon(out, f, p, "free");
  for (const Point& p : scene.cloud) {
    out << "<circle class=\"cloud\" cx=\"" << f.X(p[0]) << "\" cy=\"" << f.Y(p[1])
        << "\" r=\"1.2\"/>\n";
  }
  if (scene.graph) {
    for (const auto& [key, e] : scene.graph->edges()) {
      const Point& a = scene.graph->nodes().at(e.a);
      const Point& b = scene.graph->nodes().at(e.b);
      out << "<polyline class=\"edge\" points=\"" << f.X(a[0]) << ',' << f.Y(a[1]) << ' '
          << f.X(e.cross[0]) << ',' << f.Y(e.cross[1]) << ' ' << f.X(b[0]) << ',' << f.Y(b[1])
          << "\"/>\n";
      out << "<circle class=\"cross\" cx=\"" << f.X(e.cross[0]) << "\" cy=\"" << f.Y(e.cross[1])
          << "\" r=\"2.5\"/>\n";
    }
    for (const auto& [id, c] : scene.graph->nodes()) {
      out << "<circle class=\"node\" cx=\"" << f.X(c[0]) << "\" cy=\"" << f.Y(c[1])
          << "\" r=\"3.5\"/>\n";
    }
  }
  if (!scene.trajectory.empty()) {
    out << "<polyline class=\"trajectory\" points=\"";
    for (std::size_t i = 0; i < scene.trajectory.size(); ++i) {
      out << (i ? " " : "") << f.X(scene.trajectory[i][0]) << ',' << f.Y(scene.trajectory[i][1]);
    }
    out << "\"/>\n";
  }
  for (const Point& p : scene.markers) {
    out << "<circle class=\"marker\" cx=\"" << f.X(p[0]) << "\" cy=\"" << f.Y(p[1])
        << "\" r=\"5\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace polyscan
