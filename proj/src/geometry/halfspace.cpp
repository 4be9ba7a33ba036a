#include <cmath>

#include "polyscan/geometry.hpp"

namespace polyscan {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kUnbounded: return "Unbounded";
    case ErrorCode::kEmpty: return "Empty";
    case ErrorCode::kEmptySet: return "EmptySet";
    case ErrorCode::kEmptyIntersection: return "EmptyIntersection";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kDegeneratePolytope: return "DegeneratePolytope";
    case ErrorCode::kEmptyCloud: return "EmptyCloud";
    case ErrorCode::kSeedInObstacle: return "SeedInObstacle";
    case ErrorCode::kSeedOutsideBounds: return "SeedOutsideBounds";
    case ErrorCode::kNoOverlap: return "NoOverlap";
    case ErrorCode::kUnreachable: return "Unreachable";
    case ErrorCode::kPoseInObstacle: return "PoseInObstacle";
    case ErrorCode::kSafetyViolation: return "SafetyViolation";
    case ErrorCode::kInitialClearanceViolation:
      return "InitialClearanceViolation";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

bool LexLess(const Point& a, const Point& b) {
  for (Eigen::Index i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return a.size() < b.size();
}

Halfspace Halfspace::Normalized() const {
  const double n = normal.norm();
  return Halfspace{normal / n, offset / n};
}

bool SameHalfspace(const Halfspace& a, const Halfspace& b, double tol) {
  const Halfspace na = a.Normalized();
  const Halfspace nb = b.Normalized();
  return (na.normal - nb.normal).norm() <= tol &&
         std::abs(na.offset - nb.offset) <= tol;
}

int AffineRank(std::span<const Point> points, double tol) {
  if (points.empty()) return -1;
  const Eigen::Index d = points.front().size();
  Eigen::MatrixXd centered(points.size(), d);
  Point mean = Point::Zero(d);
  for (const Point& p : points) mean += p;
  mean /= static_cast<double>(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    centered.row(i) = (points[i] - mean).transpose();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
  const auto& s = svd.singularValues();
  const double scale = std::max(1.0, s.size() > 0 ? s[0] : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > tol * scale) ++rank;
  }
  return rank;
}

std::vector<Point> UniquePoints(std::span<const Point> points, double tol) {
  std::vector<Point> out;
  for (const Point& p : points) {
    bool seen = false;
    for (const Point& q : out) {
      if ((p - q).lpNorm<Eigen::Infinity>() <= tol) {
        seen = true;
        break;
      }
    }
    if (!seen) out.push_back(p);
  }
  return out;
}

}  // namespace polyscan
