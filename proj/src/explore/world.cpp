#include <algorithm>
#include <limits>

#include "polyscan/explore.hpp"

namespace polyscan {

void WorldModel::Validate() const {
  if (materials.size() != obstacles.size()) {
    throw Error(ErrorCode::kInvalidArgument, "one material per obstacle is required");
  }
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    if (obstacles[i].dim() != dim()) {
      throw Error(ErrorCode::kInvalidArgument, "obstacle dimension differs from bounds");
    }
    for (const Point& v : obstacles[i].vertices()) {
      if (!bounds.Contains(v)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "obstacle " + std::to_string(i) + " leaves the bounds");
      }
    }
    if (!(materials[i] >= 0.0 && materials[i] <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "detection probability must be in [0, 1]");
    }
  }
}

bool WorldModel::IsFree(const Point& x) const {
  if (!bounds.ContainsInterior(x, 0.0)) return false;
  return std::none_of(obstacles.begin(), obstacles.end(),
                      [&](const Polytope& o) { return o.Contains(x, 0.0); });
}

double WorldModel::Clearance(const Point& x) const {
  if (!IsFree(x)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const Halfspace& h : bounds.halfspaces()) {
    best = std::min(best, -h.SignedDistance(x));
  }
  for (const Polytope& o : obstacles) {
    best = std::min(best, (ProjectPoint(x, o) - x).norm());
  }
  return best;
}

}  // namespace polyscan
