#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyscan {

/// A point or vector in R^d, d in {2, 3}. Meters.
using Point = Eigen::VectorXd;

/// Absolute tolerance for membership and tightness tests (meters).
inline constexpr double kTolGeom = 1e-7;

enum class ErrorCode {
  kDegenerateInput,
  kUnbounded,
  kEmpty,
  kEmptySet,
  kEmptyIntersection,
  kInfeasible,
  kDegeneratePolytope,
  kEmptyCloud,
  kSeedInObstacle,
  kSeedOutsideBounds,
  kNoOverlap,
  kUnreachable,
  kPoseInObstacle,
  kSafetyViolation,
  kInitialClearanceViolation,
  kInvalidArgument,
  kParse,
  kIo,
};

const char* ErrorCodeName(ErrorCode code);

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Identifier of a polytope inside a FreeSpace. Ordered; lower ids win ties.
struct PolytopeId {
  std::int64_t value = -1;

  bool valid() const { return value >= 0; }
  auto operator<=>(const PolytopeId&) const = default;
};

inline std::string ToString(PolytopeId id) { return std::to_string(id.value); }

/// Lexicographic order on points; used for deterministic ordering.
bool LexLess(const Point& a, const Point& b);

}  // namespace polyscan
