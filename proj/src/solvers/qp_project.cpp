#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>

#include "polyscan/solvers.hpp"

namespace polyscan {
namespace {

// Projection onto the affine set {A_S x = b_S}; nullopt when A_S is rank
// deficient or a multiplier is negative.
std::optional<Point> ProjectOnActive(const Point& target,
                                     std::span<const Halfspace> rows,
                                     std::span<const int> active) {
  const Eigen::Index d = target.size();
  const Eigen::Index k = static_cast<Eigen::Index>(active.size());
  if (k == 0) return target;
  Eigen::MatrixXd a(k, d);
  Eigen::VectorXd r(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Halfspace& h = rows[active[i]];
    a.row(i) = h.normal.transpose();
    r[i] = h.Violation(target);
  }
  const Eigen::MatrixXd gram = a * a.transpose();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  if (lu.rank() < k) return std::nullopt;
  const Eigen::VectorXd lambda = lu.solve(r);
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  if (lambda.minCoeff() < -1e-12 * scale) return std::nullopt;
  return Point(target - a.transpose() * lambda);
}

bool Feasible(const Point& x, std::span<const Halfspace> rows, double tol) {
  for (const Halfspace& h : rows) {
    if (h.Violation(x) > tol * h.normal.norm()) return false;
  }
  return true;
}

}  // namespace

Point QpProject(const Point& target, std::span<const Halfspace> rows) {
  if (!target.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "target is not finite");
  }
  const int m = static_cast<int>(rows.size());
  const int d = static_cast<int>(target.size());
  for (double tol : {1e-10, 1e-8}) {
    if (Feasible(target, rows, tol)) return target;
    std::vector<int> active;
    // Depth-first over increasing subset sizes.
    for (int size = 1; size <= std::min(d, m); ++size) {
      active.assign(size, 0);
      for (int i = 0; i < size; ++i) active[i] = i;
      while (true) {
        if (auto x = ProjectOnActive(target, rows, active);
            x && Feasible(*x, rows, tol)) {
          return *x;
        }
        int pos = size - 1;
        while (pos >= 0 && active[pos] == m - size + pos) --pos;
        if (pos < 0) break;
        ++active[pos];
        for (int i = pos + 1; i < size; ++i) active[i] = active[i - 1] + 1;
      }
    }
  }
  throw Error(ErrorCode::kInfeasible, "projection target set is empty");
}

double QpKktResidual(const Point& target, std::span<const Halfspace> rows,
                     const Point& solution) {
  double residual = 0.0;
  std::vector<int> active;
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    const double v = rows[i].Violation(solution) / rows[i].normal.norm();
    residual = std::max(residual, v);
    if (std::abs(v) <= 1e-9) active.push_back(i);
  }
  const Eigen::VectorXd grad = target - solution;  // must equal A_S^T lambda
  if (active.empty()) return std::max(residual, grad.norm());

  // Degenerate vertices carry more than d tight rows; the multipliers are
  // then not unique, so take the best certificate over subsets of size <= d.
  const int d = static_cast<int>(target.size());
  const int m = static_cast<int>(active.size());
  double best = grad.norm();
  for (int mask = 1; mask < (1 << std::min(m, 16)); ++mask) {
    if (std::popcount(static_cast<unsigned>(mask)) > d) continue;
    std::vector<int> pick;
    for (int i = 0; i < m; ++i) {
      if (mask & (1 << i)) pick.push_back(active[i]);
    }
    Eigen::MatrixXd at(d, pick.size());
    for (std::size_t i = 0; i < pick.size(); ++i) at.col(i) = rows[pick[i]].normal;
    const Eigen::VectorXd lambda =
        at.completeOrthogonalDecomposition().solve(grad);
    const double r = std::max((at * lambda - grad).norm(),
                              std::max(0.0, -lambda.minCoeff()));
    best = std::min(best, r);
  }
  return std::max(residual, best);
}

}  // namespace polyscan
