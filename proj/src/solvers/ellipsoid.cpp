#include <cmath>
#include <limits>

#include "polyscan/solvers.hpp"

namespace polyscan {

Ellipsoid Ellipsoid::Ball(const Point& center, double radius) {
  const Eigen::Index d = center.size();
  return Ellipsoid{radius * Eigen::MatrixXd::Identity(d, d), center};
}

double Ellipsoid::LogDet() const {
  Eigen::LLT<Eigen::MatrixXd> llt(shape);
  if (llt.info() != Eigen::Success) {
    return -std::numeric_limits<double>::infinity();
  }
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

double Ellipsoid::MetricDistance(const Point& x) const {
  return shape.ldlt().solve(x - center).norm();
}

bool Ellipsoid::InsideHalfspace(const Halfspace& h, double tol) const {
  return (shape.transpose() * h.normal).norm() + h.normal.dot(center) <=
         h.offset + tol * h.normal.norm();
}

namespace {

// Symmetric basis E_k for the shape parameters: diagonal entries first,
// then each off-diagonal pair.
std::vector<Eigen::MatrixXd> SymmetricBasis(int d) {
  std::vector<Eigen::MatrixXd> basis;
  for (int i = 0; i < d; ++i) {
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(d, d);
    e(i, i) = 1.0;
    basis.push_back(e);
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(d, d);
      e(i, j) = e(j, i) = 1.0;
      basis.push_back(e);
    }
  }
  return basis;
}

class BarrierProblem {
 public:
  BarrierProblem(const std::vector<Halfspace>& rows, int d)
      : d_(d), basis_(SymmetricBasis(d)) {
    p_ = static_cast<int>(basis_.size());
    for (const Halfspace& h : rows) {
      const Halfspace u = h.Normalized();
      a_.push_back(u.normal);
      b_.push_back(u.offset);
      Eigen::MatrixXd m(d, p_);
      for (int k = 0; k < p_; ++k) m.col(k) = basis_[k] * u.normal;
      maps_.push_back(std::move(m));
    }
  }

  int size() const { return p_ + d_; }
  int rows() const { return static_cast<int>(a_.size()); }

  Eigen::MatrixXd Shape(const Eigen::VectorXd& z) const {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d_, d_);
    for (int k = 0; k < p_; ++k) c += z[k] * basis_[k];
    return c;
  }
  Point Center(const Eigen::VectorXd& z) const { return z.tail(d_); }

  Eigen::VectorXd Pack(const Eigen::MatrixXd& c, const Point& center) const {
    Eigen::VectorXd z(size());
    int k = 0;
    for (int i = 0; i < d_; ++i) z[k++] = c(i, i);
    for (int i = 0; i < d_; ++i) {
      for (int j = i + 1; j < d_; ++j) z[k++] = c(i, j);
    }
    z.tail(d_) = center;
    return z;
  }

  // t * (-log det C) - sum log s_i; +inf outside the domain.
  double Value(const Eigen::VectorXd& z, double t) const {
    const Eigen::MatrixXd c = Shape(z);
    Eigen::LLT<Eigen::MatrixXd> llt(c);
    if (llt.info() != Eigen::Success) return kInf;
    const double logdet =
        2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    double value = -t * logdet;
    const Point center = Center(z);
    for (int i = 0; i < rows(); ++i) {
      const double s = b_[i] - a_[i].dot(center) - (c * a_[i]).norm();
      if (!(s > 0)) return kInf;
      value -= std::log(s);
    }
    return value;
  }

  void Derivatives(const Eigen::VectorXd& z, double t, Eigen::VectorXd& grad,
                   Eigen::MatrixXd& hess) const {
    const int n = size();
    grad.setZero(n);
    hess.setZero(n, n);
    const Eigen::MatrixXd c = Shape(z);
    const Eigen::MatrixXd cinv = c.inverse();
    std::vector<Eigen::MatrixXd> ce(p_);
    for (int k = 0; k < p_; ++k) ce[k] = cinv * basis_[k];
    for (int k = 0; k < p_; ++k) {
      grad[k] -= t * ce[k].trace();
      for (int l = 0; l < p_; ++l) hess(k, l) += t * (ce[k] * ce[l]).trace();
    }
    const Point center = Center(z);
    for (int i = 0; i < rows(); ++i) {
      const Eigen::VectorXd u = c * a_[i];
      const double un = u.norm();
      const Eigen::VectorXd uh = u / un;
      const double s = b_[i] - a_[i].dot(center) - un;
      Eigen::VectorXd gs(n);
      gs.head(p_) = -maps_[i].transpose() * uh;
      gs.tail(d_) = -a_[i];
      grad -= gs / s;
      hess += gs * gs.transpose() / (s * s);
      const Eigen::MatrixXd proj =
          (Eigen::MatrixXd::Identity(d_, d_) - uh * uh.transpose()) / un;
      hess.topLeftCorner(p_, p_) +=
          maps_[i].transpose() * proj * maps_[i] / s;
    }
  }

  static constexpr double kInf = std::numeric_limits<double>::infinity();

 private:
  int d_;
  int p_ = 0;
  std::vector<Eigen::MatrixXd> basis_;
  std::vector<Eigen::VectorXd> a_;
  std::vector<double> b_;
  std::vector<Eigen::MatrixXd> maps_;
};

}  // namespace

Ellipsoid MaxVolumeEllipsoid(const Polytope& p,
                             const EllipsoidSolveOptions& opts) {
  const int d = p.dim();
  if (Volume(p) <= 1e-12) {
    throw Error(ErrorCode::kDegeneratePolytope, "polytope has zero volume");
  }
  BarrierProblem problem(p.halfspaces(), d);

  // Strictly feasible start: a small ball at the Chebyshev-like center.
  const Point center = Centroid(p);
  double slack = std::numeric_limits<double>::infinity();
  for (const Halfspace& h : p.halfspaces()) {
    slack = std::min(slack, -h.SignedDistance(center));
  }
  if (!(slack > 0)) {
    throw Error(ErrorCode::kDegeneratePolytope, "no interior start point");
  }
  Eigen::VectorXd z =
      problem.Pack(0.5 * slack * Eigen::MatrixXd::Identity(d, d), center);

  const double m = static_cast<double>(problem.rows());
  double t = 1.0;
  int steps = 0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  while (true) {
    // Centering by damped Newton.
    for (int it = 0; it < 60 && steps < opts.max_newton_steps; ++it, ++steps) {
      problem.Derivatives(z, t, grad, hess);
      const Eigen::VectorXd dz = -hess.ldlt().solve(grad);
      const double decrement = -grad.dot(dz);
      if (!(decrement > 1e-14)) break;
      const double f0 = problem.Value(z, t);
      double alpha = 1.0;
      while (alpha > 1e-14) {
        const double f1 = problem.Value(z + alpha * dz, t);
        if (f1 <= f0 - 0.25 * alpha * decrement) break;
        alpha *= 0.5;
      }
      if (alpha <= 1e-14) break;
      z += alpha * dz;
      if (decrement < 1e-12) break;
    }
    if (m / t <= opts.gap || steps >= opts.max_newton_steps) break;
    t *= 10.0;
  }

  Ellipsoid result{problem.Shape(z), problem.Center(z)};
  return result;
}

}  // namespace polyscan
