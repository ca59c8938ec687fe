#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "geodint/errors.hpp"
#include "geodint/tolerances.hpp"

namespace geodint {

/// Rotation of p about axis a by angle |a| (the SO(3) exponential acting on
/// a vector). Small angles use the series of sin(x)/x and (1-cos(x))/x^2.
inline Eigen::Vector3d rodrigues_apply(const Eigen::Vector3d& a, const Eigen::Vector3d& p) {
  const double alpha = a.norm();
  double s, c2;  // sin(alpha)/alpha, (1-cos(alpha))/alpha^2
  if (alpha < 1e-6) {
    const double a2 = alpha * alpha;
    s = 1.0 - a2 / 6.0;
    c2 = 0.5 - a2 / 24.0;
  } else {
    s = std::sin(alpha) / alpha;
    c2 = (1.0 - std::cos(alpha)) / (alpha * alpha);
  }
  return p + s * a.cross(p) + c2 * a.cross(a.cross(p));
}

/// The unit 2-sphere embedded in R^3. Points are unit 3-vectors, tangents
/// are 3-vectors orthogonal to their base point, the metric is the ambient
/// dot product.
class Sphere2 {
public:
  using Point = Eigen::Vector3d;
  using Vec = Eigen::Vector3d;

  Eigen::Index dim() const { return 2; }
  Eigen::Index dof() const { return 2; }
  Eigen::Index ambient_dim() const { return 3; }

  void check_point(const Point& p) const {
    if (std::abs(p.norm() - 1.0) > tol::point)
      throw invalid_input("sphere2: point is not a unit vector");
  }

  void check_tangent(const Point& p, const Vec& v) const {
    check_point(p);
    if (std::abs(p.dot(v)) > tol::tangent * std::max(1.0, v.norm()))
      throw invalid_input("sphere2: vector is not tangent to the base point");
  }

  bool same_point(const Point& p, const Point& q) const {
    return (p - q).cwiseAbs().maxCoeff() <= tol::point;
  }

  Point exp(const Point& p, const Vec& v) const {
    check_tangent(p, v);
    const double alpha = v.norm();
    if (alpha < 1e-14) return (p + v).normalized();
    Point out = std::cos(alpha) * p + (std::sin(alpha) / alpha) * v;
    return out.normalized();
  }

  Vec log(const Point& p, const Point& q) const {
    check_point(p);
    check_point(q);
    if ((p + q).norm() < 1e-8)
      throw no_unique_geodesic("sphere2: log of an antipodal point");
    const double theta = distance(p, q);
    Vec w = q - p.dot(q) * p;
    const double wn = w.norm();
    if (wn < 1e-15) return Vec::Zero();
    return (theta / wn) * w;
  }

  /// Great-circle distance; atan2 form of arccos(p . q).
  double distance(const Point& p, const Point& q) const {
    check_point(p);
    check_point(q);
    return std::atan2(p.cross(q).norm(), p.dot(q));
  }

  double inner(const Point& p, const Vec& u, const Vec& v) const {
    check_tangent(p, u);
    check_tangent(p, v);
    return u.dot(v);
  }

  double norm(const Point& p, const Vec& v) const { return std::sqrt(inner(p, v, v)); }

  Point project(const Eigen::Vector3d& raw) const {
    const double n = raw.norm();
    if (n < 1e-100) throw degenerate_input("sphere2: cannot project the zero vector");
    return raw / n;
  }

  Eigen::VectorXd to_ambient(const Point& p) const { return p; }
  Eigen::VectorXd vec_to_ambient(const Vec& v) const { return v; }
  Point from_ambient(const Eigen::VectorXd& x) const {
    if (x.size() != 3) throw invalid_input("sphere2: ambient vector must have size 3");
    return project(Eigen::Vector3d(x));
  }

  /// Deterministic orthonormal tangent basis at p.
  std::pair<Vec, Vec> tangent_basis(const Point& p) const {
    int k = 0;
    for (int i = 1; i < 3; ++i)
      if (std::abs(p[i]) < std::abs(p[k])) k = i;
    Vec t1 = p.cross(Eigen::Vector3d::Unit(k)).normalized();
    Vec t2 = p.cross(t1);
    return {t1, t2};
  }

  /// Retraction used by the implicit-equation solver: move in the tangent
  /// basis and renormalize.
  Point perturb(const Point& p, const Eigen::VectorXd& delta) const {
    auto [t1, t2] = tangent_basis(p);
    return project(p + delta[0] * t1 + delta[1] * t2);
  }
};

}  // namespace geodint
