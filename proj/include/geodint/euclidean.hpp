#pragma once

#include <Eigen/Core>

#include "geodint/errors.hpp"

namespace geodint {

/// Flat R^n, the calibration case: geodesics are straight lines and the
/// log-norm machinery reduces to the classical matrix measure.
class Euclidean {
public:
  explicit Euclidean(Eigen::Index n) : n_(n) {
    if (n < 1) throw invalid_input("euclidean: dimension must be at least 1");
  }

  using Point = Eigen::VectorXd;
  using Vec = Eigen::VectorXd;

  Eigen::Index dim() const { return n_; }
  Eigen::Index dof() const { return n_; }
  Eigen::Index ambient_dim() const { return n_; }

  void check_point(const Point& p) const { check_size(p); }
  void check_tangent(const Point& p, const Vec& v) const {
    check_size(p);
    check_size(v);
  }

  bool same_point(const Point& p, const Point& q) const {
    return (p - q).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, p.cwiseAbs().maxCoeff());
  }

  Point exp(const Point& p, const Vec& v) const {
    check_tangent(p, v);
    return p + v;
  }

  Vec log(const Point& p, const Point& q) const {
    check_point(p);
    check_point(q);
    return q - p;
  }

  double distance(const Point& p, const Point& q) const { return log(p, q).norm(); }

  double inner(const Point& p, const Vec& u, const Vec& v) const {
    check_tangent(p, u);
    check_tangent(p, v);
    return u.dot(v);
  }

  double norm(const Point& p, const Vec& v) const { return std::sqrt(inner(p, v, v)); }

  Point project(const Eigen::VectorXd& raw) const {
    check_size(raw);
    return raw;
  }

  Eigen::VectorXd to_ambient(const Point& p) const { return p; }
  Eigen::VectorXd vec_to_ambient(const Vec& v) const { return v; }
  Point from_ambient(const Eigen::VectorXd& x) const {
    check_size(x);
    return x;
  }

  Point perturb(const Point& p, const Eigen::VectorXd& delta) const { return p + delta; }

private:
  void check_size(const Eigen::VectorXd& v) const {
    if (v.size() != n_) throw invalid_input("euclidean: vector has wrong size");
  }

  Eigen::Index n_;
};

}  // namespace geodint
