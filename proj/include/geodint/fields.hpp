#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "geodint/errors.hpp"
#include "geodint/euclidean.hpp"
#include "geodint/sphere.hpp"
#include "geodint/spd.hpp"

namespace geodint {

/// Vector field on a manifold.  `eval` returns the tangent vector at a point.
/// For sphere fields of the form X(y) = a(y) x y the optional `axis` member
/// exposes the frame map a; the implicit Lie-Euler method requires it, since
/// that method depends on a and not only on X.
template <class Manifold>
struct VectorField {
  using Point = typename Manifold::Point;
  using Vec = typename Manifold::Vec;

  std::function<Vec(const Point&)> eval;
  std::function<Eigen::Vector3d(const Eigen::Vector3d&)> axis;
  /// Optional analytic chart data relative to the manifold's default chart:
  /// components X^k(x) and partials(x)(k, i) = d_i X^k.  When absent, chart
  /// views fall back to the ambient evaluation and finite differences.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> chart_components;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> chart_partials;

  Vec operator()(const Point& p) const { return eval(p); }
};

inline Eigen::Vector3d zero_like(const Eigen::Vector3d&) { return Eigen::Vector3d::Zero(); }
inline Eigen::VectorXd zero_like(const Eigen::VectorXd& p) {
  return Eigen::VectorXd::Zero(p.size());
}
inline Eigen::MatrixXd zero_like(const Eigen::MatrixXd& p) {
  return Eigen::MatrixXd::Zero(p.rows(), p.cols());
}

template <class Manifold>
VectorField<Manifold> zero_field(const Manifold&) {
  VectorField<Manifold> f;
  f.eval = [](const typename Manifold::Point& p) ->
      typename Manifold::Vec { return zero_like(p); };
  return f;
}

/// Rotation field X(y) = a x y about a fixed axis; a Killing field of the
/// round metric.  The flow is the rigid rotation about a with angular speed
/// |a|.
inline VectorField<Sphere2> killing_rotation_field(const Eigen::Vector3d& axis) {
  VectorField<Sphere2> f;
  f.eval = [axis](const Eigen::Vector3d& y) { return Eigen::Vector3d(axis.cross(y)); };
  f.axis = [axis](const Eigen::Vector3d&) { return axis; };
  return f;
}

/// One-parameter family of frame maps a_c(y) = e3 + (c - 1) y3 y.  Every
/// member represents the same vector field X(y) = a_c(y) x y = e3 x y, since
/// the radial part of the axis drops out of the cross product; integrators
/// that act through the frame map distinguish the members.
inline VectorField<Sphere2> isotropy_field(double c) {
  VectorField<Sphere2> f;
  f.eval = [](const Eigen::Vector3d& y) {
    return Eigen::Vector3d(Eigen::Vector3d::UnitZ().cross(y));
  };
  f.axis = [c](const Eigen::Vector3d& y) {
    return Eigen::Vector3d(Eigen::Vector3d::UnitZ() + (c - 1.0) * y.z() * y);
  };
  return f;
}

/// Target set and weights for a weighted Karcher mean problem; empty weights
/// mean uniform.
struct KarcherFieldSpec {
  std::vector<Eigen::MatrixXd> targets;
  std::vector<double> weights;
};

/// Negative gradient of the weighted sum of squared distances to the targets:
/// X(A) = sum_j w_j log_A(Y_j).  Its zero is the weighted Karcher mean.
/// Weights default to uniform 1/N.
inline VectorField<SpdManifold> karcher_gradient_field(const SpdManifold& m,
                                                       std::vector<Eigen::MatrixXd> targets,
                                                       std::vector<double> weights = {}) {
  if (targets.empty())
    throw invalid_input("karcher_gradient_field: need at least one target matrix");
  for (const auto& y : targets) m.check_point(y);
  if (weights.empty())
    weights.assign(targets.size(), 1.0 / static_cast<double>(targets.size()));
  if (weights.size() != targets.size())
    throw invalid_input("karcher_gradient_field: weights and targets differ in length");
  for (double w : weights)
    if (!(w > 0.0)) throw invalid_input("karcher_gradient_field: weights must be positive");
  VectorField<SpdManifold> f;
  f.eval = [m, targets = std::move(targets),
            weights = std::move(weights)](const Eigen::MatrixXd& a) {
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(a.rows(), a.cols());
    for (size_t j = 0; j < targets.size(); ++j) v += weights[j] * m.log(a, targets[j]);
    return v;
  };
  return f;
}

inline VectorField<SpdManifold> karcher_gradient_field(const SpdManifold& m,
                                                       const KarcherFieldSpec& spec) {
  return karcher_gradient_field(m, spec.targets, spec.weights);
}

/// Linear field X(x) = A x on flat space, with analytic chart data for the
/// identity chart.
inline VectorField<Euclidean> linear_field(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw invalid_input("linear_field: matrix must be square");
  VectorField<Euclidean> f;
  f.eval = [a](const Eigen::VectorXd& x) {
    if (x.size() != a.cols()) throw invalid_input("linear_field: point has wrong dimension");
    return Eigen::VectorXd(a * x);
  };
  f.chart_components = f.eval;
  f.chart_partials = [a](const Eigen::VectorXd&) { return a; };
  return f;
}

/// Field evaluation through ambient coordinates: the input is projected onto
/// the manifold, the field is evaluated there, and the tangent vector is
/// returned in ambient coordinates.  Used when differentiating fields in
/// chart coordinates.
template <class Manifold>
Eigen::VectorXd ambient_field_eval(const Manifold& m, const VectorField<Manifold>& f,
                                   const Eigen::VectorXd& w) {
  const auto p = m.from_ambient(w);
  return m.vec_to_ambient(f.eval(p));
}

}  // namespace geodint
