#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "geodint/descriptor.hpp"
#include "geodint/errors.hpp"
#include "geodint/linalg.hpp"
#include "geodint/tolerances.hpp"

namespace geodint {

/// A single coordinate chart together with the metric and Christoffel symbols
/// expressed in those coordinates.  Points are exchanged through their ambient
/// coordinate vectors (unit vectors in R^3 for the sphere, vech coordinates
/// for symmetric positive definite matrices, plain vectors for flat space).
struct ChartBundle {
  Eigen::Index local_dim = 0;
  Eigen::Index ambient_dim = 0;
  /// Ambient coordinates -> chart coordinates.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> to_chart;
  /// Chart coordinates -> ambient coordinates.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> from_chart;
  /// Optional analytic Jacobian of to_chart at an ambient point (local_dim x
  /// ambient_dim).  When absent, chart_jacobian falls back to finite
  /// differences.
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> to_chart_jacobian;
  /// Metric matrix g(x) in chart coordinates (local_dim x local_dim).
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> metric;
  /// Christoffel symbols at x: result[k](i, j) = Gamma^k_{ij}.
  std::function<std::vector<Eigen::MatrixXd>(const Eigen::VectorXd&)> christoffel;
  /// Whether chart coordinates x lie safely inside the chart domain.
  std::function<bool(const Eigen::VectorXd&)> in_domain;
};

/// Rotation matrix taking unit vector a to unit vector b.
inline Eigen::Matrix3d rotation_taking(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return Eigen::Quaterniond::FromTwoVectors(a, b).normalized().toRotationMatrix();
}

/// Spherical coordinate chart on the unit sphere, precomposed with a rotation
/// R.  Coordinates are x = (theta, phi) with u = R * w, theta the polar angle
/// of u and phi its azimuth.  The domain excludes neighbourhoods of the chart
/// poles and of the azimuth seam.
inline ChartBundle sphere2_chart(const Eigen::Matrix3d& R = Eigen::Matrix3d::Identity()) {
  ChartBundle b;
  b.local_dim = 2;
  b.ambient_dim = 3;
  b.to_chart = [R](const Eigen::VectorXd& w) {
    if (w.size() != 3) throw invalid_input("sphere2 chart: ambient vector must have size 3");
    const Eigen::Vector3d u = R * Eigen::Vector3d(w);
    const double rho = std::hypot(u.x(), u.y());
    Eigen::VectorXd x(2);
    x << std::atan2(rho, u.z()), std::atan2(u.y(), u.x());
    return x;
  };
  b.from_chart = [R](const Eigen::VectorXd& x) {
    if (x.size() != 2) throw invalid_input("sphere2 chart: coordinates must have size 2");
    const double th = x[0], ph = x[1];
    const Eigen::Vector3d u(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                            std::cos(th));
    return Eigen::VectorXd(R.transpose() * u);
  };
  b.to_chart_jacobian = [R](const Eigen::VectorXd& w) {
    const Eigen::Vector3d u = R * Eigen::Vector3d(w);
    const double rho = std::hypot(u.x(), u.y());
    const double r2 = u.squaredNorm();
    if (rho < 1e-14 || r2 < 1e-28)
      throw chart_domain_error("sphere2 chart: Jacobian undefined at chart pole");
    Eigen::MatrixXd Ju(2, 3);
    Ju << u.z() * u.x() / (rho * r2), u.z() * u.y() / (rho * r2), -rho / r2,
        -u.y() / (rho * rho), u.x() / (rho * rho), 0.0;
    return Eigen::MatrixXd(Ju * R);
  };
  b.metric = [](const Eigen::VectorXd& x) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2, 2);
    const double s = std::sin(x[0]);
    g(0, 0) = 1.0;
    g(1, 1) = s * s;
    return g;
  };
  b.christoffel = [](const Eigen::VectorXd& x) {
    const double th = x[0];
    const double s = std::sin(th), c = std::cos(th);
    std::vector<Eigen::MatrixXd> gamma(2, Eigen::MatrixXd::Zero(2, 2));
    gamma[0](1, 1) = -s * c;
    if (std::abs(s) < 1e-14)
      throw chart_domain_error("sphere2 chart: Christoffel symbols undefined at chart pole");
    gamma[1](0, 1) = gamma[1](1, 0) = c / s;
    return gamma;
  };
  b.in_domain = [](const Eigen::VectorXd& x) {
    const double th = x[0], ph = x[1];
    return th > 1e-4 && th < M_PI - 1e-4 && std::abs(ph) < M_PI - 1e-3;
  };
  return b;
}

/// Chart rotated so that `center` maps to the equator point (theta, phi) =
/// (pi/2, 0), keeping a neighbourhood of `center` well inside the domain.
inline ChartBundle sphere2_chart_centered(const Eigen::Vector3d& center) {
  return sphere2_chart(rotation_taking(center.normalized(), Eigen::Vector3d::UnitX()));
}

/// Global chart on symmetric positive definite matrices: the identity map on
/// vech coordinates, with the affine-invariant metric
/// g_IJ(A) = trace(A^{-1} E_I A^{-1} E_J) and Christoffel symbols obtained
/// from Gamma(U, V) = -(U A^{-1} V + V A^{-1} U) / 2 expanded in the vech
/// basis.
inline ChartBundle spd_chart(Eigen::Index n) {
  if (n < 1) throw invalid_input("spd chart: matrix size must be at least 1");
  const Eigen::Index d = vech_size(n);
  ChartBundle b;
  b.local_dim = d;
  b.ambient_dim = d;
  b.to_chart = [d](const Eigen::VectorXd& w) {
    if (w.size() != d) throw invalid_input("spd chart: ambient vector has wrong size");
    return w;
  };
  b.from_chart = [d](const Eigen::VectorXd& x) {
    if (x.size() != d) throw invalid_input("spd chart: coordinates have wrong size");
    return x;
  };
  b.to_chart_jacobian = [d](const Eigen::VectorXd&) {
    return Eigen::MatrixXd(Eigen::MatrixXd::Identity(d, d));
  };
  b.metric = [n, d](const Eigen::VectorXd& x) {
    const Eigen::MatrixXd a = unvech(x, n);
    const Eigen::MatrixXd ainv = a.llt().solve(Eigen::MatrixXd::Identity(n, n));
    std::vector<Eigen::MatrixXd> m(static_cast<size_t>(d));
    for (Eigen::Index k = 0; k < d; ++k)
      m[static_cast<size_t>(k)] = ainv * vech_basis_element(n, k);
    Eigen::MatrixXd g(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = i; j < d; ++j) {
        g(i, j) = (m[static_cast<size_t>(i)] * m[static_cast<size_t>(j)]).trace();
        g(j, i) = g(i, j);
      }
    return g;
  };
  b.christoffel = [n, d](const Eigen::VectorXd& x) {
    const Eigen::MatrixXd a = unvech(x, n);
    const Eigen::MatrixXd ainv = a.llt().solve(Eigen::MatrixXd::Identity(n, n));
    std::vector<Eigen::MatrixXd> gamma(static_cast<size_t>(d), Eigen::MatrixXd::Zero(d, d));
    for (Eigen::Index i = 0; i < d; ++i) {
      const Eigen::MatrixXd ei = vech_basis_element(n, i);
      for (Eigen::Index j = i; j < d; ++j) {
        const Eigen::MatrixXd ej = vech_basis_element(n, j);
        const Eigen::MatrixXd gij = -0.5 * (ei * ainv * ej + ej * ainv * ei);
        const Eigen::VectorXd coeffs = vech(symmetrize(gij));
        for (Eigen::Index k = 0; k < d; ++k) {
          gamma[static_cast<size_t>(k)](i, j) = coeffs[k];
          gamma[static_cast<size_t>(k)](j, i) = coeffs[k];
        }
      }
    }
    return gamma;
  };
  b.in_domain = [n](const Eigen::VectorXd& x) {
    const Eigen::MatrixXd a = unvech(x, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() > tol::spd_floor;
  };
  return b;
}

/// Identity chart on flat space.
inline ChartBundle euclidean_chart(Eigen::Index n) {
  if (n < 1) throw invalid_input("euclidean chart: dimension must be at least 1");
  ChartBundle b;
  b.local_dim = n;
  b.ambient_dim = n;
  b.to_chart = [n](const Eigen::VectorXd& w) {
    if (w.size() != n) throw invalid_input("euclidean chart: vector has wrong size");
    return w;
  };
  b.from_chart = [n](const Eigen::VectorXd& x) {
    if (x.size() != n) throw invalid_input("euclidean chart: vector has wrong size");
    return x;
  };
  b.to_chart_jacobian = [n](const Eigen::VectorXd&) {
    return Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n));
  };
  b.metric = [n](const Eigen::VectorXd&) {
    return Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n));
  };
  b.christoffel = [n](const Eigen::VectorXd&) {
    return std::vector<Eigen::MatrixXd>(static_cast<size_t>(n), Eigen::MatrixXd::Zero(n, n));
  };
  b.in_domain = [](const Eigen::VectorXd&) { return true; };
  return b;
}

/// Default chart for a manifold descriptor.
inline ChartBundle chart_bundle(const ManifoldDescriptor& desc) {
  switch (desc.kind) {
    case ManifoldKind::sphere2: return sphere2_chart();
    case ManifoldKind::spd: return spd_chart(desc.n);
    case ManifoldKind::euclidean: return euclidean_chart(desc.n);
  }
  throw invalid_input("chart_bundle: unknown manifold kind");
}

/// Jacobian of to_chart at an ambient point, analytic when available and
/// central finite differences otherwise.
inline Eigen::MatrixXd chart_jacobian(const ChartBundle& b, const Eigen::VectorXd& ambient) {
  if (b.to_chart_jacobian) return b.to_chart_jacobian(ambient);
  const double step = 1e-7 * std::max(1.0, ambient.norm());
  Eigen::MatrixXd jac(b.local_dim, b.ambient_dim);
  for (Eigen::Index j = 0; j < b.ambient_dim; ++j) {
    Eigen::VectorXd hi = ambient, lo = ambient;
    hi[j] += step;
    lo[j] -= step;
    jac.col(j) = (b.to_chart(hi) - b.to_chart(lo)) / (2.0 * step);
  }
  return jac;
}

/// Chart components of an ambient tangent vector attached at `ambient`.
inline Eigen::VectorXd to_chart_tangent(const ChartBundle& b, const Eigen::VectorXd& ambient,
                                        const Eigen::VectorXd& vec) {
  return chart_jacobian(b, ambient) * vec;
}

}  // namespace geodint
