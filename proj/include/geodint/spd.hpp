#pragma once

#include <Eigen/Core>
#include <cmath>

#include "geodint/errors.hpp"
#include "geodint/linalg.hpp"
#include "geodint/tolerances.hpp"

namespace geodint {

/// Symmetric positive definite n x n matrices with the affine-invariant
/// metric g_A(U, V) = trace(A^-1 U A^-1 V). Tangents at any point are the
/// symmetric matrices. Solver and chart coordinates are the vech
/// (upper-triangle) coordinates of dimension n(n+1)/2.
class SpdManifold {
public:
  explicit SpdManifold(Eigen::Index n) : n_(n) {
    if (n < 1) throw invalid_input("spd: matrix size must be at least 1");
  }

  using Point = Eigen::MatrixXd;
  using Vec = Eigen::MatrixXd;

  Eigen::Index size() const { return n_; }
  Eigen::Index dim() const { return vech_size(n_); }
  Eigen::Index dof() const { return dim(); }
  Eigen::Index ambient_dim() const { return dim(); }

  void check_point(const Point& a) const {
    check_shape(a);
    if (!is_symmetric(a, sym_tol(a)))
      throw invalid_input("spd: point matrix is not symmetric");
    if (min_eigenvalue(a) <= 0.0)
      throw invalid_input("spd: point matrix is not positive definite");
  }

  void check_tangent(const Point& a, const Vec& v) const {
    check_point(a);
    check_shape(v);
    if (!is_symmetric(v, sym_tol(v)))
      throw invalid_input("spd: tangent matrix is not symmetric");
  }

  bool same_point(const Point& a, const Point& b) const {
    return (a - b).cwiseAbs().maxCoeff() <= tol::point * std::max(1.0, a.cwiseAbs().maxCoeff());
  }

  /// exp_A(V) = A^{1/2} expm(A^{-1/2} V A^{-1/2}) A^{1/2}
  Point exp(const Point& a, const Vec& v) const {
    check_tangent(a, v);
    auto [s, si] = sqrt_pair(a);
    Eigen::MatrixXd m = symmetrize(si * v * si);
    return symmetrize(s * expm_sym(m) * s);
  }

  /// log_A(B) = A^{1/2} logm(A^{-1/2} B A^{-1/2}) A^{1/2}
  Vec log(const Point& a, const Point& b) const {
    check_point(a);
    check_point(b);
    auto [s, si] = sqrt_pair(a);
    Eigen::MatrixXd m = symmetrize(si * b * si);
    return symmetrize(s * logm_spd(m) * s);
  }

  /// d(A, B) = sqrt(sum_i log^2 lambda_i(A^{-1/2} B A^{-1/2}))
  double distance(const Point& a, const Point& b) const {
    check_point(a);
    check_point(b);
    auto [s, si] = sqrt_pair(a);
    (void)s;
    Eigen::VectorXd lam = sym_eig(symmetrize(si * b * si)).values;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      if (lam[i] <= 0.0) throw numerical_error("spd: distance eigenvalue underflow");
      const double l = std::log(lam[i]);
      acc += l * l;
    }
    return std::sqrt(acc);
  }

  double inner(const Point& a, const Vec& u, const Vec& v) const {
    check_tangent(a, u);
    check_tangent(a, v);
    Eigen::MatrixXd ai = inverse_spd(a);
    return (ai * u * ai * v).trace();
  }

  double norm(const Point& a, const Vec& v) const {
    const double q = inner(a, v, v);
    return std::sqrt(std::max(0.0, q));
  }

  /// Symmetrize, then clip eigenvalues at the SPD floor.
  Point project(const Eigen::MatrixXd& raw) const {
    check_shape(raw);
    Eigen::MatrixXd s = symmetrize(raw);
    SymEig eig = sym_eig(s);
    bool clipped = false;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i)
      if (eig.values[i] < tol::spd_floor) {
        eig.values[i] = tol::spd_floor;
        clipped = true;
      }
    if (!clipped) return s;
    return symmetrize(eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose());
  }

  Eigen::VectorXd to_ambient(const Point& a) const { return vech(a); }
  Eigen::VectorXd vec_to_ambient(const Vec& v) const { return vech(v); }
  Point from_ambient(const Eigen::VectorXd& x) const {
    if (x.size() != dim()) throw invalid_input("spd: ambient vector has wrong size");
    return project(unvech(x, n_));
  }

  Point perturb(const Point& a, const Eigen::VectorXd& delta) const {
    return project(a + unvech(delta, n_));
  }

  Eigen::MatrixXd inverse_spd(const Point& a) const {
    return sym_matrix_function(a, [](double x) {
      if (x <= 0.0) throw numerical_error("spd: singular matrix");
      return 1.0 / x;
    });
  }

private:
  void check_shape(const Eigen::MatrixXd& m) const {
    if (m.rows() != n_ || m.cols() != n_)
      throw invalid_input("spd: matrix has wrong shape");
  }

  static double sym_tol(const Eigen::MatrixXd& m) {
    return tol::point * std::max(1.0, m.cwiseAbs().maxCoeff());
  }

  /// One eigendecomposition serving both A^{1/2} and A^{-1/2}.
  std::pair<Eigen::MatrixXd, Eigen::MatrixXd> sqrt_pair(const Point& a) const {
    SymEig eig = sym_eig(a);
    Eigen::VectorXd rs(eig.values.size()), ris(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
      if (eig.values[i] <= 0.0) throw numerical_error("spd: nonpositive eigenvalue");
      rs[i] = std::sqrt(eig.values[i]);
      ris[i] = 1.0 / rs[i];
    }
    Eigen::MatrixXd s = symmetrize(eig.vectors * rs.asDiagonal() * eig.vectors.transpose());
    Eigen::MatrixXd si = symmetrize(eig.vectors * ris.asDiagonal() * eig.vectors.transpose());
    return {s, si};
  }

  Eigen::Index n_;
};

}  // namespace geodint
