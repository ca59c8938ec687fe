#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <utility>

#include "geodint/errors.hpp"

namespace geodint {

inline Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

inline bool is_symmetric(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

struct SymEig {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns
};

/// Eigendecomposition of a symmetric matrix. The 2x2 case is closed-form;
/// it dominates the runtime of the SPD manifold operations.
inline SymEig sym_eig(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw invalid_input("sym_eig: matrix not square");
  SymEig out;
  if (n == 1) {
    out.values = Eigen::VectorXd::Constant(1, m(0, 0));
    out.vectors = Eigen::MatrixXd::Identity(1, 1);
    return out;
  }
  if (n == 2) {
    const double a = m(0, 0), b = 0.5 * (m(0, 1) + m(1, 0)), c = m(1, 1);
    const double tr = a + c;
    const double disc = std::sqrt(std::max(0.0, 0.25 * (a - c) * (a - c) + b * b));
    const double l0 = 0.5 * tr - disc;
    const double l1 = 0.5 * tr + disc;
    out.values = Eigen::VectorXd(2);
    out.values << l0, l1;
    out.vectors = Eigen::MatrixXd(2, 2);
    if (disc < 1e-300) {
      out.vectors.setIdentity();
    } else {
      // Eigenvector for l1 from the better-conditioned row.
      Eigen::Vector2d v1;
      if (std::abs(a - l1) > std::abs(c - l1)) {
        v1 << b, l1 - a;
      } else {
        v1 << l1 - c, b;
      }
      const double nv = v1.norm();
      if (nv < 1e-300) {
        out.vectors.setIdentity();
      } else {
        v1 /= nv;
        out.vectors.col(1) = v1;
        out.vectors.col(0) = Eigen::Vector2d(-v1.y(), v1.x());
      }
    }
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(m));
  if (es.info() != Eigen::Success) throw numerical_error("sym_eig: eigensolver failed");
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  return out;
}

/// Applies a scalar function to a symmetric matrix through its spectrum.
template <class F>
Eigen::MatrixXd sym_matrix_function(const Eigen::MatrixXd& m, F&& f) {
  SymEig eig = sym_eig(m);
  Eigen::VectorXd fv(eig.values.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) fv[i] = f(eig.values[i]);
  return symmetrize(eig.vectors * fv.asDiagonal() * eig.vectors.transpose());
}

inline Eigen::MatrixXd expm_sym(const Eigen::MatrixXd& m) {
  return sym_matrix_function(m, [](double x) { return std::exp(x); });
}

inline Eigen::MatrixXd logm_spd(const Eigen::MatrixXd& m) {
  return sym_matrix_function(m, [](double x) {
    if (x <= 0.0) throw numerical_error("logm_spd: nonpositive eigenvalue");
    return std::log(x);
  });
}

inline Eigen::MatrixXd sqrtm_spd(const Eigen::MatrixXd& m) {
  return sym_matrix_function(m, [](double x) {
    if (x < 0.0) throw numerical_error("sqrtm_spd: negative eigenvalue");
    return std::sqrt(x);
  });
}

inline Eigen::MatrixXd invsqrtm_spd(const Eigen::MatrixXd& m) {
  return sym_matrix_function(m, [](double x) {
    if (x <= 0.0) throw numerical_error("invsqrtm_spd: nonpositive eigenvalue");
    return 1.0 / std::sqrt(x);
  });
}

inline double min_eigenvalue(const Eigen::MatrixXd& m) {
  return sym_eig(m).values.minCoeff();
}

inline double max_eigenvalue(const Eigen::MatrixXd& m) {
  return sym_eig(m).values.maxCoeff();
}

/// Half-vectorization index for the upper triangle, column-lexicographic:
/// (0,0), (0,1), (1,1), (0,2), (1,2), (2,2), ...
inline Eigen::Index vech_index(Eigen::Index i, Eigen::Index j) {
  if (i > j) std::swap(i, j);
  return j * (j + 1) / 2 + i;
}

inline Eigen::Index vech_size(Eigen::Index n) { return n * (n + 1) / 2; }

inline Eigen::VectorXd vech(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  Eigen::VectorXd x(vech_size(n));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) x[vech_index(i, j)] = m(i, j);
  return x;
}

inline Eigen::MatrixXd unvech(const Eigen::VectorXd& x, Eigen::Index n) {
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) m(i, j) = m(j, i) = x[vech_index(i, j)];
  return m;
}

/// Basis element of symmetric matrices dual to the vech coordinates:
/// E_(i,i) = e_i e_i^T and E_(i,j) = e_i e_j^T + e_j e_i^T for i < j.
inline Eigen::MatrixXd vech_basis_element(Eigen::Index n, Eigen::Index idx) {
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i)
      if (vech_index(i, j) == idx) {
        e(i, j) = 1.0;
        e(j, i) = 1.0;
        return e;
      }
  throw invalid_input("vech_basis_element: index out of range");
}

}  // namespace geodint
