#pragma once

#include <string>

#include "geodint/errors.hpp"
#include "geodint/euclidean.hpp"
#include "geodint/linalg.hpp"
#include "geodint/sphere.hpp"
#include "geodint/spd.hpp"

namespace geodint {

enum class ManifoldKind { sphere2, spd, euclidean };

enum class CurvatureSign { negative_or_zero, positive, zero };

/// Metadata describing one of the implemented manifolds.
struct ManifoldDescriptor {
  ManifoldKind kind = ManifoldKind::sphere2;
  Eigen::Index n = 0;  // matrix size for spd, dimension for euclidean

  static ManifoldDescriptor sphere2() { return {ManifoldKind::sphere2, 0}; }
  static ManifoldDescriptor spd(Eigen::Index n) {
    if (n < 1) throw invalid_input("descriptor: spd size must be at least 1");
    return {ManifoldKind::spd, n};
  }
  static ManifoldDescriptor euclidean(Eigen::Index n) {
    if (n < 1) throw invalid_input("descriptor: euclidean dimension must be at least 1");
    return {ManifoldKind::euclidean, n};
  }

  Eigen::Index dimension() const {
    switch (kind) {
      case ManifoldKind::sphere2: return 2;
      case ManifoldKind::spd: return vech_size(n);
      case ManifoldKind::euclidean: return n;
    }
    throw invalid_input("descriptor: unknown manifold kind");
  }

  CurvatureSign curvature_sign() const {
    switch (kind) {
      case ManifoldKind::sphere2: return CurvatureSign::positive;
      case ManifoldKind::spd: return CurvatureSign::negative_or_zero;
      case ManifoldKind::euclidean: return CurvatureSign::zero;
    }
    throw invalid_input("descriptor: unknown manifold kind");
  }

  std::string name() const {
    switch (kind) {
      case ManifoldKind::sphere2: return "sphere2";
      case ManifoldKind::spd: return "spd(" + std::to_string(n) + ")";
      case ManifoldKind::euclidean: return "euclidean(" + std::to_string(n) + ")";
    }
    return "?";
  }
};

inline ManifoldDescriptor descriptor_of(const Sphere2&) {
  return ManifoldDescriptor::sphere2();
}
inline ManifoldDescriptor descriptor_of(const SpdManifold& m) {
  return ManifoldDescriptor::spd(m.size());
}
inline ManifoldDescriptor descriptor_of(const Euclidean& m) {
  return ManifoldDescriptor::euclidean(m.dim());
}

}  // namespace geodint
