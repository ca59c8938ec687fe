#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <random>

namespace geodint {

/// Deterministic random helpers. The bit-to-double conversions are spelled
/// out instead of going through std::uniform_real_distribution so that a
/// given seed produces the same stream on every standard library.
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline double normal01(Rng& rng) {
  // Box-Muller without a cached spare; keeps the stream position predictable.
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  constexpr double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

inline Eigen::VectorXd normal_vector(Rng& rng, Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal01(rng);
  return v;
}

/// Uniform point on the unit 2-sphere.
inline Eigen::Vector3d random_unit3(Rng& rng) {
  Eigen::Vector3d v;
  do {
    v = Eigen::Vector3d(normal01(rng), normal01(rng), normal01(rng));
  } while (v.norm() < 1e-12);
  return v.normalized();
}

}  // namespace geodint
