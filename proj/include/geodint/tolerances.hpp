#pragma once

namespace geodint::tol {

/// Point-invariant checks (unit norm, symmetry).
inline constexpr double point = 1e-12;
/// Tangency checks on the sphere.
inline constexpr double tangent = 1e-10;
/// Geometric identities (exp/log inversion, geodesic length).
inline constexpr double geodesic = 1e-9;
/// Eigenvalue floor when projecting onto the SPD cone.
inline constexpr double spd_floor = 1e-12;

}  // namespace geodint::tol
