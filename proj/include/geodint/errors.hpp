#pragma once

#include <stdexcept>
#include <string>

namespace geodint {

/// Base class for all geodint errors.
class error : public std::runtime_error {
public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// A point, tangent or parameter violates a documented precondition
/// (off-manifold point, non-symmetric matrix, base mismatch, ...).
class invalid_input : public error {
public:
  using error::error;
};

/// Antipodal points on the sphere: the logarithm is not defined.
class no_unique_geodesic : public error {
public:
  using error::error;
};

/// Degenerate data that cannot be projected or normalized
/// (zero vector onto the sphere, vanishing spherical midpoint).
class degenerate_input : public error {
public:
  using error::error;
};

/// A chart was evaluated outside its domain.
class chart_domain_error : public error {
public:
  using error::error;
};

/// Singular or numerically unusable intermediate quantity.
class numerical_error : public error {
public:
  using error::error;
};

/// An iteration failed to converge within its budget.
class nonconvergence : public error {
public:
  using error::error;
};

/// A requested accuracy could not be reached (step-halving floor).
class accuracy_not_attained : public error {
public:
  using error::error;
};

/// A file could not be read or written.
class io_error : public error {
public:
  using error::error;
};

}  // namespace geodint
