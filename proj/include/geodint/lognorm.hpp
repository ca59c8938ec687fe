#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "geodint/chart.hpp"
#include "geodint/errors.hpp"
#include "geodint/fields.hpp"
#include "geodint/linalg.hpp"
#include "geodint/rng.hpp"

namespace geodint {

/// View of a vector field in a fixed chart: components X^k(x) and their
/// partial derivatives.  Components are obtained by pushing the ambient value
/// through the chart Jacobian; partials by central differences with step
/// max(1e-6, 1e-6 |x|) unless the field supplies analytic chart data
/// (which must refer to the same chart).
template <class Manifold>
class ChartFieldView {
 public:
  ChartFieldView(Manifold manifold, VectorField<Manifold> field, ChartBundle bundle)
      : manifold_(std::move(manifold)), field_(std::move(field)), bundle_(std::move(bundle)) {}

  Eigen::VectorXd components(const Eigen::VectorXd& x) const {
    if (field_.chart_components) return field_.chart_components(x);
    const Eigen::VectorXd w = bundle_.from_chart(x);
    return chart_jacobian(bundle_, w) * ambient_field_eval(manifold_, field_, w);
  }

  /// partials(x)(k, i) = d X^k / d x^i.
  Eigen::MatrixXd partials(const Eigen::VectorXd& x) const {
    if (field_.chart_partials) return field_.chart_partials(x);
    const double step = std::max(1e-6, 1e-6 * x.norm());
    Eigen::MatrixXd p(bundle_.local_dim, bundle_.local_dim);
    for (Eigen::Index i = 0; i < bundle_.local_dim; ++i) {
      Eigen::VectorXd hi = x, lo = x;
      hi[i] += step;
      lo[i] -= step;
      p.col(i) = (components(hi) - components(lo)) / (2.0 * step);
    }
    return p;
  }

  const Manifold& manifold() const { return manifold_; }
  const VectorField<Manifold>& field() const { return field_; }
  const ChartBundle& bundle() const { return bundle_; }

 private:
  Manifold manifold_;
  VectorField<Manifold> field_;
  ChartBundle bundle_;
};

/// Coordinate matrix of the covariant derivative:
/// A^k_i = d_i X^k + Gamma^k_{ij} X^j.
template <class Manifold>
Eigen::MatrixXd covariant_derivative_matrix(const ChartFieldView<Manifold>& view,
                                            const Eigen::VectorXd& x) {
  if (!view.bundle().in_domain(x))
    throw chart_domain_error("covariant derivative: point outside chart domain");
  const Eigen::VectorXd comps = view.components(x);
  Eigen::MatrixXd a = view.partials(x);
  const auto gamma = view.bundle().christoffel(x);
  for (Eigen::Index k = 0; k < a.rows(); ++k)
    for (Eigen::Index i = 0; i < a.cols(); ++i)
      a(k, i) += gamma[static_cast<size_t>(k)].row(i).dot(comps);
  return a;
}

/// Logarithmic g-norm of the covariant derivative at x:
/// mu = lambda_max((B + B^T)/2) with B = g^{1/2} A g^{-1/2},
/// which equals sup_{v != 0} g(A v, v) / g(v, v).
template <class Manifold>
double log_norm_at(const ChartFieldView<Manifold>& view, const Eigen::VectorXd& x) {
  const Eigen::MatrixXd a = covariant_derivative_matrix(view, x);
  const Eigen::MatrixXd g = view.bundle().metric(x);
  if (min_eigenvalue(symmetrize(g)) <= 0.0)
    throw numerical_error("log_norm_at: metric matrix is not positive definite");
  const Eigen::MatrixXd b = sqrtm_spd(g) * a * invsqrtm_spd(g);
  return max_eigenvalue(symmetrize(b));
}

/// Max over trial tangent pairs (Y, Z) of |<A Y, Z>_g + <A Z, Y>_g|;
/// values near zero certify the Killing property at x.
template <class Manifold>
double killing_defect(const ChartFieldView<Manifold>& view, const Eigen::VectorXd& x,
                      const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& pairs) {
  if (pairs.empty()) throw invalid_input("killing_defect: need at least one trial pair");
  const Eigen::MatrixXd a = covariant_derivative_matrix(view, x);
  const Eigen::MatrixXd g = view.bundle().metric(x);
  const Eigen::MatrixXd m = a.transpose() * g + g * a;
  double defect = 0.0;
  for (const auto& [y, z] : pairs) defect = std::max(defect, std::abs(y.dot(m * z)));
  return defect;
}

/// Killing defect probed with all coordinate basis pairs.
template <class Manifold>
double killing_defect(const ChartFieldView<Manifold>& view, const Eigen::VectorXd& x) {
  const Eigen::Index d = view.bundle().local_dim;
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> pairs;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i; j < d; ++j)
      pairs.emplace_back(Eigen::VectorXd::Unit(d, i), Eigen::VectorXd::Unit(d, j));
  return killing_defect(view, x, pairs);
}

/// Axis-aligned box in chart coordinates, sampled uniformly per coordinate.
struct ChartBoxRegion {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

/// Geodesic ball given by an ambient center and a radius.
struct GeodesicBallRegion {
  Eigen::VectorXd center;
  double radius = 0.0;
};

inline std::string describe_region(const ChartBoxRegion& r) {
  std::string s = "chart-box[";
  for (Eigen::Index i = 0; i < r.lo.size(); ++i) {
    if (i) s += "; ";
    s += std::to_string(r.lo[i]) + ".." + std::to_string(r.hi[i]);
  }
  return s + "]";
}

inline std::string describe_region(const GeodesicBallRegion& r) {
  return "geodesic-ball[radius " + std::to_string(r.radius) + "]";
}

template <class Manifold>
Eigen::VectorXd sample_region(const Manifold&, const ChartBundle& bundle,
                              const ChartBoxRegion& region, Rng& rng) {
  if (region.lo.size() != bundle.local_dim || region.hi.size() != bundle.local_dim)
    throw invalid_input("sample_region: box bounds do not match the chart dimension");
  Eigen::VectorXd x(region.lo.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(region.lo[i] <= region.hi[i]))
      throw invalid_input("sample_region: box has lo > hi");
    x[i] = uniform(rng, region.lo[i], region.hi[i]);
  }
  return x;
}

inline Eigen::VectorXd sample_region(const Sphere2& m, const ChartBundle& bundle,
                                     const GeodesicBallRegion& region, Rng& rng) {
  if (region.center.size() != 3)
    throw invalid_input("sample_region: sphere ball center must be a 3-vector");
  if (!(region.radius > 0.0 && region.radius <= M_PI))
    throw invalid_input("sample_region: sphere ball radius must lie in (0, pi]");
  const Eigen::Vector3d center = m.from_ambient(region.center);
  const double zmin = std::cos(region.radius);
  const double z = zmin + (1.0 - zmin) * uniform01(rng);
  const double phi = 2.0 * M_PI * uniform01(rng);
  const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
  const Eigen::Vector3d local(rho * std::cos(phi), rho * std::sin(phi), z);
  const Eigen::Vector3d p = rotation_taking(Eigen::Vector3d::UnitZ(), center) * local;
  return bundle.to_chart(p);
}

inline Eigen::VectorXd sample_region(const SpdManifold& m, const ChartBundle& bundle,
                                     const GeodesicBallRegion& region, Rng& rng) {
  if (!(region.radius > 0.0))
    throw invalid_input("sample_region: ball radius must be positive");
  const Eigen::MatrixXd center = m.from_ambient(region.center);
  const double t =
      region.radius * std::pow(uniform01(rng), 1.0 / static_cast<double>(m.dof()));
  Eigen::VectorXd coeffs(m.dim());
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs[i] = normal01(rng);
  Eigen::MatrixXd dir = unvech(coeffs, m.size());
  const double nrm = m.norm(center, dir);
  if (nrm < 1e-14) dir = Eigen::MatrixXd::Identity(m.size(), m.size());
  else dir /= nrm;
  return bundle.to_chart(m.to_ambient(m.exp(center, t * dir)));
}

inline Eigen::VectorXd sample_region(const Euclidean& m, const ChartBundle& bundle,
                                     const GeodesicBallRegion& region, Rng& rng) {
  if (region.center.size() != m.dim())
    throw invalid_input("sample_region: ball center has wrong dimension");
  if (!(region.radius > 0.0))
    throw invalid_input("sample_region: ball radius must be positive");
  const double t =
      region.radius * std::pow(uniform01(rng), 1.0 / static_cast<double>(m.dim()));
  const Eigen::VectorXd dir = normal_vector(rng, m.dim()).normalized();
  return bundle.to_chart(region.center + t * dir);
}

struct MonotonicitySample {
  Eigen::VectorXd x;
  double mu = 0.0;
};

/// Estimate of the monotonicity constant nu = sup mu over a region.
struct MonotonicityEstimate {
  double nu = -std::numeric_limits<double>::infinity();
  std::vector<MonotonicitySample> samples;
  std::string region;
};

/// Samples the region and maximizes the logarithmic g-norm over the samples.
/// Sampling is sequential in the supplied generator, so with a fixed seed a
/// larger sample count extends the smaller one and nu never decreases.
template <class Manifold, class Region>
MonotonicityEstimate estimate_nu(const ChartFieldView<Manifold>& view, const Region& region,
                                 std::size_t n_samples, Rng& rng) {
  if (n_samples == 0) throw invalid_input("estimate_nu: sample count must be positive");
  MonotonicityEstimate est;
  est.region = describe_region(region);
  est.samples.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const Eigen::VectorXd x = sample_region(view.manifold(), view.bundle(), region, rng);
    if (!view.bundle().in_domain(x))
      throw chart_domain_error("estimate_nu: sampled point left the chart domain");
    const double mu = log_norm_at(view, x);
    est.samples.push_back({x, mu});
    est.nu = std::max(est.nu, mu);
  }
  return est;
}

/// Logarithmic g-norm on the sphere at an ambient point, evaluated in a chart
/// centered at that point; mu is chart-invariant, so the choice only affects
/// conditioning.
inline double sphere_log_norm_at_point(const Sphere2& m, const VectorField<Sphere2>& f,
                                       const Eigen::Vector3d& p) {
  ChartBundle b = sphere2_chart_centered(p);
  ChartFieldView<Sphere2> view(m, f, b);
  return log_norm_at(view, b.to_chart(Eigen::VectorXd(p)));
}

}  // namespace geodint
