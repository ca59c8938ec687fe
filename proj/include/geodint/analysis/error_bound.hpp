#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "geodint/errors.hpp"
#include "geodint/reference.hpp"

namespace geodint {

/// Local error constant: C = max over sample points and grid steps of
/// d(flow(y, h), step(y, h)) / h^{p+1}, with the flow evaluated by the
/// reference integrator.
template <class Manifold>
double estimate_local_constant(const Manifold& m, const MethodId& id,
                               const VectorField<Manifold>& field,
                               const std::vector<typename Manifold::Point>& samples,
                               const std::vector<double>& h_grid, int p,
                               const SolverConfig& cfg, double fine_tol) {
  if (samples.empty()) throw invalid_input("local constant: need at least one sample point");
  if (h_grid.empty()) throw invalid_input("local constant: step grid is empty");
  if (p < 1) throw invalid_input("local constant: order must be at least 1");
  double c = 0.0;
  for (const auto& y : samples) {
    for (double h : h_grid) {
      if (!(h > 0.0)) throw invalid_input("local constant: steps must be positive");
      const auto exact = reference_flow(m, field, y, h, fine_tol);
      const auto out = method_step(m, id, field, y, h, cfg);
      if (!out.converged)
        throw nonconvergence("local constant: implicit step failed to converge");
      c = std::max(c, m.distance(exact, out.principal()) / std::pow(h, p + 1));
    }
  }
  return c;
}

/// Value of the one-step global error bound at final time t_star for local
/// constant C, monotonicity constant nu, and order p, split by the sign of
/// nu.
inline double error_bound_value(double nu, double c, int p, double t_star, double h) {
  const double hp = std::pow(h, p);
  if (nu > 0.0) return c / nu * (std::exp(t_star * nu) - 1.0) * hp;
  if (nu == 0.0) return c * t_star * hp;
  return c * std::exp(-nu * h) / nu * (std::exp(t_star * nu) - 1.0) * hp;
}

struct ErrorBoundReport {
  double nu = 0.0;
  double c = 0.0;
  int p = 1;
  double t_star = 0.0;
  std::vector<double> h_grid;
  std::vector<int> step_counts;
  std::vector<double> measured_errors;
  std::vector<double> bound_values;
  double order_estimate = std::numeric_limits<double>::quiet_NaN();
};

/// Integrates to t_star with each grid step, measures the end-point error
/// against the reference flow, evaluates the bound, and fits the convergence
/// order by least squares on log error vs log h.  Every grid step must
/// divide t_star.
template <class Manifold>
ErrorBoundReport global_error_study(const Manifold& m, const MethodId& id,
                                    const VectorField<Manifold>& field,
                                    const typename Manifold::Point& y0, double t_star,
                                    const std::vector<double>& h_grid, double nu, double c,
                                    int p, const SolverConfig& cfg, double fine_tol) {
  if (!(t_star > 0.0)) throw invalid_input("global error study: t_star must be positive");
  if (h_grid.empty()) throw invalid_input("global error study: step grid is empty");
  ErrorBoundReport report;
  report.nu = nu;
  report.c = c;
  report.p = p;
  report.t_star = t_star;
  report.h_grid = h_grid;

  const auto exact = reference_flow(m, field, y0, t_star, fine_tol);
  for (double h : h_grid) {
    if (!(h > 0.0)) throw invalid_input("global error study: steps must be positive");
    const double k_real = t_star / h;
    const int k = static_cast<int>(std::lround(k_real));
    if (k < 1 || std::abs(k_real - k) > 1e-9 * k_real)
      throw invalid_input("global error study: every step must divide t_star exactly");
    const auto traj = integrate(m, id, field, y0, h, k, cfg);
    if (!traj.complete)
      throw nonconvergence("global error study: trajectory step " +
                           std::to_string(traj.failed_step) + " failed to converge");
    report.step_counts.push_back(k);
    report.measured_errors.push_back(m.distance(exact, traj.points.back()));
    report.bound_values.push_back(error_bound_value(nu, c, p, t_star, h));
  }

  bool fit_ok = report.measured_errors.size() >= 2;
  for (double e : report.measured_errors)
    if (!(e > 0.0) || !std::isfinite(e)) fit_ok = false;
  if (fit_ok) {
    const size_t n = report.h_grid.size();
    double sx = 0.0, sy = 0.0;
    for (size_t i = 0; i < n; ++i) {
      sx += std::log(report.h_grid[i]);
      sy += std::log(report.measured_errors[i]);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double dx = std::log(report.h_grid[i]) - mx;
      sxx += dx * dx;
      sxy += dx * (std::log(report.measured_errors[i]) - my);
    }
    if (sxx > 0.0) report.order_estimate = sxy / sxx;
  }
  return report;
}

}  // namespace geodint
