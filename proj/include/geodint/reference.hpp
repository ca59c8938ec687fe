#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "geodint/errors.hpp"
#include "geodint/integrators.hpp"

namespace geodint {

/// High-accuracy flow evaluation at the given checkpoint times, built from
/// implicit-midpoint substeps with global step halving: the step budget is
/// doubled until two successive refinements agree within fine_tol at every
/// checkpoint.  Substeps are solved far below fine_tol so solver noise cannot
/// masquerade as convergence.
template <class Manifold>
std::vector<typename Manifold::Point> reference_trajectory(
    const Manifold& m, const VectorField<Manifold>& field, const typename Manifold::Point& y0,
    const std::vector<double>& times, double fine_tol) {
  if (times.empty()) throw invalid_input("reference trajectory: need at least one time");
  if (!(fine_tol > 0.0)) throw invalid_input("reference trajectory: tolerance must be positive");
  double prev_t = 0.0;
  for (double t : times) {
    if (!(t >= prev_t))
      throw invalid_input("reference trajectory: times must be nonnegative and nondecreasing");
    prev_t = t;
  }
  const double t_total = times.back();

  SolverConfig cfg;
  cfg.tolerance = std::max(1e-13, std::min(1e-11, fine_tol * 1e-5));
  cfg.max_iterations = 80;

  const auto run = [&](double h_target) {
    std::vector<typename Manifold::Point> points;
    points.reserve(times.size());
    typename Manifold::Point y = y0;
    double t_cur = 0.0;
    for (double t : times) {
      const double len = t - t_cur;
      if (len > 0.0) {
        const int n = std::max(1, static_cast<int>(std::ceil(len / h_target)));
        const auto traj = integrate(m, MethodId::gimp(), field, y, len / n, n, cfg);
        if (!traj.complete)
          throw nonconvergence("reference trajectory: substep solve failed at t near " +
                               std::to_string(t_cur));
        y = traj.points.back();
      }
      t_cur = t;
      points.push_back(y);
    }
    return points;
  };

  if (t_total == 0.0) return run(1.0);

  double h_target = t_total / 8.0;
  auto prev = run(h_target);
  for (int refinement = 0; refinement < 18; ++refinement) {
    h_target *= 0.5;
    auto cur = run(h_target);
    double diff = 0.0;
    for (size_t j = 0; j < times.size(); ++j)
      diff = std::max(diff, m.distance(prev[j], cur[j]));
    if (diff < fine_tol) return cur;
    prev = std::move(cur);
  }
  throw accuracy_not_attained(
      "reference trajectory: step-halving floor reached without meeting the tolerance");
}

/// Flow endpoint at t_end to accuracy fine_tol.
template <class Manifold>
typename Manifold::Point reference_flow(const Manifold& m, const VectorField<Manifold>& field,
                                        const typename Manifold::Point& y0, double t_end,
                                        double fine_tol) {
  if (!(t_end >= 0.0)) throw invalid_input("reference flow: time must be nonnegative");
  return reference_trajectory(m, field, y0, std::vector<double>{t_end}, fine_tol).back();
}

}  // namespace geodint
