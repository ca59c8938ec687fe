#pragma once

#include <algorithm>
#include <vector>

#include <Eigen/Dense>

#include "geodint/errors.hpp"
#include "geodint/fields.hpp"
#include "geodint/integrators.hpp"

namespace geodint {

struct KarcherIterationRecord {
  int iteration = 0;
  double field_norm = 0.0;
};

struct KarcherResult {
  Eigen::MatrixXd mean;
  std::vector<KarcherIterationRecord> history;
};

/// Weighted Karcher mean as the equilibrium of the negative gradient flow of
/// the weighted squared-distance sum: implicit Euler steps with h = 1 from
/// the projected weighted arithmetic mean until the gradient-field norm
/// drops to tol.
inline KarcherResult karcher_mean_detailed(const SpdManifold& m, const KarcherFieldSpec& spec,
                                           double tol, int max_steps = 200) {
  if (!(tol > 0.0)) throw invalid_input("karcher mean: tolerance must be positive");
  if (max_steps < 1) throw invalid_input("karcher mean: need at least one step");
  const auto field = karcher_gradient_field(m, spec);

  std::vector<double> weights = spec.weights;
  if (weights.empty())
    weights.assign(spec.targets.size(), 1.0 / static_cast<double>(spec.targets.size()));
  double wsum = 0.0;
  for (double w : weights) wsum += w;
  Eigen::MatrixXd start = Eigen::MatrixXd::Zero(m.size(), m.size());
  for (size_t j = 0; j < spec.targets.size(); ++j) start += weights[j] / wsum * spec.targets[j];

  SolverConfig cfg;
  cfg.tolerance = std::max(1e-13, std::min(1e-12, 0.01 * tol));
  cfg.max_iterations = 60;

  KarcherResult result;
  result.mean = m.project(start);
  for (int it = 0; it <= max_steps; ++it) {
    const double norm = m.norm(result.mean, field.eval(result.mean));
    result.history.push_back({it, norm});
    if (norm <= tol) return result;
    if (it == max_steps) break;
    const auto out = gie_step(m, field, result.mean, 1.0, cfg);
    if (!out.converged)
      throw nonconvergence("karcher mean: implicit gradient step failed to converge");
    result.mean = out.principal();
  }
  throw nonconvergence("karcher mean: gradient norm still above tolerance after " +
                       std::to_string(max_steps) + " steps");
}

inline Eigen::MatrixXd karcher_mean(const SpdManifold& m, const KarcherFieldSpec& spec,
                                    double tol, int max_steps = 200) {
  return karcher_mean_detailed(m, spec, tol, max_steps).mean;
}

}  // namespace geodint
