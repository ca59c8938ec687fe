#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "geodint/errors.hpp"

namespace geodint {

enum class SolverStrategy { newton, fixed_point, newton_with_fallback };
enum class Predictor { explicit_euler, previous_point };

struct SolverConfig {
  double tolerance = 1e-11;
  int max_iterations = 50;
  SolverStrategy strategy = SolverStrategy::newton_with_fallback;
  Predictor predictor = Predictor::explicit_euler;
  /// Optional ambient-coordinate seeds for multistart root enumeration.
  std::vector<Eigen::VectorXd> multistart_grid;
};

inline void validate(const SolverConfig& cfg) {
  if (!(cfg.tolerance > 0.0)) throw invalid_input("solver: tolerance must be positive");
  if (cfg.max_iterations < 1) throw invalid_input("solver: max_iterations must be at least 1");
}

/// An implicit step equation posed on a manifold: `residual` is the ambient
/// defect of the defining relation, `picard` an optional self-map whose fixed
/// point is the same root, used by the fixed-point strategy.
template <class Manifold>
struct ImplicitProblem {
  std::function<Eigen::VectorXd(const typename Manifold::Point&)> residual;
  std::function<typename Manifold::Point(const typename Manifold::Point&)> picard;
};

struct SolveResult {
  bool converged = false;
  int iterations = 0;
  double residual = std::numeric_limits<double>::infinity();
};

/// Damped Gauss-Newton on the residual, parametrized through the manifold's
/// local perturbation so iterates stay on the manifold.  Jacobians by central
/// differences with step 1e-7; step acceptance by residual decrease with
/// halving line search.  Evaluation failures during trials reject the trial;
/// a failure at the seed propagates.
template <class Manifold>
SolveResult newton_solve(const Manifold& m, const ImplicitProblem<Manifold>& prob,
                         typename Manifold::Point& z, const SolverConfig& cfg) {
  validate(cfg);
  const Eigen::Index dof = m.dof();
  SolveResult out;
  Eigen::VectorXd r = prob.residual(z);
  double rn = r.norm();
  for (int it = 0; it < cfg.max_iterations && rn > cfg.tolerance; ++it) {
    constexpr double fd = 1e-7;
    Eigen::MatrixXd jac(r.size(), dof);
    bool jac_ok = true;
    for (Eigen::Index j = 0; j < dof && jac_ok; ++j) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(dof);
      e[j] = fd;
      try {
        const Eigen::VectorXd rp = prob.residual(m.perturb(z, e));
        const Eigen::VectorXd rm = prob.residual(m.perturb(z, -e));
        jac.col(j) = (rp - rm) / (2.0 * fd);
      } catch (const error&) {
        jac_ok = false;
      }
    }
    if (!jac_ok) break;
    const Eigen::VectorXd delta =
        jac.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(-r);
    if (!delta.allFinite() || delta.norm() == 0.0) break;
    double lambda = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 14 && !accepted; ++ls, lambda *= 0.5) {
      try {
        const auto trial = m.perturb(z, lambda * delta);
        const Eigen::VectorXd rt = prob.residual(trial);
        const double rtn = rt.norm();
        if (rtn < rn || rtn <= cfg.tolerance) {
          z = trial;
          r = rt;
          rn = rtn;
          accepted = true;
        }
      } catch (const error&) {
      }
    }
    if (!accepted) break;
    out.iterations = it + 1;
  }
  out.converged = rn <= cfg.tolerance;
  out.residual = rn;
  return out;
}

/// Damped Picard iteration toward the fixed point of `picard`, moving along
/// the geodesic from the current iterate to the map's target.  The damping
/// halves whenever a full move increases the residual.
template <class Manifold>
SolveResult fixed_point_solve(const Manifold& m, const ImplicitProblem<Manifold>& prob,
                              typename Manifold::Point& z, const SolverConfig& cfg) {
  validate(cfg);
  SolveResult out;
  if (!prob.picard) return out;
  double rn = prob.residual(z).norm();
  double damping = 1.0;
  for (int it = 0; it < cfg.max_iterations && rn > cfg.tolerance; ++it) {
    out.iterations = it + 1;
    try {
      const auto target = prob.picard(z);
      const auto trial =
          damping >= 1.0 ? target : m.exp(z, typename Manifold::Vec(damping * m.log(z, target)));
      const double rtn = prob.residual(trial).norm();
      if (rtn >= rn && damping > 1.0 / 32.0) {
        damping *= 0.5;
        continue;
      }
      z = trial;
      rn = rtn;
    } catch (const error&) {
      break;
    }
  }
  out.converged = rn <= cfg.tolerance;
  out.residual = rn;
  return out;
}

/// Strategy dispatch.  With newton_with_fallback the Picard pass restarts
/// from the original seed when Newton stalls; the iterate with the smaller
/// residual is kept.
template <class Manifold>
SolveResult solve_implicit(const Manifold& m, const ImplicitProblem<Manifold>& prob,
                           typename Manifold::Point& z, const SolverConfig& cfg) {
  switch (cfg.strategy) {
    case SolverStrategy::newton:
      return newton_solve(m, prob, z, cfg);
    case SolverStrategy::fixed_point:
      return fixed_point_solve(m, prob, z, cfg);
    case SolverStrategy::newton_with_fallback: {
      const auto seed = z;
      auto first = newton_solve(m, prob, z, cfg);
      if (first.converged || !prob.picard) return first;
      auto newton_z = z;
      z = seed;
      auto second = fixed_point_solve(m, prob, z, cfg);
      second.iterations += first.iterations;
      if (!second.converged && first.residual < second.residual) {
        z = newton_z;
        second.residual = first.residual;
      }
      return second;
    }
  }
  throw invalid_input("solver: unknown strategy");
}

}  // namespace geodint
