#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "geodint/errors.hpp"
#include "geodint/fields.hpp"
#include "geodint/solver.hpp"
#include "geodint/sphere.hpp"

namespace geodint {

enum class MethodKind { gee, gie, gimp, sphmp, lie_euler_implicit };

/// Method identifier; `isotropy_c` selects the frame map a_c for the
/// implicit Lie-Euler method and is ignored by the others.
struct MethodId {
  MethodKind kind = MethodKind::gee;
  double isotropy_c = 1.0;

  static MethodId gee() { return {MethodKind::gee, 1.0}; }
  static MethodId gie() { return {MethodKind::gie, 1.0}; }
  static MethodId gimp() { return {MethodKind::gimp, 1.0}; }
  static MethodId sphmp() { return {MethodKind::sphmp, 1.0}; }
  static MethodId lie_euler(double c) { return {MethodKind::lie_euler_implicit, c}; }
};

inline std::string method_name(const MethodId& id) {
  switch (id.kind) {
    case MethodKind::gee: return "gee";
    case MethodKind::gie: return "gie";
    case MethodKind::gimp: return "gimp";
    case MethodKind::sphmp: return "sphmp";
    case MethodKind::lie_euler_implicit: return "lie";
  }
  return "?";
}

inline MethodId parse_method(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (name == "gee") return MethodId::gee();
  if (name == "gie") return MethodId::gie();
  if (name == "gimp") return MethodId::gimp();
  if (name == "sphmp") return MethodId::sphmp();
  if (name == "lie" || name == "lie_euler" || name == "lie_euler_implicit")
    return MethodId::lie_euler(1.0);
  throw invalid_input("unknown method name: " + name);
}

/// Consistency order p of the one-step map.
inline int method_order(const MethodId& id) {
  switch (id.kind) {
    case MethodKind::gimp:
    case MethodKind::sphmp:
      return 2;
    default:
      return 1;
  }
}

/// Result of one integrator step.  `solutions` holds every converged distinct
/// root, principal root first; for explicit methods it has exactly one entry.
template <class Manifold>
struct StepOutcome {
  std::vector<typename Manifold::Point> solutions;
  std::vector<double> residuals;
  std::vector<int> iterations;
  bool converged = false;
  std::optional<typename Manifold::Point> midpoint;

  const typename Manifold::Point& principal() const {
    if (!converged || solutions.empty())
      throw nonconvergence("step outcome: no converged principal solution");
    return solutions.front();
  }
};

namespace detail {

/// Solves an h-parametrized implicit problem for its principal root: Newton
/// from the predictor, and on failure a homotopy that walks h up from h/8 in
/// 8 substeps, reseeding each solve with the previous solution.
template <class Manifold, class ProblemFactory, class PredictorFn>
std::pair<typename Manifold::Point, SolveResult> principal_root(const Manifold& m,
                                                                const ProblemFactory& make_problem,
                                                                const PredictorFn& predict,
                                                                double h,
                                                                const SolverConfig& cfg) {
  typename Manifold::Point z = predict(h);
  const auto prob = make_problem(h);
  auto res = solve_implicit(m, prob, z, cfg);
  if (res.converged) return {z, res};

  constexpr int substeps = 8;
  int total_iterations = res.iterations;
  typename Manifold::Point cur = predict(h / substeps);
  for (int j = 1; j <= substeps; ++j) {
    const auto probj = make_problem(h * j / substeps);
    auto resj = solve_implicit(m, probj, cur, cfg);
    total_iterations += resj.iterations;
    if (!resj.converged || j == substeps) {
      resj.iterations = total_iterations;
      return {cur, resj};
    }
  }
  throw numerical_error("principal_root: unreachable");
}

template <class Manifold>
bool ambient_less(const Manifold& m, const typename Manifold::Point& a,
                  const typename Manifold::Point& b) {
  const Eigen::VectorXd wa = m.to_ambient(a), wb = m.to_ambient(b);
  for (Eigen::Index i = 0; i < wa.size(); ++i) {
    if (wa[i] < wb[i]) return true;
    if (wa[i] > wb[i]) return false;
  }
  return false;
}

/// Runs plain Newton from every multistart seed and merges converged roots
/// into the outcome, skipping points within 1e-6 of an already known root.
/// Non-principal roots are sorted by their ambient coordinates.
template <class Manifold>
void collect_multistart_roots(const Manifold& m, const ImplicitProblem<Manifold>& prob,
                              const SolverConfig& cfg, StepOutcome<Manifold>& out) {
  if (cfg.multistart_grid.empty() || !out.converged) return;
  struct Root {
    typename Manifold::Point point;
    double residual;
    int iterations;
  };
  std::vector<Root> extras;
  SolverConfig local = cfg;
  local.multistart_grid.clear();
  for (const auto& seed : cfg.multistart_grid) {
    typename Manifold::Point z = m.from_ambient(seed);
    SolveResult res;
    try {
      res = newton_solve(m, prob, z, local);
    } catch (const error&) {
      continue;
    }
    if (!res.converged) continue;
    if (m.distance(z, out.solutions.front()) < 1e-6) continue;
    bool duplicate = false;
    for (const auto& r : extras)
      if (m.distance(z, r.point) < 1e-6) {
        duplicate = true;
        break;
      }
    if (!duplicate) extras.push_back({z, res.residual, res.iterations});
  }
  std::sort(extras.begin(), extras.end(),
            [&m](const Root& a, const Root& b) { return ambient_less(m, a.point, b.point); });
  for (auto& r : extras) {
    out.solutions.push_back(std::move(r.point));
    out.residuals.push_back(r.residual);
    out.iterations.push_back(r.iterations);
  }
}

}  // namespace detail

inline void check_step_size(double h) {
  if (!(std::isfinite(h)) || h == 0.0)
    throw invalid_input("integrator step: step size must be finite and nonzero");
}

/// Explicit geodesic Euler: y1 = exp_y(h X|_y).
template <class Manifold>
StepOutcome<Manifold> gee_step(const Manifold& m, const VectorField<Manifold>& field,
                               const typename Manifold::Point& y, double h) {
  check_step_size(h);
  StepOutcome<Manifold> out;
  out.solutions.push_back(m.exp(y, typename Manifold::Vec(h * field.eval(y))));
  out.residuals.push_back(0.0);
  out.iterations.push_back(0);
  out.converged = true;
  return out;
}

/// Implicit geodesic Euler: solves exp_z(-h X|_z) = y for z.  With a
/// multistart grid in the solver config, every distinct root found is
/// reported after the principal one.
template <class Manifold>
StepOutcome<Manifold> gie_step(const Manifold& m, const VectorField<Manifold>& field,
                               const typename Manifold::Point& y, double h,
                               const SolverConfig& cfg) {
  check_step_size(h);
  validate(cfg);
  const auto make_problem = [&m, &field, &y](double hh) {
    ImplicitProblem<Manifold> prob;
    prob.residual = [&m, &field, &y, hh](const typename Manifold::Point& z) {
      const auto back = m.exp(z, typename Manifold::Vec(-hh * field.eval(z)));
      return Eigen::VectorXd(m.to_ambient(back) - m.to_ambient(y));
    };
    prob.picard = [&m, &field, &y, hh](const typename Manifold::Point& z) {
      return m.exp(z, typename Manifold::Vec(m.log(z, y) + hh * field.eval(z)));
    };
    return prob;
  };
  const auto predict = [&m, &field, &y, &cfg](double hh) {
    return cfg.predictor == Predictor::explicit_euler
               ? m.exp(y, typename Manifold::Vec(hh * field.eval(y)))
               : y;
  };
  auto [z, res] = detail::principal_root(m, make_problem, predict, h, cfg);
  StepOutcome<Manifold> out;
  out.converged = res.converged;
  if (res.converged) {
    out.solutions.push_back(z);
    out.residuals.push_back(res.residual);
    out.iterations.push_back(res.iterations);
    detail::collect_multistart_roots(m, make_problem(h), cfg, out);
  }
  return out;
}

/// Implicit geodesic midpoint: solves exp_w(-h/2 X|_w) = y for the midpoint
/// w, then returns exp_w(+h/2 X|_w).  The midpoint is recorded in the
/// outcome.
template <class Manifold>
StepOutcome<Manifold> gimp_step(const Manifold& m, const VectorField<Manifold>& field,
                                const typename Manifold::Point& y, double h,
                                const SolverConfig& cfg) {
  check_step_size(h);
  validate(cfg);
  const auto make_problem = [&m, &field, &y](double hh) {
    ImplicitProblem<Manifold> prob;
    prob.residual = [&m, &field, &y, hh](const typename Manifold::Point& w) {
      const auto back = m.exp(w, typename Manifold::Vec(-0.5 * hh * field.eval(w)));
      return Eigen::VectorXd(m.to_ambient(back) - m.to_ambient(y));
    };
    prob.picard = [&m, &field, &y, hh](const typename Manifold::Point& w) {
      return m.exp(w, typename Manifold::Vec(m.log(w, y) + 0.5 * hh * field.eval(w)));
    };
    return prob;
  };
  const auto predict = [&m, &field, &y, &cfg](double hh) {
    return cfg.predictor == Predictor::explicit_euler
               ? m.exp(y, typename Manifold::Vec(0.5 * hh * field.eval(y)))
               : y;
  };
  auto [w, res] = detail::principal_root(m, make_problem, predict, h, cfg);
  StepOutcome<Manifold> out;
  out.converged = res.converged;
  if (res.converged) {
    out.midpoint = w;
    out.solutions.push_back(m.exp(w, typename Manifold::Vec(0.5 * h * field.eval(w))));
    out.residuals.push_back(res.residual);
    out.iterations.push_back(res.iterations);
  }
  return out;
}

/// Spherical midpoint method on the unit sphere: solves
/// z = y + h X|_{(y+z)/|y+z|}.  The iteration is constrained to the sphere;
/// for tangent fields the algebraic solution is unit-norm, which is verified
/// before returning.
inline StepOutcome<Sphere2> sphmp_step(const Sphere2& m, const VectorField<Sphere2>& field,
                                       const Eigen::Vector3d& y, double h,
                                       const SolverConfig& cfg) {
  check_step_size(h);
  validate(cfg);
  const auto raw_update = [&m, &field, &y](double hh, const Eigen::Vector3d& z) {
    if ((y + z).norm() < 1e-8)
      throw degenerate_input("sphmp step: midpoint of a near-antipodal pair is undefined");
    return Eigen::Vector3d(y + hh * field.eval(m.project(y + z)));
  };
  const auto make_problem = [&raw_update](double hh) {
    ImplicitProblem<Sphere2> prob;
    prob.residual = [&raw_update, hh](const Eigen::Vector3d& z) {
      return Eigen::VectorXd(raw_update(hh, z) - z);
    };
    prob.picard = [&raw_update, hh](const Eigen::Vector3d& z) {
      return Eigen::Vector3d(raw_update(hh, z).normalized());
    };
    return prob;
  };
  const auto predict = [&m, &field, &y, &cfg](double hh) {
    return cfg.predictor == Predictor::explicit_euler
               ? m.exp(y, Eigen::Vector3d(hh * field.eval(y)))
               : y;
  };
  auto [z, res] = detail::principal_root(m, make_problem, predict, h, cfg);
  StepOutcome<Sphere2> out;
  out.converged = res.converged;
  if (res.converged) {
    const Eigen::Vector3d raw = raw_update(h, z);
    if (std::abs(raw.norm() - 1.0) > 1e-6)
      throw numerical_error("sphmp step: solution is not unit-norm; field is not tangent");
    out.solutions.push_back(z);
    out.residuals.push_back(res.residual);
    out.iterations.push_back(res.iterations);
  }
  return out;
}

/// Implicit Lie-Euler through the rotation action: solves
/// z = exp(h a(z)) y with the Rodrigues rotation about the axis a(z).
/// Requires the field to supply its frame map a.
inline StepOutcome<Sphere2> lie_euler_implicit_step(const Sphere2& m,
                                                    const VectorField<Sphere2>& field,
                                                    const Eigen::Vector3d& y, double h,
                                                    const SolverConfig& cfg) {
  check_step_size(h);
  validate(cfg);
  if (!field.axis)
    throw invalid_input("lie-euler step: field does not supply an isotropy (frame) map");
  const auto make_problem = [&field, &y](double hh) {
    ImplicitProblem<Sphere2> prob;
    prob.residual = [&field, &y, hh](const Eigen::Vector3d& z) {
      return Eigen::VectorXd(rodrigues_apply(Eigen::Vector3d(hh * field.axis(z)), y) - z);
    };
    prob.picard = [&field, &y, hh](const Eigen::Vector3d& z) {
      return rodrigues_apply(Eigen::Vector3d(hh * field.axis(z)), y);
    };
    return prob;
  };
  const auto predict = [&m, &field, &y, &cfg](double hh) {
    return cfg.predictor == Predictor::explicit_euler
               ? m.exp(y, Eigen::Vector3d(hh * field.eval(y)))
               : y;
  };
  auto [z, res] = detail::principal_root(m, make_problem, predict, h, cfg);
  StepOutcome<Sphere2> out;
  out.converged = res.converged;
  if (res.converged) {
    out.solutions.push_back(m.project(z));
    out.residuals.push_back(res.residual);
    out.iterations.push_back(res.iterations);
  }
  return out;
}

/// Dispatch on the method identifier.  The sphere-only methods reject other
/// manifolds.
template <class Manifold>
StepOutcome<Manifold> method_step(const Manifold& m, const MethodId& id,
                                  const VectorField<Manifold>& field,
                                  const typename Manifold::Point& y, double h,
                                  const SolverConfig& cfg) {
  switch (id.kind) {
    case MethodKind::gee: return gee_step(m, field, y, h);
    case MethodKind::gie: return gie_step(m, field, y, h, cfg);
    case MethodKind::gimp: return gimp_step(m, field, y, h, cfg);
    case MethodKind::sphmp:
    case MethodKind::lie_euler_implicit:
      if constexpr (std::is_same_v<Manifold, Sphere2>) {
        if (id.kind == MethodKind::sphmp) return sphmp_step(m, field, y, h, cfg);
        VectorField<Sphere2> f = field;
        if (!f.axis) {
          // Attach the canonical frame a_c; valid only for fields it generates.
          const double c = id.isotropy_c;
          f.axis = [c](const Eigen::Vector3d& p) {
            return Eigen::Vector3d(Eigen::Vector3d::UnitZ() + (c - 1.0) * p.z() * p);
          };
          if ((f.axis(y).cross(y) - f.eval(y)).norm() > 1e-10)
            throw invalid_input(
                "lie-euler step: method frame a_c does not generate the supplied field");
        }
        return lie_euler_implicit_step(m, f, y, h, cfg);
      } else {
        throw invalid_input("method " + method_name(id) + " is defined on the sphere only");
      }
  }
  throw invalid_input("unknown method kind");
}

/// Uniform multistart seed grid for sphere root enumeration: third components
/// on an n_z-point uniform grid of [-1, 1], each combined with n_azimuth
/// equispaced azimuths (collapsed at the poles).
inline std::vector<Eigen::VectorXd> sphere_multistart_grid(int n_z = 64, int n_azimuth = 8) {
  if (n_z < 2 || n_azimuth < 1) throw invalid_input("multistart grid: need n_z >= 2, n_azimuth >= 1");
  std::vector<Eigen::VectorXd> seeds;
  for (int i = 0; i < n_z; ++i) {
    const double t = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n_z - 1);
    const double rho = std::sqrt(std::max(0.0, 1.0 - t * t));
    const int n_phi = rho < 1e-12 ? 1 : n_azimuth;
    for (int k = 0; k < n_phi; ++k) {
      const double phi = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n_azimuth);
      Eigen::VectorXd s(3);
      s << rho * std::cos(phi), rho * std::sin(phi), t;
      seeds.push_back(s);
    }
  }
  return seeds;
}

/// Fixed-step trajectory; `complete` is false when an implicit step failed to
/// converge, with `failed_step` the 1-based index of that step.
template <class Manifold>
struct Trajectory {
  std::vector<typename Manifold::Point> points;
  bool complete = true;
  int failed_step = -1;
};

template <class Manifold>
Trajectory<Manifold> integrate(const Manifold& m, const MethodId& id,
                               const VectorField<Manifold>& field,
                               const typename Manifold::Point& y0, double h, int n_steps,
                               const SolverConfig& cfg) {
  if (n_steps < 1) throw invalid_input("integrate: need at least one step");
  Trajectory<Manifold> traj;
  traj.points.reserve(static_cast<size_t>(n_steps) + 1);
  traj.points.push_back(y0);
  for (int j = 0; j < n_steps; ++j) {
    StepOutcome<Manifold> out;
    try {
      out = method_step(m, id, field, traj.points.back(), h, cfg);
    } catch (const error& e) {
      throw error("integrate: step " + std::to_string(j + 1) + ": " + e.what());
    }
    if (!out.converged) {
      traj.complete = false;
      traj.failed_step = j + 1;
      return traj;
    }
    traj.points.push_back(out.principal());
  }
  return traj;
}

}  // namespace geodint
