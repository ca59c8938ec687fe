#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "geodint/errors.hpp"
#include "geodint/integrators.hpp"

namespace geodint {

/// One row of a two-trajectory contractivity sweep: the distance of a point
/// pair before and after a single step of size h.
struct SweepRecord {
  double h = 0.0;
  double d0 = 0.0;
  double d_after = std::numeric_limits<double>::quiet_NaN();
  bool converged_x = false;
  bool converged_y = false;
  int iters_x = 0;
  int iters_y = 0;

  bool converged() const { return converged_x && converged_y; }
};

namespace detail {

template <class Manifold>
void apply_sweep_step(const Manifold& m, const MethodId& id, const VectorField<Manifold>& field,
                      const typename Manifold::Point& y, double h, const SolverConfig& cfg,
                      bool& converged, int& iters, typename Manifold::Point& result) {
  try {
    const auto out = method_step(m, id, field, y, h, cfg);
    converged = out.converged;
    if (out.converged) {
      iters = out.iterations.front();
      result = out.principal();
    }
  } catch (const invalid_input&) {
    throw;
  } catch (const error&) {
    // Point-dependent failures (degenerate midpoints, lost geodesics) mark
    // the record like solver nonconvergence; the sweep continues.
    converged = false;
  }
}

}  // namespace detail

/// Steps both points of a fixed pair once per grid value and records the
/// distances.  Nonconvergence at one h marks that record and the sweep moves
/// on; configuration errors still abort.
template <class Manifold>
std::vector<SweepRecord> contractivity_sweep(const Manifold& m, const MethodId& id,
                                             const VectorField<Manifold>& field,
                                             const typename Manifold::Point& x0,
                                             const typename Manifold::Point& y0,
                                             const std::vector<double>& h_grid,
                                             const SolverConfig& cfg) {
  if (h_grid.empty()) throw invalid_input("contractivity sweep: step grid is empty");
  double prev = 0.0;
  for (double h : h_grid) {
    if (!(h > prev)) throw invalid_input("contractivity sweep: step grid must be positive ascending");
    prev = h;
  }
  const double d0 = m.distance(x0, y0);
  if (!(d0 > 0.0)) throw invalid_input("contractivity sweep: initial points coincide");

  std::vector<SweepRecord> records;
  records.reserve(h_grid.size());
  for (double h : h_grid) {
    SweepRecord rec;
    rec.h = h;
    rec.d0 = d0;
    typename Manifold::Point px = x0, py = y0;
    detail::apply_sweep_step(m, id, field, x0, h, cfg, rec.converged_x, rec.iters_x, px);
    detail::apply_sweep_step(m, id, field, y0, h, cfg, rec.converged_y, rec.iters_y, py);
    if (rec.converged()) rec.d_after = m.distance(px, py);
    records.push_back(rec);
  }
  return records;
}

}  // namespace geodint
