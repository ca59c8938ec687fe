#pragma once

#include <cmath>
#include <vector>

#include "geodint/errors.hpp"
#include "geodint/reference.hpp"

namespace geodint {

struct ContractionRecord {
  double t = 0.0;
  double dist = 0.0;
  double bound = 0.0;
  bool violated = false;
};

struct ContractionReport {
  double d0 = 0.0;
  std::vector<ContractionRecord> records;
  bool any_violation = false;
};

/// Follows both points under the reference flow and compares their distance
/// at each time against d0 * exp(nu * t); violations are flagged when the
/// distance exceeds the bound by more than 10 * fine_tol.
template <class Manifold>
ContractionReport flow_contraction_check(const Manifold& m, const VectorField<Manifold>& field,
                                         const typename Manifold::Point& x0,
                                         const typename Manifold::Point& y0, double nu,
                                         const std::vector<double>& t_grid, double fine_tol) {
  if (t_grid.empty()) throw invalid_input("flow contraction check: time grid is empty");
  ContractionReport report;
  report.d0 = m.distance(x0, y0);
  const auto xs = reference_trajectory(m, field, x0, t_grid, fine_tol);
  const auto ys = reference_trajectory(m, field, y0, t_grid, fine_tol);
  report.records.reserve(t_grid.size());
  for (size_t j = 0; j < t_grid.size(); ++j) {
    ContractionRecord rec;
    rec.t = t_grid[j];
    rec.dist = m.distance(xs[j], ys[j]);
    rec.bound = report.d0 * std::exp(nu * rec.t);
    rec.violated = rec.dist > rec.bound + 10.0 * fine_tol;
    report.any_violation = report.any_violation || rec.violated;
    report.records.push_back(rec);
  }
  return report;
}

}  // namespace geodint
