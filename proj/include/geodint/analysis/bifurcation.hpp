#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "geodint/errors.hpp"

namespace geodint {

/// q(z, h) = cos(h sqrt(1 - z^2)) z; the third-component equation of the
/// implicit Euler step for the rotation field, whose solutions z with
/// q(z, h) = z0 are the candidate step results from latitude z0.
inline double q_residual(double z, double h) {
  if (std::abs(z) > 1.0) throw invalid_input("q_residual: z must lie in [-1, 1]");
  return std::cos(h * std::sqrt(1.0 - z * z)) * z;
}

/// All solutions z in [-1, 1] of q(z, h) = z0, found by a 4096-cell sign
/// scan with bisection.  Valid under the simple-zero property of q; returned
/// sorted ascending.
inline std::vector<double> enumerate_roots(double z0, double h) {
  if (std::abs(z0) > 1.0) throw invalid_input("enumerate_roots: z0 must lie in [-1, 1]");
  if (!(h > 0.0)) throw invalid_input("enumerate_roots: h must be positive");
  const auto f = [z0, h](double z) { return q_residual(z, h) - z0; };
  constexpr int cells = 4096;
  std::vector<double> roots;
  double za = -1.0;
  double fa = f(za);
  for (int i = 1; i <= cells; ++i) {
    const double zb = -1.0 + 2.0 * static_cast<double>(i) / cells;
    const double fb = f(zb);
    if (fa == 0.0) roots.push_back(za);
    if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
      double lo = za, hi = zb, flo = fa;
      for (int it = 0; it < 60 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((flo < 0.0) == (fm < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    za = zb;
    fa = fb;
  }
  if (fa == 0.0) roots.push_back(za);
  std::sort(roots.begin(), roots.end());
  // merge bisection twins straddling a grid node
  std::vector<double> merged;
  for (double r : roots)
    if (merged.empty() || r - merged.back() > 1e-10) merged.push_back(r);
  return merged;
}

/// Root sets of q(z, h) = z0 over a grid of step sizes.
struct BifurcationDiagram {
  double z0 = 0.0;
  std::vector<double> h_grid;
  std::vector<std::vector<double>> roots;  // per h, sorted ascending
};

inline BifurcationDiagram bifurcation_diagram(double z0, const std::vector<double>& h_grid) {
  if (h_grid.empty()) throw invalid_input("bifurcation diagram: step grid is empty");
  BifurcationDiagram diagram;
  diagram.z0 = z0;
  diagram.h_grid = h_grid;
  diagram.roots.reserve(h_grid.size());
  for (double h : h_grid) diagram.roots.push_back(enumerate_roots(z0, h));
  return diagram;
}

}  // namespace geodint
