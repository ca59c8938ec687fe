#pragma once

#include "geodint/errors.hpp"

namespace geodint {

/// A tangent vector carrying its base point, so that metric operations can
/// reject vectors attached to different points.
template <class Manifold>
struct TangentVector {
  typename Manifold::Point base;
  typename Manifold::Vec vec;
};

template <class Manifold>
TangentVector<Manifold> make_tangent(const Manifold& m,
                                     const typename Manifold::Point& base,
                                     const typename Manifold::Vec& vec) {
  m.check_point(base);
  m.check_tangent(base, vec);
  return {base, vec};
}

/// Metric inner product of two tangent vectors at the same base point.
/// Throws invalid_input if the base points differ.
template <class Manifold>
double metric_inner(const Manifold& m, const TangentVector<Manifold>& u,
                    const TangentVector<Manifold>& v) {
  if (!m.same_point(u.base, v.base))
    throw invalid_input("metric_inner: tangent vectors have different base points");
  return m.inner(u.base, u.vec, v.vec);
}

template <class Manifold>
double metric_norm(const Manifold& m, const TangentVector<Manifold>& u) {
  return m.norm(u.base, u.vec);
}

}  // namespace geodint
