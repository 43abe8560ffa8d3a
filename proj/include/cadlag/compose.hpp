#pragma once

#include <algorithm>
#include <cmath>

#include "cadlag/path.hpp"
#include "cadlag/time_change.hpp"

namespace cadlag {

/// outer(inner(t)) for a non-decreasing inner path whose range lies inside
/// [0, outer.horizon()]. The result is cadlag on [0, inner.horizon()] with
/// breakpoints at inner's breakpoints and at inner-preimages of outer's
/// breakpoints; it is returned in canonical form.
inline PiecewisePath compose_monotone(const PiecewisePath& outer, const PiecewisePath& inner) {
  if (!is_nondecreasing(inner)) {
    throw validation_error("compose: inner path must be non-decreasing");
  }
  if (inner.min_value() < 0.0 || inner.max_value() > outer.horizon()) {
    throw domain_error("compose: inner range exceeds outer domain [0, " +
                       std::to_string(outer.horizon()) + "]");
  }
  const auto it = inner.breakpoints();
  const auto ot = outer.breakpoints();
  PathBuilder b(inner.horizon());
  for (std::size_t i = 0; i < inner.segment_count(); ++i) {
    const double u0 = it[i];
    const double u1 = it[i + 1];
    const double c = inner.values()[i];
    const double sigma = inner.slopes()[i];
    b.segment(u0, outer.eval(c), sigma == 0.0 ? 0.0 : sigma * outer.slope_at(c));
    if (sigma > 0.0) {
      const double image_end = c + sigma * (u1 - u0);  // left limit, same arithmetic
      // Sweep outer breakpoints strictly inside (c, image_end).
      auto jt = std::upper_bound(ot.begin(), ot.end(), c);
      for (; jt != ot.end() && *jt < image_end; ++jt) {
        const double vb = *jt;
        if (vb >= outer.horizon()) break;
        double tau = u0 + (vb - c) / sigma;
        if (tau <= u0 || tau >= u1) continue;  // rounding pushed it onto a boundary
        b.segment(tau, outer.eval(vb), sigma * outer.slope_at(vb));
      }
    }
  }
  return b.finish_at(outer.eval(inner.eval(inner.horizon())));
}

/// The superposition operator F(x, y) = x o y for a time change y.
inline PiecewisePath compose(const PiecewisePath& outer, const TimeChange& inner) {
  return compose_monotone(outer, inner.path());
}

/// y o lambda for a reparametrization lambda on [0, k] with y's horizon >= k.
inline PiecewisePath apply_reparam(const PiecewisePath& y, const Reparametrization& lambda) {
  if (y.horizon() < lambda.horizon()) {
    throw domain_error("apply_reparam: path horizon below reparametrization horizon");
  }
  return compose_monotone(y, lambda.path());
}

/// outer o inner within Delta[0,k].
inline Reparametrization compose(const Reparametrization& outer, const Reparametrization& inner) {
  if (outer.horizon() != inner.horizon()) {
    throw domain_error("compose: reparametrizations must share a horizon");
  }
  PiecewisePath p = compose_monotone(outer.path(), inner.path());
  // Pin the endpoint exactly; composition arithmetic can drift by ulps.
  PathBuilder b(p.horizon());
  for (std::size_t i = 0; i < p.segment_count(); ++i) {
    b.segment(p.breakpoints()[i], p.values()[i], p.slopes()[i]);
  }
  return Reparametrization::from_path(b.finish_at(p.horizon()));
}

}  // namespace cadlag
