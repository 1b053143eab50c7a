#pragma once

#include "mfc/types.hpp"

#include <cmath>

namespace mfc {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// ordinary least squares of y against x
inline SlopeFit fit_line(const dvec& x, const dvec& y) {
  const double n = static_cast<double>(x.size());
  const double mx = x.mean(), my = y.mean();
  const dvec cx = x.array() - mx, cy = y.array() - my;
  const double sxx = cx.squaredNorm(), sxy = cx.dot(cy), syy = cy.squaredNorm();
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  (void)n;
  return fit;
}

inline SlopeFit fit_loglog(const dvec& x, const dvec& y) {
  return fit_line(x.array().log().matrix(), y.array().log().matrix());
}

}  // namespace mfc
