#pragma once

#include <cmath>
#include <functional>
#include <sstream>

#include "loschmidt/error.hpp"

namespace loschmidt {

/// Bisection for a sign change of f on [a, b]; stops once the bracket is
/// narrower than rel_tol * max(1, |midpoint|).
inline double bisect(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-10) {
  double fa = f(a);
  const double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa < 0.0) == (fb < 0.0)) {
    std::ostringstream msg;
    msg << "no sign change on [" << a << ", " << b << "]";
    throw Error(ErrorKind::NoSignChange, msg.str());
  }
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (a + b);
    if (std::abs(b - a) < rel_tol * std::max(1.0, std::abs(mid))) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace loschmidt
