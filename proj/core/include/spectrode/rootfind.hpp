#pragma once

#include <cmath>
#include <functional>

#include "spectrode/error.hpp"

namespace spectrode {

/// Bisection for f increasing on [lo, hi] with f(lo) <= target <= f(hi).
/// Returns v with |bracket| <= xtol. Monotonicity is the caller's contract.
inline double bisect_increasing(const std::function<double(double)>& f,
                                double lo, double hi, double target,
                                double xtol) {
  double flo = f(lo) - target;
  double fhi = f(hi) - target;
  if (flo > 0.0 || fhi < 0.0)
    throw Error(ErrorCode::StartFailure, "root not bracketed");
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  for (int it = 0; it < 200 && hi - lo > xtol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid) - target;
    if (fm <= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace spectrode
