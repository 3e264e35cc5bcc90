#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "spectrode/error.hpp"

namespace spectrode {

/// One accepted Dormand-Prince 5(4) step with its quartic dense-output
/// coefficients. Valid for x between x_begin and x_end (either direction).
struct OdeSegment {
  double x_begin = 0.0;
  double x_end = 0.0;
  std::complex<double> cont[5];

  std::complex<double> eval(double x) const {
    const double h = x_end - x_begin;
    if (h == 0.0) return cont[0];
    const double theta = (x - x_begin) / h;
    const double theta1 = 1.0 - theta;
    return cont[0] +
           theta * (cont[1] +
                    theta1 * (cont[2] + theta * (cont[3] + theta1 * cont[4])));
  }
};

struct OdeOptions {
  double abs_tol = 1e-8;
  double rel_tol = 1e-8;
  double initial_step = 0.0;   // 0 = heuristic
  double max_step = 0.0;       // 0 = |x1 - x0|
  std::size_t max_steps = 4'000'000;
};

struct OdeSolution {
  std::vector<OdeSegment> segments;
  std::complex<double> y_end;

  /// Dense evaluation; x must lie within the integration range.
  std::complex<double> eval(double x) const {
    // Segments are ordered along the integration direction.
    const bool fwd = segments.front().x_end >= segments.front().x_begin;
    std::size_t lo = 0, hi = segments.size();
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      const bool before =
          fwd ? (x < segments[mid].x_begin) : (x > segments[mid].x_begin);
      if (before)
        hi = mid;
      else
        lo = mid;
    }
    return segments[lo].eval(x);
  }
};

/// Explicit adaptive Dormand-Prince 5(4) for a scalar complex ODE
/// y' = f(x, y), integrating from x0 to x1 (both directions supported),
/// with fourth-order continuous output on each accepted step.
template <class RHS>
OdeSolution dopri5_integrate(RHS&& f, double x0, double x1,
                             std::complex<double> y0,
                             const OdeOptions& opt = {}) {
  using C = std::complex<double>;

  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432.0,
                          d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0,
                          d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0,
                          d7 = 69997945.0 / 29380423.0;

  OdeSolution out;
  if (x1 == x0) {
    out.y_end = y0;
    OdeSegment seg;
    seg.x_begin = x0;
    seg.x_end = x0;
    seg.cont[0] = y0;
    out.segments.push_back(seg);
    return out;
  }

  const double dir = x1 > x0 ? 1.0 : -1.0;
  const double span = std::abs(x1 - x0);
  const double hmax = opt.max_step > 0.0 ? opt.max_step : span;

  double x = x0;
  C y = y0;
  C k1 = f(x, y);

  double h = opt.initial_step;
  if (h <= 0.0) {
    const double scale = opt.abs_tol + opt.rel_tol * std::abs(y);
    h = 0.01 * scale / (1e-12 + std::abs(k1));
    h = std::min(h, 0.1 * span);
    if (h <= 0.0 || !std::isfinite(h)) h = 1e-6 * span;
  }
  h = std::min(h, hmax);

  for (std::size_t step = 0; step < opt.max_steps; ++step) {
    if (dir * (x - x1) >= 0.0) {
      out.y_end = y;
      return out;
    }
    h = std::min(h, hmax);
    bool last = false;
    if (std::abs(x1 - x) <= h) {
      h = std::abs(x1 - x);
      last = true;
    }
    if (h < 1e-14 * (1.0 + std::abs(x)))
      throw Error(ErrorCode::NotConverged, "ODE step size underflow", x);
    const double hs = dir * h;

    const C k2 = f(x + c2 * hs, y + hs * (a21 * k1));
    const C k3 = f(x + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
    const C k4 = f(x + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
    const C k5 = f(x + c5 * hs,
                   y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const C k6 =
        f(x + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 +
                            a65 * k5));
    const C y1 = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const C k7 = f(x + hs, y1);

    const C err_vec =
        hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double scale =
        opt.abs_tol + opt.rel_tol * std::max(std::abs(y), std::abs(y1));
    const double err = std::abs(err_vec) / scale;

    if (err <= 1.0) {
      OdeSegment seg;
      seg.x_begin = x;
      seg.x_end = x + hs;
      const C ydiff = y1 - y;
      const C bspl = hs * k1 - ydiff;
      seg.cont[0] = y;
      seg.cont[1] = ydiff;
      seg.cont[2] = bspl;
      seg.cont[3] = ydiff - hs * k7 - bspl;
      seg.cont[4] = hs * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 +
                          d7 * k7);
      out.segments.push_back(seg);
      x = last ? x1 : x + hs;
      y = y1;
      k1 = k7;  // FSAL
    }
    const double factor =
        std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
    h *= factor;
  }
  throw Error(ErrorCode::NotConverged, "ODE exceeded max step count", x);
}

}  // namespace spectrode
