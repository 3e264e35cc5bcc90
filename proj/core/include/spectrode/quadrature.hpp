#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "spectrode/error.hpp"

namespace spectrode {

/// Adaptive Simpson quadrature for a complex-valued integrand of a real
/// variable. Error control by the usual Richardson estimate.
template <class F>
std::complex<double> adaptive_simpson(F&& f, double a, double b, double tol,
                                      int max_depth = 48) {
  using C = std::complex<double>;
  struct Impl {
    const F& f;
    double tol_floor;
    C recurse(double a, double m, double b, C fa, C fm, C fb, C whole,
              double tol, int depth) {
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const C flm = f(lm), frm = f(rm);
      const C left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const C right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const C sum = left + right;
      if (depth <= 0 || std::abs(sum - whole) <= 15.0 * std::max(tol, tol_floor))
        return sum + (sum - whole) / 15.0;
      return recurse(a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
             recurse(m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
  };
  const C fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const C whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  Impl impl{f, 1e-300};
  return impl.recurse(a, 0.5 * (a + b), b, fa, fm, fb, whole, tol, max_depth);
}

/// 10-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; mirror).
struct GaussLegendre10 {
  static constexpr std::array<double, 5> nodes = {
      0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
      0.8650633666889845, 0.9739065285171717};
  static constexpr std::array<double, 5> weights = {
      0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
      0.1494513491505806, 0.0666713443086881};

  template <class F>
  static std::complex<double> integrate(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    std::complex<double> sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      sum += weights[i] *
             (f(mid + half * nodes[i]) + f(mid - half * nodes[i]));
    }
    return half * sum;
  }
};

/// Adaptive composite Gauss-Legendre: a panel is accepted when splitting it
/// moves the estimate by less than the shared tolerance.
template <class F>
std::complex<double> adaptive_gauss_legendre(F&& f, double a, double b,
                                             double tol, int max_depth = 36) {
  using C = std::complex<double>;
  struct Impl {
    const F& f;
    C recurse(double a, double b, C whole, double tol, int depth) {
      const double m = 0.5 * (a + b);
      const C left = GaussLegendre10::integrate(f, a, m);
      const C right = GaussLegendre10::integrate(f, m, b);
      const C sum = left + right;
      if (depth <= 0 || std::abs(sum - whole) <= tol) return sum;
      return recurse(a, m, left, 0.5 * tol, depth - 1) +
             recurse(m, b, right, 0.5 * tol, depth - 1);
    }
  };
  Impl impl{f};
  return impl.recurse(a, b, GaussLegendre10::integrate(f, a, b), tol,
                      max_depth);
}

}  // namespace spectrode
