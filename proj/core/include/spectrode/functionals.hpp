#pragma once

#include <functional>
#include <string>

#include "spectrode/esd.hpp"
#include "spectrode/psd.hpp"
#include "spectrode/silverstein.hpp"
#include "spectrode/support.hpp"

namespace spectrode {

/// Trapezoid integral of h against the stored density grids, plus
/// zero_mass * h(0) when a point mass at zero is present.
double esd_moment(const SpectralDensity& esd,
                  const std::function<double(double)>& h);

/// Smallest x with cumulative mass >= p; zero_mass counts at x = 0.
double esd_quantile(const SpectralDensity& esd, double p);

/// Grid argmax of the density, ties toward smaller x.
double esd_mode(const SpectralDensity& esd);

/// Closed parametrized curve c : [0,1] -> C with derivative c'. Contours that
/// cross the real axis must enclose the support.
struct ContourSpec {
  std::function<Complex(double)> c;
  std::function<Complex(double)> c_prime;
  std::string kind;
  bool crosses_real_axis = false;

  /// Clockwise circle through center + radius and center - radius,
  /// c(t) = center + radius * exp(-2 pi i t).
  static ContourSpec circle(Complex center, double radius);

  static ContourSpec from_functions(std::function<Complex(double)> c,
                                    std::function<Complex(double)> c_prime,
                                    bool crosses_real_axis,
                                    std::string kind = "custom");
};

/// Contour integral of G(z, v(z)) dz along the contour. v(c(t)) follows the
/// chain-rule ODE; the start value comes from the fixed-point solver off the
/// real axis, or from bracketed inversion of z(v) on the axis.
Complex contour_stieltjes(const PopulationSpectrum& psd, double gamma,
                          const ContourSpec& contour,
                          const std::function<Complex(Complex, Complex)>& G,
                          const Precision& precision);

struct CltMeanResult {
  double value = 0.0;
  double imag_residual = 0.0;
};

/// Mean of the CLT for linear spectral statistics:
/// J(g) = -(1/2 pi i) * contour integral of g(z) A(v) / (1 - gamma B(v))^2 dz
/// with A, B the cubic- and square-denominator PSD integrals. The default
/// contour (radius_scale * u_K circle through the origin) is used when
/// `contour` is null.
CltMeanResult clt_mean(const PopulationSpectrum& psd, double gamma,
                       const std::function<Complex(Complex)>& g,
                       const Precision& precision,
                       const ContourSpec* contour = nullptr,
                       double radius_scale = 1.1);

}  // namespace spectrode
