#pragma once

#include <complex>

#include "spectrode/psd.hpp"

namespace spectrode {

using Complex = std::complex<double>;

/// A solved point of the Silverstein equation: the companion transform value
/// v at argument z, the Stieltjes transform m of F derived from it, and the
/// equation residual |1/v + z - gamma*I1(v)|.
struct StieltjesSample {
  Complex z;
  Complex v;
  Complex m;
  double residual = 0.0;
};

/// m(z) from the companion transform: m = v/gamma + (1/gamma - 1)/z.
Complex m_from_v(double gamma, Complex z, Complex v);

/// I1(v) = int t dH(t) / (1 + t v). Principal-branch logarithm for uniform
/// components; series evaluation near v = 0 to avoid cancellation.
Complex h_integral_1(const PopulationSpectrum& psd, Complex v);

/// I2(v) = int t^2 dH(t) / (1 + t v)^2.
Complex h_integral_2(const PopulationSpectrum& psd, Complex v);

/// Inverse map z(v) = -1/v + gamma * I1(v).
Complex z_of_v(const PopulationSpectrum& psd, double gamma, Complex v);

/// z'(v) = 1/v^2 - gamma * I2(v).
Complex z_prime(const PopulationSpectrum& psd, double gamma, Complex v);

/// |1/v + z - gamma*I1(v)|; zero iff (z, v) solves the Silverstein equation.
double silverstein_residual(const PopulationSpectrum& psd, double gamma,
                            Complex z, Complex v);

/// Leftmost pole of z(v): D = -1/min_support(H).
double leftmost_pole(const PopulationSpectrum& psd);

}  // namespace spectrode
