#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "spectrode/psd.hpp"
#include "spectrode/silverstein.hpp"

namespace spectrode {

/// Marchenko-Pastur density: sqrt((g+ - x)(x - g-)) / (2 gamma x) on
/// [g-, g+] with g+- = (1 +- sqrt(gamma))^2, zero elsewhere.
double mp_density(double gamma, double x);

/// Edges (1 -+ sqrt(gamma))^2 of the MP bulk.
std::pair<double, double> mp_edges(double gamma);

/// Roots of c3 v^3 + c2 v^2 + c1 v + c0 = 0 with real coefficients, by the
/// trigonometric/Cardano closed form after monic normalization.
std::array<Complex, 3> solve_cubic(double c3, double c2, double c1, double c0);

/// Density of the two-point mixture H = q d_1 + (1-q) d_t via the exact cubic
/// in v: density from the unique root with positive imaginary part, zero when
/// all three roots are real.
double twopoint_density(double gamma, double q, double t, double x);

struct McOptions {
  int p = 200;
  int n_mc = 100;
  std::uint64_t seed = 1;
  int p_cap = 2000;
};

/// Monte Carlo oracle: replicate-averaged Epanechnikov KDE (Silverman
/// bandwidth) of sample-covariance eigenvalues with Gaussian entries and a
/// p-point discretization of the PSD. Deterministic under seed regardless of
/// thread count.
std::vector<double> mc_esd(const PopulationSpectrum& psd, double gamma,
                           const std::vector<double>& grid,
                           const McOptions& options);

}  // namespace spectrode
