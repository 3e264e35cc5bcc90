#pragma once

#include <cstddef>
#include <vector>

#include "spectrode/error.hpp"

namespace spectrode {

/// One support interval with its uniform density grid. values[0] and
/// values[M] are exactly zero by construction.
struct DensityInterval {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> grid;
  std::vector<double> values;
};

/// The computed limit ESD: density grids per support interval plus the point
/// mass at zero present when gamma > 1.
struct SpectralDensity {
  double gamma = 0.0;
  std::vector<DensityInterval> intervals;
  double zero_mass = 0.0;
};

/// Linear interpolation on the stored grids; zero outside every interval.
double evaluate_density(const SpectralDensity& esd, double x);

/// Trapezoid integral over all intervals plus zero_mass.
double total_mass(const SpectralDensity& esd);

}  // namespace spectrode
