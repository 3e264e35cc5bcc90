#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spectrode/silverstein.hpp"

namespace spectrode {

struct FpaResult {
  StieltjesSample sample;
  std::size_t iterations = 0;
  bool converged = false;
  bool lifted = false;  // real input was lifted to x + i*eta^2
};

inline constexpr std::size_t kFpaDefaultMaxIter = 1'000'000;

/// Fixed-point iteration v <- -1/(z - gamma*I1(v)) from v0 = -1/z, stopping
/// when |1/v + z - gamma*I1(v)| <= eta. Real x is lifted to x + i*eta^2.
/// Never throws on non-convergence: inspect `converged`.
FpaResult fpa_solve(const PopulationSpectrum& psd, double gamma, Complex z,
                    double eta, std::size_t max_iter = kFpaDefaultMaxIter);

struct FpaGridResult {
  std::vector<double> density;         // Imag(m)/pi, clamped at 0 from below
  std::vector<std::size_t> iterations;
  std::vector<std::uint8_t> converged;  // byte-wide: written concurrently
};

/// Independent fpa_solve at each x_j + i*eta^2. Parallel across grid points
/// with deterministic output ordering; `threads` = 0 means auto, 1 pins the
/// benchmark-fair serial mode.
FpaGridResult fpa_density_grid(const PopulationSpectrum& psd, double gamma,
                               const std::vector<double>& grid, double eta,
                               std::size_t max_iter = kFpaDefaultMaxIter,
                               std::size_t threads = 0);

}  // namespace spectrode
