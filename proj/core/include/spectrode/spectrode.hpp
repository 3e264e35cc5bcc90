#pragma once

#include <optional>

#include "spectrode/esd.hpp"
#include "spectrode/silverstein.hpp"
#include "spectrode/support.hpp"

namespace spectrode {

/// Solved trace of the density ODE along Imag(z) = delta over one support
/// interval. Imag(v) > 0 at every grid point; max_residual is the worst
/// Silverstein-equation residual over the grid (the self-check certificate).
struct OdeTrace {
  std::size_t interval_index = 0;
  double delta = 0.0;
  std::vector<double> grid;
  std::vector<Complex> v_values;
  double max_residual = 0.0;
};

/// dv/dz = 1/z'(v). Throws CriticalPoint when |z'(v)| <= 1e-13.
Complex ode_rhs(const PopulationSpectrum& psd, double gamma, Complex v);

/// Solve the density ODE on [lower, upper] at height delta from a
/// Silverstein-equation start at lower + i*delta. `critical_hint` is the
/// v-space preimage of the lower edge (near-zero z'), used to seed the
/// starting-value solver; pass std::nullopt when unknown.
OdeTrace solve_interval(const PopulationSpectrum& psd, double gamma,
                        double lower, double upper, const Precision& precision,
                        std::optional<double> critical_hint = std::nullopt);

/// Full pipeline: find_support, solve each interval, Stieltjes inversion.
SpectralDensity compute_esd(const PopulationSpectrum& psd, double gamma,
                            const Precision& precision);

/// compute_esd variant that also returns the support report and raw traces.
struct EsdComputation {
  SpectralDensity density;
  SupportReport support;
  std::vector<OdeTrace> traces;
};
EsdComputation compute_esd_detailed(const PopulationSpectrum& psd,
                                    double gamma, const Precision& precision);

}  // namespace spectrode
