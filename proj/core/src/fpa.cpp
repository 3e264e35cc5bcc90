#include "spectrode/fpa.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>

#include "spectrode/parallel.hpp"

namespace spectrode {

namespace {
constexpr double kDivergenceGuard = 1e12;
}

FpaResult fpa_solve(const PopulationSpectrum& psd, double gamma, Complex z,
                    double eta, std::size_t max_iter) {
  validate_gamma(gamma);
  if (!(eta > 0.0))
    throw Error(ErrorCode::InvalidArgument, "eta must be positive");
  if (z.imag() < 0.0)
    throw Error(ErrorCode::InvalidArgument,
                "fpa_solve requires Imag(z) >= 0");

  FpaResult result;
  if (z.imag() == 0.0) {
    z = Complex(z.real(), eta * eta);
    result.lifted = true;
  }

  // On unconverged stops the last iterate sits at an arbitrary phase of the
  // slow near-neutral spiral; the lowest-residual iterate seen is strictly
  // better under the algorithm's own criterion, so that is what we return.
  Complex v = -1.0 / z;
  Complex v_best = v;
  double res_best = std::numeric_limits<double>::infinity();
  bool converged = false;
  std::size_t n = 0;
  for (;; ++n) {
    const Complex h = z - gamma * h_integral_1(psd, v);
    const double residual = std::abs(1.0 / v + h);
    if (residual < res_best) {
      res_best = residual;
      v_best = v;
    }
    if (residual <= eta) {
      converged = true;
      break;
    }
    if (n >= max_iter) break;
    v = -1.0 / h;
    assert(v.imag() > 0.0 && "iterate left the upper half-plane");
    if (std::abs(v) > kDivergenceGuard) break;
  }

  result.sample.z = z;
  result.sample.v = v_best;
  result.sample.m = m_from_v(gamma, z, v_best);
  result.sample.residual = res_best;
  result.iterations = n;
  result.converged = converged;
  return result;
}

FpaGridResult fpa_density_grid(const PopulationSpectrum& psd, double gamma,
                               const std::vector<double>& grid, double eta,
                               std::size_t max_iter, std::size_t threads) {
  if (grid.empty())
    throw Error(ErrorCode::InvalidArgument, "grid must be nonempty");

  FpaGridResult out;
  out.density.assign(grid.size(), 0.0);
  out.iterations.assign(grid.size(), 0);
  out.converged.assign(grid.size(), false);

  parallel_for(
      grid.size(),
      [&](std::size_t j) {
        const FpaResult r = fpa_solve(psd, gamma, Complex(grid[j], 0.0), eta,
                                      max_iter);
        double f = r.sample.m.imag() / std::numbers::pi;
        if (f < 0.0) {
          if (f < -1e-12)
            throw Error(ErrorCode::InternalConsistency,
                        "FPA density below -1e-12", grid[j]);
          f = 0.0;
        }
        out.density[j] = f;
        out.iterations[j] = r.iterations;
        out.converged[j] = r.converged;
      },
      threads);
  return out;
}

}  // namespace spectrode
