#include "spectrode/spectrode.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "spectrode/fpa.hpp"
#include "spectrode/ode.hpp"
#include "spectrode/parallel.hpp"

namespace spectrode {

namespace {

constexpr double kCriticalThreshold = 1e-13;

// Newton polish of the Silverstein residual F(v) = 1/v + z - gamma*I1(v),
// F'(v) = -z'(v). Returns the best iterate; caller checks the residual.
Complex newton_polish(const PopulationSpectrum& psd, double gamma, Complex z,
                      Complex v, double tol) {
  Complex best = v;
  double best_res = std::abs(1.0 / v + z - gamma * h_integral_1(psd, v));
  for (int it = 0; it < 60 && best_res > tol; ++it) {
    const Complex f = 1.0 / v + z - gamma * h_integral_1(psd, v);
    const Complex zp = z_prime(psd, gamma, v);
    if (std::abs(zp) < 1e-300) break;
    Complex step = f / zp;
    bool improved = false;
    for (int bt = 0; bt < 10; ++bt) {
      const Complex cand = v + step;
      if (cand.imag() > 0.0) {
        const double res =
            std::abs(1.0 / cand + z - gamma * h_integral_1(psd, cand));
        if (res < best_res) {
          v = cand;
          best = cand;
          best_res = res;
          improved = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return best;
}

// Starting value for the ODE: the Silverstein solution at z0 = l + i*delta.
// The fixed-point iteration contracts at rate 1 - O(Imag z), so running it
// at delta = eps^2 directly is impractically slow. With an edge-preimage
// hint, seed Newton from the local quadratic model
// z(v) ~ z(vc) + z''(vc)(v - vc)^2 / 2; otherwise solve once at a height
// where the fixed point contracts briskly and continue the solution down to
// delta by Newton at successively halved heights.
Complex start_value(const PopulationSpectrum& psd, double gamma, Complex z0,
                    double eta, std::optional<double> critical_hint) {
  const double tol = 1e-13 * (1.0 + std::abs(z0));

  if (critical_hint) {
    const double vc = *critical_hint;
    const double step = 1e-6 * (1.0 + std::abs(vc));
    const Complex zpp = (z_prime(psd, gamma, Complex(vc + step, 0.0)) -
                         z_prime(psd, gamma, Complex(vc - step, 0.0))) /
                        (2.0 * step);
    const Complex zc = z_of_v(psd, gamma, Complex(vc, 0.0));
    if (std::abs(zpp) > 1e-300) {
      Complex dv = std::sqrt(2.0 * (z0 - zc) / zpp);
      if (dv.imag() < 0.0) dv = -dv;
      const Complex seed = Complex(vc, 0.0) + dv;
      if (seed.imag() > 0.0) {
        const Complex v = newton_polish(psd, gamma, z0, seed, tol);
        if (silverstein_residual(psd, gamma, z0, v) <= eta) return v;
      }
    }
  }

  // Height continuation.
  const double delta = z0.imag();
  double height = std::max(delta, 1e-2);
  const FpaResult fp = fpa_solve(psd, gamma, Complex(z0.real(), height),
                                 1e-3, 200'000);
  Complex v = newton_polish(psd, gamma, Complex(z0.real(), height),
                            fp.sample.v, tol);
  while (height > delta) {
    height = std::max(delta, height * 0.25);
    v = newton_polish(psd, gamma, Complex(z0.real(), height), v, tol);
  }
  if (silverstein_residual(psd, gamma, z0, v) > eta)
    throw Error(ErrorCode::FpaStartFailure,
                "starting-value continuation did not reach eta", z0.real());
  return v;
}

void fill_grid_from_solution(const OdeSolution& sol, const std::vector<double>& grid,
                             std::size_t begin, std::size_t end,
                             std::vector<Complex>& out) {
  for (std::size_t j = begin; j < end; ++j) out[j] = sol.eval(grid[j]);
}

}  // namespace

Complex ode_rhs(const PopulationSpectrum& psd, double gamma, Complex v) {
  const Complex zp = z_prime(psd, gamma, v);
  if (std::abs(zp) <= kCriticalThreshold)
    throw Error(ErrorCode::CriticalPoint,
                "z'(v) vanished inside a support interval");
  return 1.0 / zp;
}

OdeTrace solve_interval(const PopulationSpectrum& psd, double gamma,
                        double lower, double upper,
                        const Precision& precision,
                        std::optional<double> critical_hint) {
  validate_gamma(gamma);
  if (!(lower < upper))
    throw Error(ErrorCode::InvalidArgument, "interval requires lower < upper");

  const double delta = precision.delta;
  const std::size_t M = precision.grid_size_per_interval;

  OdeTrace trace;
  trace.delta = delta;
  trace.grid.resize(M + 1);
  for (std::size_t j = 0; j <= M; ++j)
    trace.grid[j] =
        lower + (upper - lower) * static_cast<double>(j) /
                    static_cast<double>(M);
  trace.grid.front() = lower;
  trace.grid.back() = upper;

  // Starting-point retry strictly inside: near the square-root edge the
  // fixed-point fallback converges slowly and may fail at the edge itself.
  double x_start = lower;
  Complex v_start;
  try {
    v_start = start_value(psd, gamma, Complex(x_start, delta),
                          precision.eta, critical_hint);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::FpaStartFailure) throw;
    x_start = lower + (upper - lower) * 1e-3;
    v_start = start_value(psd, gamma, Complex(x_start, delta),
                          precision.eta, critical_hint);
  }

  auto rhs = [&](double x, Complex v) -> Complex {
    try {
      return ode_rhs(psd, gamma, v);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::CriticalPoint)
        throw Error(ErrorCode::CriticalPoint, e.what(), x);
      throw;
    }
  };

  OdeOptions opt;
  opt.abs_tol = opt.rel_tol = precision.epsilon * 1e-2;

  trace.v_values.assign(M + 1, Complex(0.0, 0.0));
  const auto split = static_cast<std::size_t>(
      std::lower_bound(trace.grid.begin(), trace.grid.end(), x_start) -
      trace.grid.begin());

  const OdeSolution fwd = dopri5_integrate(rhs, x_start, upper, v_start, opt);
  fill_grid_from_solution(fwd, trace.grid, split, M + 1, trace.v_values);
  if (split > 0) {
    const OdeSolution bwd = dopri5_integrate(rhs, x_start, lower, v_start, opt);
    fill_grid_from_solution(bwd, trace.grid, 0, split, trace.v_values);
  }

  trace.max_residual = 0.0;
  for (std::size_t j = 0; j <= M; ++j) {
    const Complex v = trace.v_values[j];
    if (!(v.imag() > 0.0))
      throw Error(ErrorCode::InternalConsistency,
                  "ODE trace left the upper half-plane", trace.grid[j]);
    const double r = silverstein_residual(
        psd, gamma, Complex(trace.grid[j], delta), v);
    trace.max_residual = std::max(trace.max_residual, r);
  }
  return trace;
}

namespace {

std::optional<double> lower_edge_hint(const SupportReport& report,
                                      double gamma, std::size_t k) {
  const auto& inc = report.increasing_intervals;
  if (inc.size() != report.endpoints.size() + 1) return std::nullopt;
  if (gamma < 1.0) return inc[k].b;
  return k == 0 ? inc.back().b : inc[k - 1].b;
}

std::vector<OdeTrace> solve_all(const PopulationSpectrum& psd, double gamma,
                                const SupportReport& support,
                                const Precision& precision) {
  std::vector<OdeTrace> traces(support.endpoints.size());
  std::exception_ptr failure;
  std::mutex failure_mutex;
  parallel_for(support.endpoints.size(), [&](std::size_t k) {
    try {
      OdeTrace t = solve_interval(psd, gamma, support.endpoints[k].lower,
                                  support.endpoints[k].upper, precision,
                                  lower_edge_hint(support, gamma, k));
      // Residual certificate: one retry with a tighter integrator before
      // declaring the trace inconsistent.
      if (t.max_residual > 10.0 * precision.epsilon) {
        Precision run = precision;
        run.epsilon = precision.epsilon * 1e-2;  // drives the ODE tolerance
        t = solve_interval(psd, gamma, support.endpoints[k].lower,
                           support.endpoints[k].upper, run,
                           lower_edge_hint(support, gamma, k));
        if (t.max_residual > 10.0 * precision.epsilon)
          throw Error(ErrorCode::InternalConsistency,
                      "residual certificate failed after retry");
      }
      t.interval_index = k;
      traces[k] = std::move(t);
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);
  return traces;
}

}  // namespace

EsdComputation compute_esd_detailed(const PopulationSpectrum& psd,
                                    double gamma,
                                    const Precision& precision) {
  validate_gamma(gamma);

  double scan_eps = precision.epsilon;
  for (int attempt = 0;; ++attempt) {
    SupportReport support = find_support(psd, gamma, scan_eps);
    try {
      std::vector<OdeTrace> traces = solve_all(psd, gamma, support, precision);

      EsdComputation out;
      out.support = std::move(support);
      out.density.gamma = gamma;
      out.density.zero_mass = gamma > 1.0 ? 1.0 - 1.0 / gamma : 0.0;
      for (auto& t : traces) {
        DensityInterval iv;
        iv.lower = t.grid.front();
        iv.upper = t.grid.back();
        iv.grid = t.grid;
        iv.values.resize(t.grid.size());
        for (std::size_t j = 0; j < t.grid.size(); ++j) {
          const Complex m = m_from_v(gamma, Complex(t.grid[j], t.delta),
                                     t.v_values[j]);
          double f = m.imag() / std::numbers::pi;
          if (f < 0.0) {
            if (f < -1e-12)
              throw Error(ErrorCode::InternalConsistency,
                          "density below -1e-12", t.grid[j]);
            f = 0.0;
          }
          iv.values[j] = f;
        }
        iv.values.front() = 0.0;
        iv.values.back() = 0.0;
        out.density.intervals.push_back(std::move(iv));
        out.traces.push_back(std::move(t));
      }
      return out;
    } catch (const Error& e) {
      // A critical point strictly inside an interval means the support scan
      // over-merged; rescan finer and retry.
      if (e.code() == ErrorCode::CriticalPoint && attempt < 2) {
        scan_eps *= 0.25;
        continue;
      }
      throw;
    }
  }
}

SpectralDensity compute_esd(const PopulationSpectrum& psd, double gamma,
                            const Precision& precision) {
  return compute_esd_detailed(psd, gamma, precision).density;
}

}  // namespace spectrode
