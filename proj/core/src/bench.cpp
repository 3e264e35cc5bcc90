#include "spectrode/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <utility>

#include "spectrode/fpa.hpp"
#include "spectrode/oracles.hpp"
#include "spectrode/parallel.hpp"
#include "spectrode/spectrode.hpp"

namespace spectrode {

namespace {

PopulationSpectrum problem_psd(BenchProblem problem) {
  if (problem == BenchProblem::MP) return validate_psd({{1.0, 1.0}});
  return validate_psd({{1.0, 0.5}, {8.0, 0.5}});
}

double true_density(BenchProblem problem, double gamma, double x) {
  if (problem == BenchProblem::MP) return mp_density(gamma, x);
  return twopoint_density(gamma, 0.5, 8.0, x);
}

template <class Fn>
double median_wall_seconds(Fn&& fn, int warmups, int reps) {
  using clock = std::chrono::steady_clock;
  for (int i = 0; i < warmups; ++i) fn();
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(reps));
  for (int i = 0; i < reps; ++i) {
    const auto t0 = clock::now();
    fn();
    const auto t1 = clock::now();
    times.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

double mean_digits(const std::vector<double>& estimate,
                   const std::vector<double>& truth) {
  double sum = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i)
    sum += std::abs(estimate[i] - truth[i]);
  const double mean = sum / static_cast<double>(estimate.size());
  return -std::log10(std::max(mean, 1e-300));
}

void write_points_csv(const std::string& path, const std::vector<double>& x,
                      const std::vector<double>& f_ode,
                      const std::vector<double>& f_fpa,
                      const std::vector<double>& f_true) {
  std::ofstream out(path);
  out << "x,f_spectrode,f_fpa,f_true\n";
  char buf[160];
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", x[i],
                  f_ode[i], f_fpa[i], f_true[i]);
    out << buf;
  }
}

}  // namespace

std::vector<TimingRow> run_timing(BenchProblem problem, double gamma,
                                  const std::vector<double>& epsilons,
                                  const TimingOptions& options) {
  validate_gamma(gamma);
  const PopulationSpectrum psd = problem_psd(problem);
  const ThreadPin pin(1);  // both methods timed single-threaded

  std::vector<TimingRow> rows;
  for (const double eps : epsilons) {
    const Precision precision(eps);

    SpectralDensity esd;
    const double t_ode = median_wall_seconds(
        [&] { esd = compute_esd(psd, gamma, precision); }, options.warmups,
        options.repetitions);

    std::vector<double> grid, f_ode;
    for (const auto& iv : esd.intervals) {
      grid.insert(grid.end(), iv.grid.begin(), iv.grid.end());
      f_ode.insert(f_ode.end(), iv.values.begin(), iv.values.end());
    }
    std::vector<double> f_true(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      f_true[i] = true_density(problem, gamma, grid[i]);

    // Early-stopping rule from the benchmark protocol: ceil(1/eps)
    // iterations per grid point.
    const auto early_stop =
        static_cast<std::size_t>(std::ceil(1.0 / eps));
    FpaGridResult fpa;
    const double t_fpa = median_wall_seconds(
        [&] { fpa = fpa_density_grid(psd, gamma, grid, eps, early_stop, 1); },
        options.warmups, options.repetitions);

    rows.push_back({"spectrode", eps, t_ode, std::log10(t_ode),
                    mean_digits(f_ode, f_true)});
    rows.push_back({"fpa", eps, t_fpa, std::log10(t_fpa),
                    mean_digits(fpa.density, f_true)});

    if (!options.out_dir.empty()) {
      std::filesystem::create_directories(options.out_dir);
      char name[64];
      std::snprintf(name, sizeof(name), "points_eps%.0e.csv", eps);
      write_points_csv(options.out_dir + "/" + name, grid, f_ode, fpa.density,
                       f_true);
    }
  }
  return rows;
}

std::vector<SupportRow> run_support_experiment(
    const CombSpec& comb, const std::vector<double>& gammas,
    const std::vector<double>& epsilons, double eps0) {
  for (const double eps : epsilons)
    if (!(eps0 < eps))
      throw Error(ErrorCode::InvalidArgument,
                  "eps0 must be finer than every tested epsilon");

  const double eig_gap =
      comb.J > 1 ? (comb.last_eig - comb.first_eig) / (comb.J - 1) : 0.0;
  const PopulationSpectrum psd =
      comb_psd(comb.J, comb.weight_gap, comb.first_eig, eig_gap);

  // The gold standard thresholds the fixed-point density at eps0. Interior
  // points converge slowly at height eps0^2; the cap below leaves them at
  // O(f) accuracy, far above the threshold, while gap points converge fully.
  constexpr std::size_t kGoldMaxIter = 30'000;

  std::vector<SupportRow> rows;
  for (const double gamma : gammas) {
    for (const double eps : epsilons) {
      const SpectralDensity esd = compute_esd(psd, gamma, Precision(eps));

      std::vector<double> grid;
      std::vector<std::size_t> first_index, last_index;
      for (const auto& iv : esd.intervals) {
        first_index.push_back(grid.size());
        grid.insert(grid.end(), iv.grid.begin(), iv.grid.end());
        last_index.push_back(grid.size() - 1);
      }

      const FpaGridResult gold =
          fpa_density_grid(psd, gamma, grid, eps0, kGoldMaxIter);

      // Connected components of {x_i : f_fp(x_i) > eps0}.
      std::vector<std::pair<std::size_t, std::size_t>> components;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (gold.density[i] <= eps0) continue;
        if (!components.empty() && components.back().second + 1 == i)
          components.back().second = i;
        else
          components.emplace_back(i, i);
      }

      SupportRow row;
      row.gamma = gamma;
      row.epsilon = eps;
      row.delta_K = std::abs(static_cast<double>(esd.intervals.size()) -
                             static_cast<double>(components.size()));
      if (row.delta_K != 0.0) {
        row.delta_lower = std::numeric_limits<double>::infinity();
        row.delta_upper = std::numeric_limits<double>::infinity();
      } else {
        const auto at = [&](std::size_t i) {
          return grid[std::min(i, grid.size() - 1)];
        };
        double sum_lower = 0.0, sum_upper = 0.0;
        for (std::size_t k = 0; k < components.size(); ++k) {
          const auto [i_ours, j_gold] =
              std::minmax(first_index[k], components[k].first);
          sum_lower += std::abs(at(i_ours == 0 ? 0 : i_ours - 1) -
                                at(j_gold + 1));
          const auto [i2, j2] = std::minmax(last_index[k], components[k].second);
          sum_upper += std::abs(at(i2 == 0 ? 0 : i2 - 1) - at(j2 + 1));
        }
        row.delta_lower = sum_lower / static_cast<double>(components.size());
        row.delta_upper = sum_upper / static_cast<double>(components.size());
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace spectrode
