#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spectrode/psd.hpp"

namespace spectrode {

enum class BenchProblem { MP, TwoPoint };

struct TimingRow {
  std::string method;  // "spectrode" | "fpa"
  double epsilon = 0.0;
  double seconds = 0.0;
  double seconds_log10 = 0.0;
  double mean_digits = 0.0;  // -log10(mean |f_hat - f|)
};

struct TimingOptions {
  int warmups = 3;
  int repetitions = 5;  // median reported
  std::string out_dir;  // when nonempty, per-point CSVs are written here
};

/// Wall-clock comparison of the ODE method against the fixed-point baseline
/// on the same grid, with eta = epsilon and the ceil(1/epsilon) early-stop
/// rule. Both methods run single-threaded.
std::vector<TimingRow> run_timing(BenchProblem problem, double gamma,
                                  const std::vector<double>& epsilons,
                                  const TimingOptions& options = {});

struct SupportRow {
  double gamma = 0.0;
  double epsilon = 0.0;
  double delta_K = 0.0;  // |K_hat - K_fp|; endpoint errors are inf when != 0
  double delta_lower = 0.0;
  double delta_upper = 0.0;
};

struct CombSpec {
  int J = 6;
  double weight_gap = 0.01;
  double first_eig = 0.5;
  double last_eig = 10.0;
};

/// Support-identification experiment: the gold standard is the fixed-point
/// density thresholded at eps0 on the ODE method's own grid; endpoint errors
/// use the neighboring-grid-spacing-inflated metric.
std::vector<SupportRow> run_support_experiment(
    const CombSpec& comb, const std::vector<double>& gammas,
    const std::vector<double>& epsilons, double eps0);

}  // namespace spectrode
