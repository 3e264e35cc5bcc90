#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "spectrode/silverstein.hpp"

namespace spectrode {

/// A maximal v-interval on which z'(v) > 0, reported between grid points
/// where the positive sign was actually verified.
struct IncreasingInterval {
  double a = 0.0;
  double b = 0.0;
  bool reaches_zero = false;  // last interval before v = 0^-
};

struct SupportInterval {
  double lower = 0.0;
  double upper = 0.0;
};

struct SupportReport {
  std::vector<SupportInterval> endpoints;            // ascending, interleaved
  std::vector<IncreasingInterval> increasing_intervals;  // ascending in v
  std::size_t K() const { return endpoints.size(); }
};

/// Leftmost edge for gamma < 1: iterative grid doubling left of the leftmost
/// pole D; returns (b_hat, l1_hat) with b_hat the first grid point where
/// z'(b_hat) < 0 and l1_hat = z(b_hat).
std::pair<double, double> find_leftmost_edge(const PopulationSpectrum& psd,
                                             double gamma, double epsilon);

/// Full support scan: sign switches of z' over the pole sub-intervals
/// J_i = (-1/t_i, -1/t_{i+1}) (uniform components contribute interval
/// barriers), plus the positive axis for gamma > 1.
SupportReport find_support(const PopulationSpectrum& psd, double gamma,
                           double epsilon);

}  // namespace spectrode
