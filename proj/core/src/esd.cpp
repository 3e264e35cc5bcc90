#include "spectrode/esd.hpp"

#include <algorithm>
#include <cmath>

namespace spectrode {

double evaluate_density(const SpectralDensity& esd, double x) {
  if (!std::isfinite(x))
    throw Error(ErrorCode::InvalidArgument, "x must be finite");
  for (const auto& iv : esd.intervals) {
    if (x < iv.lower || x > iv.upper) continue;
    const auto it = std::upper_bound(iv.grid.begin(), iv.grid.end(), x);
    if (it == iv.grid.begin()) return iv.values.front();
    if (it == iv.grid.end()) return iv.values.back();
    const std::size_t j = static_cast<std::size_t>(it - iv.grid.begin()) - 1;
    const double x0 = iv.grid[j], x1 = iv.grid[j + 1];
    const double alpha = (x1 - x) / (x1 - x0);
    return alpha * iv.values[j] + (1.0 - alpha) * iv.values[j + 1];
  }
  return 0.0;
}

double total_mass(const SpectralDensity& esd) {
  double mass = esd.zero_mass;
  for (const auto& iv : esd.intervals) {
    for (std::size_t j = 0; j + 1 < iv.grid.size(); ++j) {
      mass += 0.5 * (iv.values[j] + iv.values[j + 1]) *
              (iv.grid[j + 1] - iv.grid[j]);
    }
  }
  return mass;
}

}  // namespace spectrode
