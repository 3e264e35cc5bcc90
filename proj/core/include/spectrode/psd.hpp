#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "spectrode/error.hpp"

namespace spectrode {

/// One point mass of the population spectrum: weight `w` at eigenvalue `t`.
struct Atom {
  double t = 0.0;
  double w = 0.0;
};

/// One uniform mixture component on [a, b] with weight `w`.
struct UniformComponent {
  double a = 0.0;
  double b = 0.0;
  double w = 0.0;
};

/// Population spectral distribution: a finite mixture of point masses and
/// uniform components. Immutable after construction; atoms sorted ascending.
class PopulationSpectrum {
 public:
  static PopulationSpectrum validate(std::vector<Atom> atoms,
                                     std::vector<UniformComponent> uniforms);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::vector<UniformComponent>& uniforms() const noexcept {
    return uniforms_;
  }

  /// Smallest point of the support of H (left edge over all components).
  double min_support() const noexcept;
  /// Largest point of the support of H.
  double max_support() const noexcept;
  /// Mean of H.
  double mean() const noexcept;

 private:
  PopulationSpectrum(std::vector<Atom> atoms,
                     std::vector<UniformComponent> uniforms)
      : atoms_(std::move(atoms)), uniforms_(std::move(uniforms)) {}

  std::vector<Atom> atoms_;
  std::vector<UniformComponent> uniforms_;
};

/// Validated constructor; weights renormalized when |sum - 1| <= 1e-9.
PopulationSpectrum validate_psd(std::vector<Atom> atoms,
                                std::vector<UniformComponent> uniforms = {});

/// Comb model: J atoms at c + j*d with arithmetic weights a + j*b, where a is
/// determined by the unit-sum constraint, a = (1 - b*J*(J-1)/2) / J.
PopulationSpectrum comb_psd(int num_atoms, double weight_gap, double first_eig,
                            double eig_gap);

/// Precision controls. eta defaults to epsilon, delta to epsilon^2 and the
/// per-interval grid size to ceil(epsilon^(-1/2)).
struct Precision {
  double epsilon;
  double eta;
  double delta;
  std::size_t grid_size_per_interval;

  static std::size_t default_grid_size(double eps) {
    auto m = static_cast<std::size_t>(std::ceil(1.0 / std::sqrt(eps)));
    return m < 2 ? 2 : m;
  }

  explicit Precision(double eps)
      : Precision(eps, eps, eps * eps, default_grid_size(eps)) {}

  Precision(double eps, double eta_, double delta_, std::size_t grid_size)
      : epsilon(eps), eta(eta_), delta(delta_),
        grid_size_per_interval(grid_size) {
    // delta = eps^2 must stay above double rounding noise, hence the floor.
    if (!(eps > 0.0) || eps < 1e-10)
      throw Error(ErrorCode::InvalidArgument,
                  "epsilon must lie in [1e-10, inf)");
    if (!(eta > 0.0))
      throw Error(ErrorCode::InvalidArgument, "eta must be positive");
    if (!(delta > 0.0))
      throw Error(ErrorCode::InvalidArgument, "delta must be positive");
    if (grid_size_per_interval < 2)
      throw Error(ErrorCode::InvalidArgument,
                  "grid_size_per_interval must be at least 2");
  }
};

/// Rejects gamma <= 0 and gamma == 1 (excluded case).
void validate_gamma(double gamma);

}  // namespace spectrode
