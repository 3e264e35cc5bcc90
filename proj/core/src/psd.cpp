#include "spectrode/psd.hpp"

#include <algorithm>
#include <cmath>

namespace spectrode {

namespace {
constexpr double kWeightSumTolerance = 1e-9;
}

PopulationSpectrum PopulationSpectrum::validate(
    std::vector<Atom> atoms, std::vector<UniformComponent> uniforms) {
  if (atoms.empty() && uniforms.empty())
    throw Error(ErrorCode::InvalidArgument,
                "population spectrum needs at least one component");

  double sum = 0.0;
  for (const auto& a : atoms) {
    if (!(a.t > 0.0) || !std::isfinite(a.t))
      throw Error(ErrorCode::NonPositiveEigenvalue,
                  "atom location must be a positive real");
    if (!(a.w > 0.0) || !std::isfinite(a.w))
      throw Error(ErrorCode::InvalidArgument, "atom weight must be positive");
    sum += a.w;
  }
  for (const auto& u : uniforms) {
    if (!(u.a > 0.0) || !(u.a < u.b) || !std::isfinite(u.b))
      throw Error(ErrorCode::DegenerateUniform,
                  "uniform component requires 0 < a < b");
    if (!(u.w > 0.0) || !std::isfinite(u.w))
      throw Error(ErrorCode::InvalidArgument,
                  "uniform weight must be positive");
    sum += u.w;
  }

  if (std::abs(sum - 1.0) > kWeightSumTolerance)
    throw Error(ErrorCode::WeightsDoNotSumToOne,
                "component weights sum to " + std::to_string(sum));
  // Renormalize away float-literal slack; anything larger was rejected above.
  for (auto& a : atoms) a.w /= sum;
  for (auto& u : uniforms) u.w /= sum;

  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& x, const Atom& y) { return x.t < y.t; });
  for (std::size_t i = 1; i < atoms.size(); ++i) {
    if (atoms[i].t == atoms[i - 1].t)
      throw Error(ErrorCode::DuplicateAtom,
                  "duplicate atom at t = " + std::to_string(atoms[i].t));
  }
  std::sort(uniforms.begin(), uniforms.end(),
            [](const UniformComponent& x, const UniformComponent& y) {
              return x.a < y.a;
            });

  return PopulationSpectrum(std::move(atoms), std::move(uniforms));
}

PopulationSpectrum validate_psd(std::vector<Atom> atoms,
                                std::vector<UniformComponent> uniforms) {
  return PopulationSpectrum::validate(std::move(atoms), std::move(uniforms));
}

double PopulationSpectrum::min_support() const noexcept {
  double m = std::numeric_limits<double>::infinity();
  if (!atoms_.empty()) m = std::min(m, atoms_.front().t);
  for (const auto& u : uniforms_) m = std::min(m, u.a);
  return m;
}

double PopulationSpectrum::max_support() const noexcept {
  double m = 0.0;
  if (!atoms_.empty()) m = std::max(m, atoms_.back().t);
  for (const auto& u : uniforms_) m = std::max(m, u.b);
  return m;
}

double PopulationSpectrum::mean() const noexcept {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.w * a.t;
  for (const auto& u : uniforms_) m += u.w * 0.5 * (u.a + u.b);
  return m;
}

PopulationSpectrum comb_psd(int num_atoms, double weight_gap, double first_eig,
                            double eig_gap) {
  const int J = num_atoms;
  const double b = weight_gap;
  if (J < 1) throw Error(ErrorCode::InvalidComb, "need at least one atom");
  const double a = (1.0 - b * J * (J - 1) / 2.0) / J;

  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(J));
  for (int j = 0; j < J; ++j) {
    const double t = first_eig + j * eig_gap;
    const double w = a + j * b;
    if (!(t > 0.0))
      throw Error(ErrorCode::InvalidComb,
                  "nonpositive eigenvalue at j = " + std::to_string(j));
    if (!(w > 0.0))
      throw Error(ErrorCode::InvalidComb,
                  "nonpositive weight at j = " + std::to_string(j));
    atoms.push_back({t, w});
  }
  return validate_psd(std::move(atoms));
}

void validate_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw Error(ErrorCode::InvalidArgument, "gamma must be a positive real");
  // gamma = 1 is excluded (ESD density may be unbounded at 0); values this
  // close are numerically indistinguishable from the excluded case.
  if (std::abs(gamma - 1.0) <= 1e-9)
    throw Error(ErrorCode::GammaEqualsOne, "gamma = 1 is not supported");
}

}  // namespace spectrode
