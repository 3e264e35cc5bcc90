#include "spectrode/oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "spectrode/parallel.hpp"

namespace spectrode {

double mp_density(double gamma, double x) {
  validate_gamma(gamma);
  const auto [lo, hi] = mp_edges(gamma);
  if (x < lo || x > hi || x == 0.0) return 0.0;
  return std::sqrt((hi - x) * (x - lo)) / (2.0 * std::numbers::pi * gamma * x);
}

std::pair<double, double> mp_edges(double gamma) {
  const double s = std::sqrt(gamma);
  return {(1.0 - s) * (1.0 - s), (1.0 + s) * (1.0 + s)};
}

std::array<Complex, 3> solve_cubic(double c3, double c2, double c1,
                                   double c0) {
  if (c3 == 0.0)
    throw Error(ErrorCode::DegenerateCubic, "leading coefficient is zero");
  // Monic normalization plus a variable scaling v = s*u keeps the
  // intermediate powers near unity.
  double a = c2 / c3, b = c1 / c3, c = c0 / c3;
  const double s = std::max(
      {1e-30, std::abs(a), std::sqrt(std::abs(b)), std::cbrt(std::abs(c))});
  a /= s;
  b /= s * s;
  c /= s * s * s;

  const double q = (a * a - 3.0 * b) / 9.0;
  const double r = (a * (2.0 * a * a - 9.0 * b) + 27.0 * c) / 54.0;
  const double r2 = r * r, q3 = q * q * q;

  std::array<Complex, 3> roots;
  if (r2 < q3) {
    // Three real roots, trigonometric form.
    const double theta = std::acos(std::clamp(r / std::sqrt(q3), -1.0, 1.0));
    const double m = -2.0 * std::sqrt(q);
    roots[0] = m * std::cos(theta / 3.0) - a / 3.0;
    roots[1] = m * std::cos((theta + 2.0 * std::numbers::pi) / 3.0) - a / 3.0;
    roots[2] = m * std::cos((theta - 2.0 * std::numbers::pi) / 3.0) - a / 3.0;
  } else {
    const double big =
        -std::copysign(std::cbrt(std::abs(r) + std::sqrt(r2 - q3)), r);
    const double small = big == 0.0 ? 0.0 : q / big;
    roots[0] = big + small - a / 3.0;
    const double re = -0.5 * (big + small) - a / 3.0;
    const double im = 0.5 * std::sqrt(3.0) * (big - small);
    roots[1] = Complex(re, im);
    roots[2] = Complex(re, -im);
  }
  for (auto& root : roots) root *= s;
  return roots;
}

double twopoint_density(double gamma, double q, double t, double x) {
  validate_gamma(gamma);
  if (!(q > 0.0 && q < 1.0))
    throw Error(ErrorCode::InvalidArgument, "q must lie in (0, 1)");
  if (t == 1.0)
    throw Error(ErrorCode::InvalidArgument,
                "t = 1 collapses the mixture to a single atom");
  if (!(t > 0.0))
    throw Error(ErrorCode::NonPositiveEigenvalue, "t must be positive");
  if (x == 0.0)
    throw Error(ErrorCode::InvalidArgument, "x = 0 is outside the domain");

  const double c3 = x * t;
  if (std::abs(c3) < 1e-14)
    throw Error(ErrorCode::DegenerateCubic, "|x t| below 1e-14");
  const double c2 = x * t + x + t - t * gamma;
  const double c1 = x + t + 1.0 - gamma * (q + (1.0 - q) * t);
  const auto roots = solve_cubic(c3, c2, c1, 1.0);

  // Inside the spectrum exactly one root has positive imaginary part;
  // outside, all three are real.
  const double scale = std::abs(roots[0]) + std::abs(roots[1]) + 1.0;
  Complex v(0.0, 0.0);
  int positive = 0;
  for (const auto& root : roots) {
    if (root.imag() > 1e-12 * scale) {
      v = root;
      ++positive;
    }
  }
  if (positive != 1) return 0.0;
  return v.imag() / (gamma * std::numbers::pi * 1.0);
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t replicate) {
  // splitmix64 on (seed, replicate) so replicate streams are independent of
  // scheduling order.
  std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (replicate + 1);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::vector<double> discretize_psd(const PopulationSpectrum& psd, int p) {
  struct Share {
    double ideal;
    int count;
  };
  const std::size_t ncomp = psd.atoms().size() + psd.uniforms().size();
  std::vector<Share> shares(ncomp);
  std::vector<double> weights;
  weights.reserve(ncomp);
  for (const auto& a : psd.atoms()) weights.push_back(a.w);
  for (const auto& u : psd.uniforms()) weights.push_back(u.w);

  int assigned = 0;
  for (std::size_t i = 0; i < ncomp; ++i) {
    shares[i].ideal = weights[i] * p;
    shares[i].count = static_cast<int>(std::floor(shares[i].ideal));
    assigned += shares[i].count;
  }
  // Largest-remainder rounding to exactly p eigenvalues.
  std::vector<std::size_t> order(ncomp);
  for (std::size_t i = 0; i < ncomp; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return shares[i].ideal - std::floor(shares[i].ideal) >
           shares[j].ideal - std::floor(shares[j].ideal);
  });
  for (std::size_t i = 0; assigned < p; ++i)
    ++shares[order[i % ncomp]].count, ++assigned;

  std::vector<double> eigs;
  eigs.reserve(static_cast<std::size_t>(p));
  std::size_t idx = 0;
  for (const auto& a : psd.atoms()) {
    for (int j = 0; j < shares[idx].count; ++j) eigs.push_back(a.t);
    ++idx;
  }
  for (const auto& u : psd.uniforms()) {
    const int k = shares[idx].count;
    for (int j = 1; j <= k; ++j)
      eigs.push_back(u.a + (u.b - u.a) * (j - 0.5) / k);
    ++idx;
  }
  return eigs;
}

double silverman_bandwidth(std::vector<double> values) {
  const std::size_t n = values.size();
  std::sort(values.begin(), values.end());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n - 1);

  const auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(n - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return i + 1 < n ? values[i] * (1.0 - frac) + values[i + 1] * frac
                     : values[i];
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  double sigma = std::sqrt(var);
  if (iqr > 0.0) sigma = std::min(sigma, iqr / 1.34);
  double h = 0.9 * sigma * std::pow(static_cast<double>(n), -0.2);
  if (!(h > 0.0)) h = 1e-3 * (values.back() - values.front() + 1.0);
  return h;
}

}  // namespace

std::vector<double> mc_esd(const PopulationSpectrum& psd, double gamma,
                           const std::vector<double>& grid,
                           const McOptions& options) {
  validate_gamma(gamma);
  if (options.p < 10)
    throw Error(ErrorCode::InvalidArgument, "p must be at least 10");
  if (options.p > options.p_cap)
    throw Error(ErrorCode::DimensionTooLarge,
                "p exceeds the configured cap of " +
                    std::to_string(options.p_cap));
  if (options.n_mc < 1)
    throw Error(ErrorCode::InvalidArgument, "n_mc must be positive");
  if (grid.empty())
    throw Error(ErrorCode::InvalidArgument, "grid must be nonempty");

  const int p = options.p;
  const int n = std::max(1, static_cast<int>(std::lround(p / gamma)));
  const std::vector<double> tau = discretize_psd(psd, p);
  std::vector<double> sqrt_tau(tau.size());
  for (std::size_t j = 0; j < tau.size(); ++j) sqrt_tau[j] = std::sqrt(tau[j]);

  const std::size_t reps = static_cast<std::size_t>(options.n_mc);
  std::vector<std::vector<double>> per_rep(reps);

  parallel_for(reps, [&](std::size_t r) {
    std::mt19937_64 rng(mix_seed(options.seed, r));
    std::normal_distribution<double> normal;

    Eigen::MatrixXd x(n, p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < p; ++j) x(i, j) = normal(rng) * sqrt_tau[j];

    Eigen::MatrixXd s = (x.transpose() * x) / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        s, Eigen::EigenvaluesOnly);
    std::vector<double> eigs(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + p);

    const double h = silverman_bandwidth(eigs);
    std::vector<double> density(grid.size(), 0.0);
    const double norm = 1.0 / (static_cast<double>(p) * h);
    for (double lambda : eigs) {
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const double u = (grid[g] - lambda) / h;
        if (std::abs(u) < 1.0) density[g] += norm * 0.75 * (1.0 - u * u);
      }
    }
    per_rep[r] = std::move(density);
  });

  // Replicate-order summation keeps the result independent of scheduling.
  std::vector<double> avg(grid.size(), 0.0);
  for (std::size_t r = 0; r < reps; ++r)
    for (std::size_t g = 0; g < grid.size(); ++g) avg[g] += per_rep[r][g];
  for (double& v : avg) v /= static_cast<double>(reps);
  return avg;
}

}  // namespace spectrode
