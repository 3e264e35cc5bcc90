#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "spectrode/fpa.hpp"
#include "spectrode/oracles.hpp"

using namespace spectrode;

namespace {
PopulationSpectrum mp_psd() { return validate_psd({{1.0, 1.0}}); }
PopulationSpectrum twopoint_psd() {
  return validate_psd({{1.0, 0.5}, {8.0, 0.5}});
}
}  // namespace

TEST_CASE("MP density at x = 1 against the closed form") {
  // The iteration contracts at rate 1 - O(eta^2) inside the bulk; eta = 2e-3
  // needs ~2.5e6 iterations and delivers eta-limited accuracy ~6e-4.
  const double eta = 2e-3;
  const auto r = fpa_solve(mp_psd(), 0.5, Complex(1.0, 0.0), eta, 4'000'000);
  CHECK(r.converged);
  CHECK(r.lifted);
  CHECK(r.sample.z.imag() == doctest::Approx(eta * eta));
  const double density = r.sample.m.imag() / std::numbers::pi;
  CHECK(std::abs(density - mp_density(0.5, 1.0)) < 1e-3);
}

TEST_CASE("documented stall: tiny eta inside the bulk does not converge") {
  const auto r = fpa_solve(mp_psd(), 0.5, Complex(1.0, 0.0), 1e-6, 200000);
  CHECK_FALSE(r.converged);
  CHECK(r.sample.v.imag() > 0.0);
  CHECK(r.sample.residual > 1e-6);
}

TEST_CASE("gamma -> 0 proxy converges immediately to -1/z") {
  const Complex z(2.0, 0.7);
  const auto r = fpa_solve(mp_psd(), 1e-12, z, 1e-6);
  CHECK(r.converged);
  CHECK(r.iterations <= 2);
  CHECK(std::abs(r.sample.v + 1.0 / z) < 1e-6);
}

TEST_CASE("two-point density at x = 1 against the cubic oracle") {
  const auto r = fpa_solve(twopoint_psd(), 0.5, Complex(1.0, 0.0), 5e-3);
  CHECK(r.converged);
  const double density = r.sample.m.imag() / std::numbers::pi;
  CHECK(std::abs(density - twopoint_density(0.5, 0.5, 8.0, 1.0)) < 1e-3);
}

TEST_CASE("dual transform identity m = v/gamma + (1/gamma - 1)/z") {
  const auto r = fpa_solve(twopoint_psd(), 0.5, Complex(2.0, 0.3), 1e-8);
  const Complex expected =
      r.sample.v / 0.5 + (1.0 / 0.5 - 1.0) / r.sample.z;
  CHECK(std::abs(r.sample.m - expected) < 1e-15);
}

TEST_CASE("final iterate stays in the upper half-plane") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 60; ++i) {
    const Complex z(unit(rng) * 12.0 - 1.0, 1e-6 + unit(rng));
    const double gamma = i % 2 ? 0.3 : 2.5;
    const auto r = fpa_solve(twopoint_psd(), gamma, z, 1e-8);
    CHECK(r.sample.v.imag() > 0.0);
    CHECK(r.sample.m.imag() > 0.0);
  }
}

TEST_CASE("monotone refinement: halving eta never raises the residual") {
  const Complex z(1.4, 1e-4);
  double prev = 1e9;
  for (double eta = 1e-2; eta > 1e-9; eta *= 0.5) {
    const auto r = fpa_solve(mp_psd(), 0.5, z, eta);
    CHECK(r.converged);
    CHECK(r.sample.residual <= prev * (1.0 + 1e-12));
    prev = r.sample.residual;
  }
}

TEST_CASE("conjugate reflection: conj(v) solves at conj(z)") {
  const Complex z(1.7, 0.2);
  const auto r = fpa_solve(twopoint_psd(), 0.5, z, 1e-10);
  const double res = silverstein_residual(twopoint_psd(), 0.5, std::conj(z),
                                          std::conj(r.sample.v));
  CHECK(res <= r.sample.residual * (1.0 + 1e-10) + 1e-14);
}

TEST_CASE("invalid arguments") {
  CHECK_THROWS_AS(fpa_solve(mp_psd(), 0.5, Complex(1.0, -0.1), 1e-6), Error);
  CHECK_THROWS_AS(fpa_solve(mp_psd(), 0.5, Complex(1.0, 0.1), 0.0), Error);
  CHECK_THROWS_AS(fpa_solve(mp_psd(), 1.0, Complex(1.0, 0.1), 1e-6), Error);
}

TEST_CASE("NotConverged is a flag, not a failure") {
  const auto r = fpa_solve(mp_psd(), 0.5, Complex(1.0, 1e-9), 1e-12, 5);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 5);
  CHECK(r.sample.residual > 1e-12);
}

TEST_CASE("grid: single point matches fpa_solve") {
  const double x = 3.5;  // outside the bulk: converges fast at any eta
  const auto grid_result = fpa_density_grid(mp_psd(), 0.5, {x}, 1e-6);
  const auto single = fpa_solve(mp_psd(), 0.5, Complex(x, 0.0), 1e-6);
  CHECK(grid_result.density[0] ==
        doctest::Approx(std::max(0.0, single.sample.m.imag()) /
                        std::numbers::pi)
            .epsilon(1e-12));
  CHECK(bool(grid_result.converged[0]));
}

TEST_CASE("grid outside the support reads O(eta) densities") {
  std::vector<double> grid{3.2, 4.0, 6.0, 10.0};  // beyond the MP bulk
  const double eta = 1e-4;
  const auto r = fpa_density_grid(mp_psd(), 0.5, grid, eta);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(r.converged[i]);
    CHECK(r.density[i] >= 0.0);
    CHECK(r.density[i] < 10.0 * eta);
  }
}

TEST_CASE("grid on the MP bulk tracks the closed form at moderate eta") {
  std::vector<double> grid;
  const auto [lo, hi] = mp_edges(0.5);
  for (int i = 1; i < 100; ++i) grid.push_back(lo + (hi - lo) * i / 100.0);
  const double eta = 1e-4;
  const auto r = fpa_density_grid(mp_psd(), 0.5, grid, eta);
  double sup = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!r.converged[i]) continue;
    sup = std::max(sup, std::abs(r.density[i] - mp_density(0.5, grid[i])));
  }
  CHECK(sup < 5e-3);  // eta-limited accuracy away from early stopping
}

TEST_CASE("parallel and serial grids agree exactly") {
  std::vector<double> grid;
  for (int i = 0; i < 40; ++i) grid.push_back(0.1 + 0.07 * i);
  const auto serial = fpa_density_grid(mp_psd(), 0.5, grid, 1e-5, 100000, 1);
  const auto parallel = fpa_density_grid(mp_psd(), 0.5, grid, 1e-5, 100000, 4);
  CHECK(serial.density == parallel.density);
}
