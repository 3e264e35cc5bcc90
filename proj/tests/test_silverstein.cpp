#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "spectrode/quadrature.hpp"
#include "spectrode/silverstein.hpp"

using namespace spectrode;

namespace {

PopulationSpectrum mp_psd() { return validate_psd({{1.0, 1.0}}); }
PopulationSpectrum twopoint_psd() {
  return validate_psd({{1.0, 0.5}, {8.0, 0.5}});
}
PopulationSpectrum boxcar_psd() {
  return validate_psd({}, {{0.5, 1.5, 1.0}});
}

}  // namespace

TEST_CASE("I1 on single atom") {
  CHECK(h_integral_1(mp_psd(), Complex(1.0, 0.0)).real() ==
        doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("I1 on boxcar near v = 0 equals the mean") {
  const Complex v(1e-8, 0.0);
  CHECK(h_integral_1(boxcar_psd(), v).real() ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("I1 on two-point at v = -1/4 (direct rational arithmetic)") {
  const Complex r = h_integral_1(twopoint_psd(), Complex(-0.25, 0.0));
  // 0.5*1/(1-0.25) + 0.5*8/(1-2) = 2/3 - 4
  CHECK(r.real() == doctest::Approx(2.0 / 3.0 - 4.0).epsilon(1e-14));
  CHECK(r.imag() == doctest::Approx(0.0));
}

TEST_CASE("I2 on single atom") {
  CHECK(h_integral_2(mp_psd(), Complex(1.0, 0.0)).real() ==
        doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("I2 on boxcar near v = 0 equals the second moment") {
  CHECK(h_integral_2(boxcar_psd(), Complex(1e-8, 0.0)).real() ==
        doctest::Approx(13.0 / 12.0).epsilon(1e-6));
}

TEST_CASE("I2 on two-point at v = -1/4") {
  const Complex r = h_integral_2(twopoint_psd(), Complex(-0.25, 0.0));
  // 0.5/(0.75)^2 + 0.5*64
  CHECK(r.real() == doctest::Approx(8.0 / 9.0 + 32.0).epsilon(1e-14));
}

TEST_CASE("z(v) hits the MP edges at the closed-form preimages") {
  const auto psd = mp_psd();
  const double s = std::sqrt(0.5);
  const double v_upper = 1.0 / (-s - 1.0);  // -0.58579
  const double v_lower = 1.0 / (s - 1.0);   // -3.41421
  CHECK(z_of_v(psd, 0.5, Complex(v_upper, 0.0)).real() ==
        doctest::Approx((1.0 + s) * (1.0 + s)).epsilon(1e-12));
  CHECK(z_of_v(psd, 0.5, Complex(v_lower, 0.0)).real() ==
        doctest::Approx((1.0 - s) * (1.0 - s)).epsilon(1e-12));
}

TEST_CASE("z(v) < 0 for positive real v") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto psds = {mp_psd(), twopoint_psd(), boxcar_psd()};
  for (const auto& psd : psds) {
    for (int i = 0; i < 50; ++i) {
      const double v = 1e-3 + unit(rng) * 50.0;
      const double gamma = 0.05 + 0.9 * unit(rng);
      CHECK(z_of_v(psd, gamma, Complex(v, 0.0)).real() < 0.0);
    }
  }
}

TEST_CASE("z'(v) frozen values for MP") {
  const auto psd = mp_psd();
  // inside the spectrum preimage
  CHECK(z_prime(psd, 0.5, Complex(-1.5, 0.0)).real() ==
        doctest::Approx(1.0 / 2.25 - 2.0).epsilon(1e-14));
  // left of the lower-edge preimage
  CHECK(z_prime(psd, 0.5, Complex(-10.0, 0.0)).real() ==
        doctest::Approx(0.01 - 0.5 / 81.0).epsilon(1e-12));
  // the edge is a critical point
  const double v_upper = 1.0 / (-std::sqrt(0.5) - 1.0);
  CHECK(std::abs(z_prime(psd, 0.5, Complex(v_upper, 0.0))) < 1e-12);
}

TEST_CASE("silverstein residual: closed-form MP solution") {
  const auto psd = mp_psd();
  const double gamma = 0.5;
  // v(z) from z v^2 + (z + 1 - gamma) v + 1 = 0, root with Imag > 0
  const Complex z(1.3, 1e-3);
  const Complex disc = std::sqrt((z + 1.0 - gamma) * (z + 1.0 - gamma) -
                                 4.0 * z);
  Complex v = (-(z + 1.0 - gamma) + disc) / (2.0 * z);
  if (v.imag() < 0.0) v = (-(z + 1.0 - gamma) - disc) / (2.0 * z);
  CHECK(silverstein_residual(psd, gamma, z, v) < 1e-12);
}

TEST_CASE("silverstein residual: gamma to 0 makes v = -1/z exact") {
  const Complex z(2.0, 0.5);
  const double r = silverstein_residual(mp_psd(), 1e-12, z, -1.0 / z);
  CHECK(r < 1e-11);
}

TEST_CASE("silverstein residual: mismatched pair detected") {
  CHECK(silverstein_residual(mp_psd(), 0.5, Complex(1.0, 0.1),
                             Complex(-0.3, 0.8)) > 1e-3);
}

TEST_CASE("property: conjugation symmetry of I1, I2, z") {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto psds = {mp_psd(), twopoint_psd(), boxcar_psd()};
  for (const auto& psd : psds) {
    for (int i = 0; i < 60; ++i) {
      const Complex v(unit(rng) * 4.0 - 2.0, 0.05 + unit(rng) * 3.0);
      const double gamma = 0.05 + 2.0 * unit(rng);
      if (std::abs(gamma - 1.0) < 0.01) continue;
      const Complex a = z_of_v(psd, gamma, std::conj(v));
      const Complex b = std::conj(z_of_v(psd, gamma, v));
      CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b)));
      CHECK(std::abs(h_integral_1(psd, std::conj(v)) -
                     std::conj(h_integral_1(psd, v))) < 1e-12);
      CHECK(std::abs(h_integral_2(psd, std::conj(v)) -
                     std::conj(h_integral_2(psd, v))) < 1e-12);
    }
  }
}

TEST_CASE("property: uniform closed forms match adaptive quadrature") {
  const UniformComponent u{0.5, 1.5, 1.0};
  const auto psd = validate_psd({}, {u});
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int tested = 0;
  while (tested < 100) {
    const Complex v(unit(rng) * 6.0 - 3.0, unit(rng) * 4.0 - 2.0);
    if (std::abs(1.0 + u.a * v) <= 0.1 || std::abs(1.0 + u.b * v) <= 0.1)
      continue;
    // keep away from the real segment where the integrand has a pole
    if (std::abs(v.imag()) < 1e-3 && v.real() < -1.0 / u.b + 0.2 &&
        v.real() > -1.0 / u.a - 0.2)
      continue;
    ++tested;
    const Complex i1 = adaptive_simpson(
        [&](double t) { return Complex(t) / (1.0 + t * v); }, u.a, u.b,
        1e-13);
    const Complex i2 = adaptive_simpson(
        [&](double t) {
          const Complex d = 1.0 + t * v;
          return Complex(t * t) / (d * d);
        },
        u.a, u.b, 1e-13);
    CHECK(std::abs(h_integral_1(psd, v) - i1) < 1e-10);
    CHECK(std::abs(h_integral_2(psd, v) - i2) < 1e-10);
  }
}

TEST_CASE("property: narrow uniform matches a point mass") {
  const double mid = 2.0, half = 0.5e-9;
  const auto narrow = validate_psd({}, {{mid - half, mid + half, 1.0}});
  const auto atom = validate_psd({{mid, 1.0}});
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    const Complex v(unit(rng) * 4.0 - 2.0, 0.1 + unit(rng) * 2.0);
    CHECK(std::abs(h_integral_1(narrow, v) - h_integral_1(atom, v)) < 1e-6);
    CHECK(std::abs(h_integral_2(narrow, v) - h_integral_2(atom, v)) < 1e-6);
  }
}

TEST_CASE("property: z' matches a central finite difference of z") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto psds = {mp_psd(), twopoint_psd(), boxcar_psd()};
  const double step = 1e-6;
  for (const auto& psd : psds) {
    for (int i = 0; i < 60; ++i) {
      const Complex v(unit(rng) * 6.0 - 3.0, 0.2 + unit(rng) * 2.0);
      const double gamma = 0.1 + unit(rng) * 0.8;
      const Complex fd = (z_of_v(psd, gamma, v + step) -
                          z_of_v(psd, gamma, v - step)) /
                         (2.0 * step);
      const Complex an = z_prime(psd, gamma, v);
      CHECK(std::abs(fd - an) <= 1e-4 * (1.0 + std::abs(an)));
    }
  }
}

TEST_CASE("pole and zero-v guards") {
  const auto psd = mp_psd();
  CHECK_THROWS_AS(h_integral_1(psd, Complex(-1.0, 0.0)), Error);
  CHECK_THROWS_AS(z_of_v(psd, 0.5, Complex(0.0, 0.0)), Error);
  try {
    h_integral_1(psd, Complex(-1.0 + 1e-16, 0.0));
    FAIL("expected PoleHit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PoleHit);
  }
}
