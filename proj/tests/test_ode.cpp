#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "spectrode/ode.hpp"

using namespace spectrode;
using C = std::complex<double>;

TEST_CASE("exponential growth, forward and dense output") {
  OdeOptions opt;
  opt.abs_tol = opt.rel_tol = 1e-10;
  const auto sol = dopri5_integrate([](double, C y) { return y; }, 0.0, 2.0,
                                    C(1.0, 0.5), opt);
  const C expected = C(1.0, 0.5) * std::exp(2.0);
  CHECK(std::abs(sol.y_end - expected) < 1e-8 * std::abs(expected));
  for (double x = 0.0; x <= 2.0; x += 0.079) {
    const C dense = sol.eval(x);
    const C exact = C(1.0, 0.5) * std::exp(x);
    CHECK(std::abs(dense - exact) < 1e-8 * std::abs(exact));
  }
}

TEST_CASE("Riccati y' = y^2 with complex state") {
  // y(x) = -1/(x + c), c = -1/y0
  const C y0(0.2, 0.7);
  const C c = -1.0 / y0;
  OdeOptions opt;
  opt.abs_tol = opt.rel_tol = 1e-11;
  const auto sol =
      dopri5_integrate([](double, C y) { return y * y; }, 0.0, 1.5, y0, opt);
  const C expected = -1.0 / (1.5 + c);
  CHECK(std::abs(sol.y_end - expected) < 1e-9);
  for (double x = 0.1; x < 1.5; x += 0.0831) {
    CHECK(std::abs(sol.eval(x) - (-1.0 / (x + c))) < 1e-9);
  }
}

TEST_CASE("backward integration") {
  OdeOptions opt;
  opt.abs_tol = opt.rel_tol = 1e-10;
  const auto sol = dopri5_integrate(
      [](double x, C) { return C(std::cos(x), 0.0); }, 1.0, -2.0,
      C(std::sin(1.0), 0.0), opt);
  CHECK(std::abs(sol.y_end - C(std::sin(-2.0), 0.0)) < 1e-9);
  for (double x = -2.0; x <= 1.0; x += 0.137) {
    CHECK(std::abs(sol.eval(x) - C(std::sin(x), 0.0)) < 1e-9);
  }
}

TEST_CASE("dense output endpoints are exact") {
  OdeOptions opt;
  opt.abs_tol = opt.rel_tol = 1e-9;
  const auto sol = dopri5_integrate(
      [](double, C y) { return C(0.0, 1.0) * y; }, 0.0, 3.0, C(1.0, 0.0),
      opt);
  const auto& first = sol.segments.front();
  const auto& last = sol.segments.back();
  CHECK(std::abs(first.eval(first.x_begin) - C(1.0, 0.0)) < 1e-14);
  CHECK(std::abs(last.eval(last.x_end) - sol.y_end) < 1e-14);
}

TEST_CASE("RHS exceptions carry through") {
  OdeOptions opt;
  CHECK_THROWS_AS(dopri5_integrate(
                      [](double x, C y) -> C {
                        if (x > 0.5)
                          throw Error(ErrorCode::CriticalPoint, "test", x);
                        return y;
                      },
                      0.0, 1.0, C(1.0, 0.0), opt),
                  Error);
}
