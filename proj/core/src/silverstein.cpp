#include "spectrode/silverstein.hpp"

#include <cmath>

namespace spectrode {

namespace {

constexpr double kPoleRelTolerance = 1e-14;

void check_atom_poles(const PopulationSpectrum& psd, Complex v) {
  const double scale = kPoleRelTolerance * (1.0 + std::abs(v));
  for (const auto& a : psd.atoms()) {
    if (std::abs(v + 1.0 / a.t) <= scale)
      throw Error(ErrorCode::PoleHit,
                  "v within tolerance of pole -1/" + std::to_string(a.t));
  }
  for (const auto& u : psd.uniforms()) {
    if (std::abs(v + 1.0 / u.a) <= scale || std::abs(v + 1.0 / u.b) <= scale)
      throw Error(ErrorCode::PoleHit,
                  "v within tolerance of a uniform-component pole");
  }
}

// Principal log of (b*v+1)/(a*v+1) with a branch guard: the solver only ever
// evaluates uniforms where the ratio stays off the negative real axis.
Complex log_ratio(const UniformComponent& u, Complex v) {
  const Complex num = u.b * v + 1.0;
  const Complex den = u.a * v + 1.0;
  const Complex ratio = num / den;
  if (ratio.real() <= 0.0 && std::abs(ratio.imag()) <= 1e-14 * std::abs(ratio))
    throw Error(ErrorCode::PoleHit,
                "uniform log-ratio crossed the principal branch cut");
  return std::log(ratio);
}

// m_j = int t^j dU_{a,b} = (b^(j+1) - a^(j+1)) / ((b-a)(j+1)).
double uniform_moment(const UniformComponent& u, int j) {
  return (std::pow(u.b, j + 1) - std::pow(u.a, j + 1)) /
         ((u.b - u.a) * (j + 1));
}

// The closed forms below cancel catastrophically for |v|*b -> 0; switch to
// the geometric series of the integrand there.
bool use_series(const UniformComponent& u, Complex v) {
  return std::abs(v) * std::max(std::abs(u.a), std::abs(u.b)) < 0.05;
}

// A component much narrower than its distance to the pole loses digits in
// the log-ratio difference; a midpoint expansion of the integrand is exact
// to O((b-a)^4) there.
bool use_midpoint(const UniformComponent& u, Complex v) {
  const double mid = 0.5 * (u.a + u.b);
  return std::abs(v) * (u.b - u.a) <= 1e-4 * std::abs(1.0 + mid * v);
}

Complex uniform_i1(const UniformComponent& u, Complex v) {
  if (use_series(u, v)) {
    Complex sum = 0.0, pw = 1.0;
    for (int k = 0; k < 24; ++k) {
      sum += pw * uniform_moment(u, k + 1);
      pw *= -v;
    }
    return sum;
  }
  if (use_midpoint(u, v)) {
    const double m = 0.5 * (u.a + u.b);
    const Complex d = 1.0 + m * v;
    const double len2 = (u.b - u.a) * (u.b - u.a);
    return m / d + (-2.0 * v / (d * d * d)) * len2 / 24.0;
  }
  return 1.0 / v - log_ratio(u, v) / ((u.b - u.a) * v * v);
}

Complex uniform_i2(const UniformComponent& u, Complex v) {
  if (use_series(u, v)) {
    Complex sum = 0.0, pw = 1.0;
    for (int k = 0; k < 24; ++k) {
      sum += (k + 1.0) * pw * uniform_moment(u, k + 2);
      pw *= -v;
    }
    return sum;
  }
  if (use_midpoint(u, v)) {
    const double m = 0.5 * (u.a + u.b);
    const Complex d = 1.0 + m * v;
    const Complex d2 = d * d, d3 = d2 * d, d4 = d2 * d2;
    const double len2 = (u.b - u.a) * (u.b - u.a);
    const Complex second =
        2.0 / d2 - 8.0 * v * m / d3 + 6.0 * v * v * m * m / d4;
    return m * m / d2 + second * len2 / 24.0;
  }
  const Complex lr = log_ratio(u, v);
  const Complex tail =
      2.0 * lr + 1.0 / (u.b * v + 1.0) - 1.0 / (u.a * v + 1.0);
  return 1.0 / (v * v) - tail / ((u.b - u.a) * v * v * v);
}

void check_nonzero_v(Complex v) {
  if (std::abs(v) < 1e-200)
    throw Error(ErrorCode::ZeroV, "v = 0 is outside the domain of z(v)");
}

}  // namespace

Complex m_from_v(double gamma, Complex z, Complex v) {
  return v / gamma + (1.0 / gamma - 1.0) / z;
}

Complex h_integral_1(const PopulationSpectrum& psd, Complex v) {
  check_atom_poles(psd, v);
  Complex sum = 0.0;
  for (const auto& a : psd.atoms()) sum += a.w * a.t / (1.0 + a.t * v);
  for (const auto& u : psd.uniforms()) sum += u.w * uniform_i1(u, v);
  return sum;
}

Complex h_integral_2(const PopulationSpectrum& psd, Complex v) {
  check_atom_poles(psd, v);
  Complex sum = 0.0;
  for (const auto& a : psd.atoms()) {
    const Complex d = 1.0 + a.t * v;
    sum += a.w * a.t * a.t / (d * d);
  }
  for (const auto& u : psd.uniforms()) sum += u.w * uniform_i2(u, v);
  return sum;
}

Complex z_of_v(const PopulationSpectrum& psd, double gamma, Complex v) {
  check_nonzero_v(v);
  return -1.0 / v + gamma * h_integral_1(psd, v);
}

Complex z_prime(const PopulationSpectrum& psd, double gamma, Complex v) {
  check_nonzero_v(v);
  return 1.0 / (v * v) - gamma * h_integral_2(psd, v);
}

double silverstein_residual(const PopulationSpectrum& psd, double gamma,
                            Complex z, Complex v) {
  check_nonzero_v(v);
  return std::abs(1.0 / v + z - gamma * h_integral_1(psd, v));
}

double leftmost_pole(const PopulationSpectrum& psd) {
  return -1.0 / psd.min_support();
}

}  // namespace spectrode
