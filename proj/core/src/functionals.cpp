#include "spectrode/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "spectrode/fpa.hpp"
#include "spectrode/ode.hpp"
#include "spectrode/quadrature.hpp"
#include "spectrode/rootfind.hpp"

namespace spectrode {

double esd_moment(const SpectralDensity& esd,
                  const std::function<double(double)>& h) {
  double sum = 0.0;
  if (esd.zero_mass > 0.0) {
    const double h0 = h(0.0);
    if (!std::isfinite(h0))
      throw Error(ErrorCode::NonFiniteH, "h(0) must be finite with zero mass");
    sum += esd.zero_mass * h0;
  }
  for (const auto& iv : esd.intervals) {
    std::vector<double> hv(iv.grid.size());
    for (std::size_t j = 0; j < iv.grid.size(); ++j) {
      hv[j] = h(iv.grid[j]);
      if (!std::isfinite(hv[j]))
        throw Error(ErrorCode::NonFiniteH, "h returned a non-finite value",
                    iv.grid[j]);
    }
    for (std::size_t j = 0; j + 1 < iv.grid.size(); ++j) {
      sum += 0.5 * (hv[j] * iv.values[j] + hv[j + 1] * iv.values[j + 1]) *
             (iv.grid[j + 1] - iv.grid[j]);
    }
  }
  return sum;
}

double esd_quantile(const SpectralDensity& esd, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw Error(ErrorCode::InvalidArgument, "p must lie in (0, 1)");
  double cum = esd.zero_mass;
  if (p <= cum) return 0.0;
  for (const auto& iv : esd.intervals) {
    for (std::size_t j = 0; j + 1 < iv.grid.size(); ++j) {
      const double dx = iv.grid[j + 1] - iv.grid[j];
      const double cell = 0.5 * (iv.values[j] + iv.values[j + 1]) * dx;
      if (cum + cell >= p && cell > 0.0) {
        const double alpha = (p - cum) / cell;
        return iv.grid[j] + alpha * dx;
      }
      cum += cell;
    }
  }
  return esd.intervals.empty() ? 0.0 : esd.intervals.back().upper;
}

double esd_mode(const SpectralDensity& esd) {
  if (esd.intervals.empty())
    throw Error(ErrorCode::InvalidArgument, "esd has no intervals");
  double best_x = esd.intervals.front().grid.front();
  double best_f = -1.0;
  for (const auto& iv : esd.intervals) {
    for (std::size_t j = 0; j < iv.grid.size(); ++j) {
      if (iv.values[j] > best_f) {
        best_f = iv.values[j];
        best_x = iv.grid[j];
      }
    }
  }
  return best_x;
}

ContourSpec ContourSpec::circle(Complex center, double radius) {
  if (!(radius > 0.0))
    throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  ContourSpec spec;
  // Clockwise: conjugate of the standard counterclockwise parametrization.
  spec.c = [center, radius](double t) {
    return center + radius * std::exp(Complex(0.0, -2.0 * std::numbers::pi * t));
  };
  spec.c_prime = [center, radius](double t) {
    return Complex(0.0, -2.0 * std::numbers::pi) * radius *
           std::exp(Complex(0.0, -2.0 * std::numbers::pi * t));
  };
  spec.kind = "circle";
  spec.crosses_real_axis = true;
  return spec;
}

ContourSpec ContourSpec::from_functions(std::function<Complex(double)> c,
                                        std::function<Complex(double)> c_prime,
                                        bool crosses_real_axis,
                                        std::string kind) {
  ContourSpec spec;
  spec.c = std::move(c);
  spec.c_prime = std::move(c_prime);
  spec.crosses_real_axis = crosses_real_axis;
  spec.kind = std::move(kind);
  const Complex z0 = spec.c(0.0), z1 = spec.c(1.0);
  if (std::abs(z0 - z1) > 1e-12 * (1.0 + std::abs(z0)))
    throw Error(ErrorCode::InvalidArgument, "contour is not closed");
  return spec;
}

namespace {

// PSD integrals in reciprocal coordinates w = 1/v. These stay regular where
// |v| blows up (the contour passes the point mass of the companion law at
// z = 0), which is why the contour ODE is integrated in w throughout:
//   K1(w) = int t dH/(w+t),   w*K1 = I1(1/w)
//   K2(w) = int t^2 dH/(w+t)^2,   Q(w) = 1 - gamma*K2(w) = v^2 z'(v)
//   K3(w) = int t^2 dH/(w+t)^3  (the cubic-denominator integral of the
//           CLT mean; closed form for atoms, adaptive quadrature for
//           uniform components)
Complex log_ratio_w(double a, double b, Complex w) {
  const Complex ratio = (w + b) / (w + a);
  if (ratio.real() <= 0.0 && std::abs(ratio.imag()) <= 1e-14 * std::abs(ratio))
    throw Error(ErrorCode::PoleHit, "contour log-ratio hit the branch cut");
  return std::log(ratio);
}

Complex k1_integral(const PopulationSpectrum& psd, Complex w) {
  Complex sum = 0.0;
  for (const auto& a : psd.atoms()) sum += a.w * a.t / (w + a.t);
  for (const auto& u : psd.uniforms())
    sum += u.w * (1.0 - w * log_ratio_w(u.a, u.b, w) / (u.b - u.a));
  return sum;
}

Complex k2_integral(const PopulationSpectrum& psd, Complex w) {
  Complex sum = 0.0;
  for (const auto& a : psd.atoms()) {
    const Complex d = w + a.t;
    sum += a.w * a.t * a.t / (d * d);
  }
  for (const auto& u : psd.uniforms()) {
    const Complex tail = 2.0 * w * log_ratio_w(u.a, u.b, w) +
                         w * w * (1.0 / (w + u.b) - 1.0 / (w + u.a));
    sum += u.w * (1.0 - tail / (u.b - u.a));
  }
  return sum;
}

Complex k3_integral(const PopulationSpectrum& psd, Complex w) {
  Complex sum = 0.0;
  for (const auto& a : psd.atoms()) {
    const Complex d = w + a.t;
    sum += a.w * a.t * a.t / (d * d * d);
  }
  for (const auto& u : psd.uniforms()) {
    const Complex integral = adaptive_simpson(
        [&](double t) {
          const Complex d = w + t;
          return Complex(t * t) / (d * d * d);
        },
        u.a, u.b, 1e-12);
    sum += u.w * integral / (u.b - u.a);
  }
  return sum;
}

Complex q_denominator(const PopulationSpectrum& psd, double gamma, Complex w) {
  return 1.0 - gamma * k2_integral(psd, w);
}

double silverstein_residual_w(const PopulationSpectrum& psd, double gamma,
                              Complex z, Complex w) {
  return std::abs(w + z - gamma * w * k1_integral(psd, w));
}

// Start value v(c(0)). Off the real axis the fixed-point solver applies
// (reflected through v(conj z) = conj v(z) below it); on the axis, z(v) is
// inverted by bisection on the increasing interval whose image brackets z0.
Complex start_v(const PopulationSpectrum& psd, double gamma, Complex z0,
                const Precision& precision) {
  const double axis_tol = 1e-12 * (1.0 + std::abs(z0));
  if (std::abs(z0.imag()) > axis_tol) {
    const bool lower = z0.imag() < 0.0;
    const Complex target = lower ? std::conj(z0) : z0;
    const FpaResult fp = fpa_solve(psd, gamma, target, precision.eta);
    if (!fp.converged)
      throw Error(ErrorCode::StartFailure,
                  "fixed-point start failed at the contour origin");
    return lower ? std::conj(fp.sample.v) : fp.sample.v;
  }

  const double x0 = z0.real();
  const SupportReport support = find_support(psd, gamma, precision.epsilon);
  const auto z_at = [&](double v) {
    return z_of_v(psd, gamma, Complex(v, 0.0)).real();
  };
  for (const auto& inc : support.increasing_intervals) {
    double lo = inc.a;
    double hi = inc.reaches_zero ? -1e-13 : inc.b;
    double zlo = z_at(lo), zhi = z_at(hi);
    if (x0 < zlo || x0 > zhi) continue;
    const double v = bisect_increasing(z_at, lo, hi, x0,
                                       1e-15 * (1.0 + std::abs(lo)));
    return Complex(v, 0.0);
  }
  // Left of the whole support (gamma < 1): z((-inf, b)) = (0, l1).
  if (gamma < 1.0 && !support.increasing_intervals.empty()) {
    double hi = support.increasing_intervals.front().b;
    double lo = hi - 1.0;
    for (int k = 0; k < 200 && z_at(lo) > x0; ++k) {
      lo = hi - (hi - lo) * 2.0;
    }
    if (z_at(lo) <= x0) {
      const double v = bisect_increasing(z_at, lo, hi, x0,
                                         1e-15 * (1.0 + std::abs(lo)));
      return Complex(v, 0.0);
    }
  }
  throw Error(ErrorCode::StartFailure,
              "no increasing interval of z(v) brackets the contour origin",
              x0);
}

struct ContourTrace {
  OdeSolution w_path;  // w(t) over [0, 1]
};

ContourTrace solve_contour_ode(const PopulationSpectrum& psd, double gamma,
                               const ContourSpec& contour,
                               const Precision& precision) {
  const Complex v0 = start_v(psd, gamma, contour.c(0.0), precision);
  const Complex w0 = 1.0 / v0;

  auto rhs = [&](double t, Complex w) -> Complex {
    const Complex q = q_denominator(psd, gamma, w);
    if (std::abs(q) <= 1e-13)
      throw Error(ErrorCode::ContourTouchesSupport,
                  "contour ODE hit a critical point", t);
    return -contour.c_prime(t) / q;
  };

  OdeOptions opt;
  opt.abs_tol = opt.rel_tol = precision.epsilon * 1e-2;
  opt.max_step = 0.05;  // the curve parametrization sets the scale

  ContourTrace trace;
  trace.w_path = dopri5_integrate(rhs, 0.0, 1.0, w0, opt);

  for (const auto& seg : trace.w_path.segments) {
    const double t = seg.x_end;
    const double res = silverstein_residual_w(psd, gamma, contour.c(t),
                                              seg.eval(t));
    const double scale = 1.0 + std::abs(contour.c(t));
    if (res > 1e-6 * scale)
      throw Error(ErrorCode::ContourTouchesSupport,
                  "Silverstein residual blew up along the contour", t);
  }
  return trace;
}

Complex integrate_contour(const PopulationSpectrum& psd, double gamma,
                          const ContourSpec& contour,
                          const std::function<Complex(Complex, Complex)>& Gw,
                          const Precision& precision) {
  const ContourTrace trace = solve_contour_ode(psd, gamma, contour, precision);
  const double tol = precision.epsilon * 1e-1;

  auto integrand = [&](double t) -> Complex {
    const Complex w = trace.w_path.eval(t);
    const Complex value = Gw(contour.c(t), w) * contour.c_prime(t);
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
      throw Error(ErrorCode::NonFiniteH,
                  "contour integrand returned a non-finite value", t);
    return value;
  };

  // Panels on the ODE's accepted steps, each refined adaptively.
  Complex total = 0.0;
  const auto& segs = trace.w_path.segments;
  for (const auto& seg : segs) {
    const double width = seg.x_end - seg.x_begin;
    if (width <= 0.0) continue;
    total += adaptive_gauss_legendre(integrand, seg.x_begin, seg.x_end,
                                     tol * width);
  }
  return total;
}

}  // namespace

Complex contour_stieltjes(const PopulationSpectrum& psd, double gamma,
                          const ContourSpec& contour,
                          const std::function<Complex(Complex, Complex)>& G,
                          const Precision& precision) {
  validate_gamma(gamma);
  return integrate_contour(
      psd, gamma, contour,
      [&](Complex z, Complex w) { return G(z, 1.0 / w); }, precision);
}

CltMeanResult clt_mean(const PopulationSpectrum& psd, double gamma,
                       const std::function<Complex(Complex)>& g,
                       const Precision& precision, const ContourSpec* contour,
                       double radius_scale) {
  validate_gamma(gamma);

  ContourSpec circle_default;
  if (contour == nullptr) {
    const SupportReport support = find_support(psd, gamma, precision.epsilon);
    const double a = radius_scale * support.endpoints.back().upper;
    circle_default = ContourSpec::circle(Complex(a / 2.0, 0.0), a / 2.0);
    contour = &circle_default;
  }

  auto Gw = [&](Complex z, Complex w) -> Complex {
    const Complex q = q_denominator(psd, gamma, w);
    return g(z) * gamma * k3_integral(psd, w) / (q * q);
  };

  const Complex integral =
      integrate_contour(psd, gamma, *contour, Gw, precision);
  const Complex j = -integral / Complex(0.0, 2.0 * std::numbers::pi);

  CltMeanResult result;
  result.value = j.real();
  result.imag_residual = std::abs(j.imag());
  if (result.imag_residual > 100.0 * precision.epsilon * 1e-1 &&
      result.imag_residual > 1e-10)
    throw Error(ErrorCode::ImaginaryResidue,
                "imaginary part exceeds the quadrature tolerance");
  return result;
}

}  // namespace spectrode
