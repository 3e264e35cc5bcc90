#include "spectrode/support.hpp"

#include <algorithm>
#include <cmath>

#include "spectrode/parallel.hpp"

namespace spectrode {

namespace {

constexpr int kMaxDoublings = 60;

bool zp_negative(const PopulationSpectrum& psd, double gamma, double v) {
  // z' = 0 exactly on a grid point counts as nonnegative (increasing);
  // the neighboring point on the next refinement resolves the tie.
  return z_prime(psd, gamma, Complex(v, 0.0)).real() < 0.0;
}

// v-intervals on which z(v) is undefined: point barriers -1/t for atoms,
// interval barriers [-1/a, -1/b] for uniform components. Merged and sorted.
std::vector<std::pair<double, double>> pole_barriers(
    const PopulationSpectrum& psd) {
  std::vector<std::pair<double, double>> bars;
  for (const auto& a : psd.atoms()) bars.emplace_back(-1.0 / a.t, -1.0 / a.t);
  for (const auto& u : psd.uniforms())
    bars.emplace_back(-1.0 / u.a, -1.0 / u.b);
  std::sort(bars.begin(), bars.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& b : bars) {
    if (!merged.empty() && b.first <= merged.back().second)
      merged.back().second = std::max(merged.back().second, b.second);
    else
      merged.push_back(b);
  }
  return merged;
}

double pole_inset(double v) { return 1e-12 * (1.0 + std::abs(v)); }

// Linear sign scan of z' over [lo, hi]; records maximal runs of nonnegative
// z' between verified grid points. A final run persisting to the scan end is
// flagged `open_right` (the (c, 0) interval next to the origin).
std::vector<IncreasingInterval> scan_subinterval(const PopulationSpectrum& psd,
                                                 double gamma, double lo,
                                                 double hi, double h,
                                                 bool open_right) {
  std::vector<IncreasingInterval> found;
  const double len = hi - lo;
  if (!(len > 0.0)) return found;
  // Very narrow sub-intervals must still detect a monotonicity flip.
  std::size_t n = static_cast<std::size_t>(std::ceil(len / h)) + 16;
  n = std::max<std::size_t>(n, 64);

  bool prev_neg = true;
  bool have_run = false;
  double run_start = 0.0;
  double prev_v = lo;
  for (std::size_t i = 0; i <= n; ++i) {
    const double v = lo + len * static_cast<double>(i) / static_cast<double>(n);
    const bool neg = zp_negative(psd, gamma, v);
    if (prev_neg && !neg) {
      run_start = v;
      have_run = true;
    } else if (!prev_neg && neg && have_run) {
      found.push_back({run_start, prev_v, false});
      have_run = false;
    }
    prev_neg = neg;
    prev_v = v;
  }
  if (have_run && !prev_neg) found.push_back({run_start, hi, open_right});
  return found;
}

// Bisect the single +/- transition of z' on the conceptual equi-spaced grid
// u(i) = lo + i*spacing, i in [0, n-1], given z'(u(0)) >= 0, z'(u(n-1)) < 0.
// Indices kept as doubles: only O(log n) points are ever evaluated.
std::pair<double, double> bisect_transition(const PopulationSpectrum& psd,
                                            double gamma, double lo,
                                            double spacing,
                                            double n_minus_1) {
  double ilo = 0.0, ihi = n_minus_1;
  while (ihi - ilo > 1.0) {
    const double mid = std::floor(0.5 * (ilo + ihi));
    if (zp_negative(psd, gamma, lo + mid * spacing))
      ihi = mid;
    else
      ilo = mid;
  }
  return {lo + ilo * spacing, lo + ihi * spacing};
}

struct LeftmostEdge {
  double first_negative = 0.0;  // b_hat
  double last_positive = 0.0;
  double grid_lo = 0.0;  // verified z' > 0
  double l1 = 0.0;
};

LeftmostEdge leftmost_edge_impl(const PopulationSpectrum& psd, double gamma,
                                double epsilon) {
  const double D = leftmost_pole(psd);
  double width = 1.0;
  double inset = epsilon;
  double points = std::max(std::floor(1.0 / epsilon), 4.0);

  for (int k = 0; k < kMaxDoublings; ++k) {
    const double lo = D - width;
    const double hi = D - inset;
    // Sign structure on (-inf, D): one + run then one - run. The endpoints
    // decide whether the transition is bracketed by this grid.
    if (!zp_negative(psd, gamma, lo) && zp_negative(psd, gamma, hi)) {
      const double spacing = (hi - lo) / (points - 1.0);
      auto [last_pos, first_neg] =
          bisect_transition(psd, gamma, lo, spacing, points - 1.0);
      LeftmostEdge edge;
      edge.first_negative = first_neg;
      edge.last_positive = last_pos;
      edge.grid_lo = lo;
      edge.l1 = z_of_v(psd, gamma, Complex(first_neg, 0.0)).real();
      if (edge.l1 < 0.0) edge.l1 = 0.0;
      return edge;
    }
    width *= 2.0;
    inset *= 0.5;
    points *= 2.0;
  }
  throw Error(ErrorCode::NoSignChange,
              "no monotonicity switch left of the spectrum poles");
}

// gamma > 1: z' switches + -> - exactly once on (0, inf); z(b+) is the
// lowest support endpoint. Bracket by doubling, then bisect.
LeftmostEdge positive_axis_edge(const PopulationSpectrum& psd, double gamma,
                                double epsilon) {
  double vlo = epsilon * 1e-3;
  for (int k = 0; k < 8 && zp_negative(psd, gamma, vlo); ++k) vlo *= 0.1;
  if (zp_negative(psd, gamma, vlo))
    throw Error(ErrorCode::NoSignChange,
                "z' not increasing next to v = 0+ (gamma > 1 scan)");
  double vhi = std::max(1.0, 2.0 * std::abs(leftmost_pole(psd)));
  int k = 0;
  for (; k < kMaxDoublings && !zp_negative(psd, gamma, vhi); ++k) vhi *= 2.0;
  if (k == kMaxDoublings)
    throw Error(ErrorCode::NoSignChange,
                "no monotonicity switch on the positive axis");

  const double points = std::max(std::floor(1.0 / epsilon), 4.0);
  const double spacing = (vhi - vlo) / (points - 1.0);
  auto [last_pos, first_neg] =
      bisect_transition(psd, gamma, vlo, spacing, points - 1.0);
  LeftmostEdge edge;
  edge.first_negative = first_neg;
  edge.last_positive = last_pos;
  edge.grid_lo = vlo;
  edge.l1 = z_of_v(psd, gamma, Complex(last_pos, 0.0)).real();
  if (edge.l1 < 0.0) edge.l1 = 0.0;
  return edge;
}

}  // namespace

std::pair<double, double> find_leftmost_edge(const PopulationSpectrum& psd,
                                             double gamma, double epsilon) {
  validate_gamma(gamma);
  if (gamma > 1.0)
    throw Error(ErrorCode::InvalidArgument,
                "leftmost-edge scan applies to gamma < 1");
  if (!(epsilon > 0.0))
    throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  const LeftmostEdge edge = leftmost_edge_impl(psd, gamma, epsilon);
  return {edge.first_negative, edge.l1};
}

SupportReport find_support(const PopulationSpectrum& psd, double gamma,
                           double epsilon) {
  validate_gamma(gamma);
  if (!(epsilon > 0.0))
    throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");

  const auto barriers = pole_barriers(psd);
  const double v_end = -epsilon * 1e-3;
  const double h = std::sqrt(epsilon);

  // Scan ranges between consecutive barriers, endpoints perturbed inward.
  std::vector<std::pair<double, double>> ranges;
  for (std::size_t i = 0; i + 1 < barriers.size(); ++i) {
    const double lo = barriers[i].second;
    const double hi = barriers[i + 1].first;
    ranges.emplace_back(lo + pole_inset(lo), hi - pole_inset(hi));
  }
  const double last_lo = barriers.back().second;
  ranges.emplace_back(last_lo + pole_inset(last_lo), v_end);

  std::vector<std::vector<IncreasingInterval>> per_range(ranges.size());
  parallel_for(ranges.size(), [&](std::size_t i) {
    const bool is_last = (i + 1 == ranges.size());
    per_range[i] = scan_subinterval(psd, gamma, ranges[i].first,
                                    ranges[i].second, h, is_last);
  });

  std::vector<IncreasingInterval> interior;
  for (auto& found : per_range)
    interior.insert(interior.end(), found.begin(), found.end());

  if (interior.empty() || !interior.back().reaches_zero)
    throw Error(ErrorCode::InternalConsistency,
                "scan did not find the terminal increasing interval");

  SupportReport report;
  const auto z_at = [&](double v) {
    return z_of_v(psd, gamma, Complex(v, 0.0)).real();
  };

  if (gamma < 1.0) {
    const LeftmostEdge left = leftmost_edge_impl(psd, gamma, epsilon);
    report.increasing_intervals.push_back(
        {left.grid_lo, left.last_positive, false});
    report.increasing_intervals.insert(report.increasing_intervals.end(),
                                       interior.begin(), interior.end());

    double lower = left.l1;
    for (std::size_t k = 0; k < interior.size(); ++k) {
      const double upper = z_at(interior[k].a);
      report.endpoints.push_back({lower, upper});
      if (!interior[k].reaches_zero) lower = z_at(interior[k].b);
    }
  } else {
    const LeftmostEdge pos = positive_axis_edge(psd, gamma, epsilon);

    double lower = pos.l1;
    for (std::size_t k = 0; k < interior.size(); ++k) {
      const double upper = z_at(interior[k].a);
      report.endpoints.push_back({lower, upper});
      if (!interior[k].reaches_zero) lower = z_at(interior[k].b);
    }
    report.increasing_intervals = interior;
    report.increasing_intervals.push_back(
        {pos.grid_lo, pos.last_positive, false});
  }

  for (std::size_t k = 0; k < report.endpoints.size(); ++k) {
    const auto& e = report.endpoints[k];
    const bool ordered =
        e.lower >= 0.0 && e.lower < e.upper &&
        (k == 0 || report.endpoints[k - 1].upper < e.lower);
    if (!ordered)
      throw Error(ErrorCode::InternalConsistency,
                  "support endpoints are not strictly interleaved");
  }
  return report;
}

}  // namespace spectrode
