#include "symmcirc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace symmcirc {

MeanStdErr mean_std_error(std::span<const double> values) {
  MeanStdErr out;
  out.count = values.size();
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return out;  // stderr reported as 0 with count 1
  double m2 = 0.0;
  for (double v : values) m2 += (v - out.mean) * (v - out.mean);
  double var = m2 / static_cast<double>(values.size() - 1);
  out.std_error = std::sqrt(var / static_cast<double>(values.size()));
  return out;
}

double s_topo(double s_ab, double s_bc, double s_b, double s_abc) {
  return s_ab + s_bc - s_b - s_abc;
}

namespace {

struct Ols {
  double slope, intercept, slope_err, residual_norm;
};

Ols ols_fit(std::span<const double> u, std::span<const double> y) {
  size_t n = u.size();
  double su = 0, sy = 0, suu = 0, suy = 0;
  for (size_t i = 0; i < n; ++i) {
    su += u[i];
    sy += y[i];
    suu += u[i] * u[i];
    suy += u[i] * y[i];
  }
  double dn = static_cast<double>(n);
  double denom = dn * suu - su * su;
  double slope = (dn * suy - su * sy) / denom;
  double intercept = (sy - slope * su) / dn;
  double ss_res = 0;
  for (size_t i = 0; i < n; ++i) {
    double r = y[i] - slope * u[i] - intercept;
    ss_res += r * r;
  }
  double slope_err = 0.0;
  if (n > 2) {
    double sigma2 = ss_res / static_cast<double>(n - 2);
    slope_err = std::sqrt(dn * sigma2 / denom);
  }
  return {slope, intercept, slope_err, std::sqrt(ss_res)};
}

double chord_log(size_t x, size_t system_size) {
  double l = static_cast<double>(system_size);
  double arg = (l / std::numbers::pi) * std::sin(std::numbers::pi * static_cast<double>(x) / l);
  return std::log2(arg);
}

}  // namespace

FitResult fit_log_profile(std::span<const double> profile, size_t system_size,
                          size_t x_min) {
  if (profile.size() != system_size - 1) {
    throw std::invalid_argument("fit_log_profile: profile must have L-1 cuts");
  }
  size_t lo = x_min, hi = system_size - x_min;  // inclusive cut range
  if (hi < lo || hi - lo + 1 < 8) {
    throw std::invalid_argument("fit_log_profile: window too small (< 8 points)");
  }
  std::vector<double> u, y;
  for (size_t x = lo; x <= hi; ++x) {
    u.push_back(chord_log(x, system_size));
    y.push_back(profile[x - 1]);
  }
  Ols f = ols_fit(u, y);
  return {f.slope, f.intercept, f.slope_err, f.residual_norm, lo, hi};
}

FitResult fit_log_time(std::span<const double> times, std::span<const double> values,
                       double t_lo, double t_hi) {
  if (times.size() != values.size()) {
    throw std::invalid_argument("fit_log_time: size mismatch");
  }
  std::vector<double> u, y;
  size_t lo_idx = times.size(), hi_idx = 0;
  for (size_t i = 0; i < times.size(); ++i) {
    if (times[i] >= t_lo && times[i] <= t_hi) {
      u.push_back(std::log2(times[i]));
      y.push_back(values[i]);
      lo_idx = std::min(lo_idx, i);
      hi_idx = std::max(hi_idx, i);
    }
  }
  if (u.size() < 3) {
    throw std::invalid_argument("fit_log_time: window collapse");
  }
  Ols f = ols_fit(u, y);
  return {f.slope, f.intercept, f.slope_err, f.residual_norm, lo_idx, hi_idx};
}

double bootstrap_profile_slope_err(const std::vector<std::vector<double>>& per_trajectory,
                                   size_t system_size, size_t x_min, size_t resamples,
                                   uint64_t seed) {
  size_t n_traj = per_trajectory.size();
  if (n_traj < 2) return 0.0;
  Rng rng(seed);
  std::vector<double> slopes;
  slopes.reserve(resamples);
  std::vector<double> mean(system_size - 1);
  for (size_t r = 0; r < resamples; ++r) {
    std::fill(mean.begin(), mean.end(), 0.0);
    for (size_t k = 0; k < n_traj; ++k) {
      const std::vector<double>& row = per_trajectory[rng.next_below(n_traj)];
      for (size_t i = 0; i < mean.size(); ++i) mean[i] += row[i];
    }
    for (double& m : mean) m /= static_cast<double>(n_traj);
    slopes.push_back(fit_log_profile(mean, system_size, x_min).slope);
  }
  MeanStdErr s = mean_std_error(slopes);
  return s.std_error * std::sqrt(static_cast<double>(resamples));  // stddev
}

namespace {

struct ScaledPoint {
  double x, y, var;
  size_t size_index;
};

// Quality of the collapse at (p_c, nu): inverse-variance weighted mean
// squared deviation from the interpolation of the other sizes' points.
double collapse_quality(const std::vector<EntropyCurve>& curves, double p_c, double nu) {
  std::vector<ScaledPoint> pts;
  for (size_t s = 0; s < curves.size(); ++s) {
    const EntropyCurve& c = curves[s];
    double lpow = std::pow(static_cast<double>(c.system_size), 1.0 / nu);
    for (size_t i = 0; i < c.parameter.size(); ++i) {
      double var = c.std_error[i] * c.std_error[i];
      pts.push_back({(c.parameter[i] - p_c) * lpow, c.mean[i], var, s});
    }
  }
  std::sort(pts.begin(), pts.end(),
            [](const ScaledPoint& a, const ScaledPoint& b) { return a.x < b.x; });

  double wsum = 0.0, qsum = 0.0;
  size_t used = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    // Interpolate from the nearest neighbors belonging to other sizes.
    const ScaledPoint& p = pts[i];
    const ScaledPoint* left = nullptr;
    const ScaledPoint* right = nullptr;
    for (size_t j = i; j-- > 0;) {
      if (pts[j].size_index != p.size_index) {
        left = &pts[j];
        break;
      }
    }
    for (size_t j = i + 1; j < pts.size(); ++j) {
      if (pts[j].size_index != p.size_index) {
        right = &pts[j];
        break;
      }
    }
    if (!left || !right) continue;  // outside the other sizes' support
    double span = right->x - left->x;
    double t = span > 0 ? (p.x - left->x) / span : 0.5;
    double y_hat = left->y + t * (right->y - left->y);
    double var_hat = (1 - t) * (1 - t) * left->var + t * t * right->var;
    double w = 1.0 / std::max(p.var + var_hat, 1e-12);
    qsum += w * (p.y - y_hat) * (p.y - y_hat);
    wsum += w;
    ++used;
  }
  // A candidate where most points fall outside the other sizes' support has
  // too little overlap to be meaningful; reject it outright.
  if (used * 2 < pts.size() || wsum == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return qsum / wsum;
}

double golden_refine_1d(auto f, double lo, double hi, int iters = 40) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::optional<double> curve_crossing(const EntropyCurve& a, const EntropyCurve& b) {
  if (a.parameter != b.parameter) {
    throw std::invalid_argument("curve_crossing: curves must share a grid");
  }
  for (size_t i = 0; i + 1 < a.parameter.size(); ++i) {
    double d0 = a.mean[i] - b.mean[i];
    double d1 = a.mean[i + 1] - b.mean[i + 1];
    if (d0 == 0.0) return a.parameter[i];
    if (d0 * d1 < 0) {
      double t = d0 / (d0 - d1);
      return a.parameter[i] + t * (a.parameter[i + 1] - a.parameter[i]);
    }
  }
  return std::nullopt;
}

CollapseResult scaling_collapse(const std::vector<EntropyCurve>& curves,
                                const CollapseSearch& search) {
  if (curves.size() < 3) {
    throw std::invalid_argument("scaling_collapse: need at least 3 system sizes");
  }
  CollapseSearch s = search;
  if (s.p_c_lo >= s.p_c_hi) {
    // Default window: the shared parameter range. Crossing-based seeding is
    // unreliable (saturated tails produce spurious noise crossings); the grid
    // scan over the full range is cheap.
    s.p_c_lo = curves[0].parameter.front();
    s.p_c_hi = curves[0].parameter.back();
  }

  double best_q = std::numeric_limits<double>::infinity();
  double best_pc = s.p_c_lo, best_nu = s.nu_lo;
  for (double pc = s.p_c_lo; pc <= s.p_c_hi + 1e-12; pc += s.p_c_step) {
    for (double nu = s.nu_lo; nu <= s.nu_hi + 1e-12; nu += s.nu_step) {
      double q = collapse_quality(curves, pc, nu);
      if (q < best_q) {
        best_q = q;
        best_pc = pc;
        best_nu = nu;
      }
    }
  }
  // Coordinate-wise golden-section refinement around the grid minimizer.
  for (int round = 0; round < 3; ++round) {
    best_pc = golden_refine_1d(
        [&](double pc) { return collapse_quality(curves, pc, best_nu); },
        best_pc - s.p_c_step, best_pc + s.p_c_step);
    best_nu = golden_refine_1d(
        [&](double nu) { return collapse_quality(curves, best_pc, nu); },
        best_nu - s.nu_step, best_nu + s.nu_step);
  }
  best_q = collapse_quality(curves, best_pc, best_nu);

  CollapseResult result;
  result.p_c = best_pc;
  result.nu = best_nu;
  result.quality = best_q;
  result.p_c_grid_lo = s.p_c_lo;
  result.p_c_grid_hi = s.p_c_hi;
  result.p_c_grid_step = s.p_c_step;
  result.nu_grid_lo = s.nu_lo;
  result.nu_grid_hi = s.nu_hi;
  result.nu_grid_step = s.nu_step;

  // Uncertainty from the unit-increase contour of the (unit-scaled) quality
  // surface along each axis.
  auto half_width = [&](auto f, double at, double step, double limit) {
    double target = best_q * 2.0;
    for (double d = step; d <= limit; d += step) {
      if (f(at + d) >= target && f(at - d) >= target) return d;
    }
    return limit;
  };
  result.p_c_err = half_width(
      [&](double pc) { return collapse_quality(curves, pc, best_nu); }, best_pc,
      s.p_c_step / 2, 0.1);
  result.nu_err = half_width(
      [&](double nu) { return collapse_quality(curves, best_pc, nu); }, best_nu,
      s.nu_step / 2, 1.0);
  return result;
}

}  // namespace symmcirc
