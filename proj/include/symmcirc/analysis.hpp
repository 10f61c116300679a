#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "symmcirc/rng.hpp"

namespace symmcirc {

// Observable-vs-parameter data for one system size.
struct EntropyCurve {
  std::string parameter_name;      // e.g. "p_s"
  size_t system_size = 0;          // L
  std::vector<double> parameter;   // grid values, ascending
  std::vector<double> mean;
  std::vector<double> std_error;   // sample stddev / sqrt(count)
  std::vector<size_t> count;
};

struct MeanStdErr {
  double mean = 0.0;
  double std_error = 0.0;
  size_t count = 0;
};

MeanStdErr mean_std_error(std::span<const double> values);

// S_topo = S_AB + S_BC - S_B - S_ABC.
double s_topo(double s_ab, double s_bc, double s_b, double s_abc);

struct FitResult {
  double slope = 0.0;      // a_x or a_t
  double intercept = 0.0;  // b or b'
  double slope_err = 0.0;  // OLS standard error
  double residual_norm = 0.0;
  size_t window_lo = 0, window_hi = 0;  // inclusive window actually used
};

// OLS of S([0,x)) against log2((L/pi) sin(pi x / L)) over x in
// [x_min, L - x_min]; profile[k] is the entropy at cut x = k+1.
FitResult fit_log_profile(std::span<const double> profile, size_t system_size,
                          size_t x_min = 4);

// OLS of S(L/2; t) against log2(t) over t in [t_lo, t_hi].
FitResult fit_log_time(std::span<const double> times, std::span<const double> values,
                       double t_lo, double t_hi);

// Nonparametric bootstrap (over trajectories) of the profile-fit slope:
// resamples rows of per-trajectory profiles, refits, returns stddev of slope.
double bootstrap_profile_slope_err(const std::vector<std::vector<double>>& per_trajectory,
                                   size_t system_size, size_t x_min = 4,
                                   size_t resamples = 200, uint64_t seed = 12345);

struct CollapseResult {
  double p_c = 0.0;
  double nu = 0.0;
  double quality = 0.0;  // objective at the minimizer
  double p_c_err = 0.0;  // unit-increase contour half widths
  double nu_err = 0.0;
  // search metadata
  double p_c_grid_lo = 0.0, p_c_grid_hi = 0.0, p_c_grid_step = 0.0;
  double nu_grid_lo = 0.0, nu_grid_hi = 0.0, nu_grid_step = 0.0;
};

struct CollapseSearch {
  // p_c grid defaults to the curves' full parameter range when lo >= hi.
  double p_c_lo = 0.0, p_c_hi = 0.0, p_c_step = 0.005;
  double nu_lo = 0.8, nu_hi = 2.2, nu_step = 0.02;
};

// Finite-size scaling collapse onto F((p - p_c) L^{1/nu}): inverse-variance
// weighted mean squared deviation of each scaled point from the
// piecewise-linear interpolation of the other sizes' scaled data, minimized
// by grid search plus golden-section refinement.
CollapseResult scaling_collapse(const std::vector<EntropyCurve>& curves,
                                const CollapseSearch& search = {});

// Crossing point of two curves (linear interpolation); nullopt if they never
// cross on the common grid.
std::optional<double> curve_crossing(const EntropyCurve& a, const EntropyCurve& b);

}  // namespace symmcirc
