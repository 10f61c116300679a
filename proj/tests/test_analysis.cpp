#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "symmcirc/analysis.hpp"

using namespace symmcirc;

namespace {

double chord(size_t x, size_t L) {
  double l = static_cast<double>(L);
  return std::log2((l / std::numbers::pi) *
                   std::sin(std::numbers::pi * static_cast<double>(x) / l));
}

EntropyCurve synthetic_curve(size_t L, const std::vector<double>& grid, double p_c,
                             double nu, double noise_seed) {
  EntropyCurve c;
  c.parameter_name = "p_s";
  c.system_size = L;
  Rng rng(static_cast<uint64_t>(noise_seed) + L);
  for (double p : grid) {
    double u = (p - p_c) * std::pow(static_cast<double>(L), 1.0 / nu);
    double y = 1.0 + std::tanh(-u);  // monotone scaling function
    y += 0.002 * (rng.next_double() - 0.5);
    c.parameter.push_back(p);
    c.mean.push_back(y);
    c.std_error.push_back(0.002);
    c.count.push_back(1000);
  }
  return c;
}

}  // namespace

TEST_CASE("mean and standard error") {
  std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
  MeanStdErr s = mean_std_error(v);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(s.count == 4);
  CHECK(mean_std_error(std::vector<double>{}).count == 0);
}

TEST_CASE("s_topo combination") {
  CHECK(s_topo(3, 3, 2, 2) == doctest::Approx(2.0));
  CHECK(s_topo(1, 1, 1, 1) == doctest::Approx(0.0));
}

TEST_CASE("profile fit recovers a planted logarithmic coefficient") {
  size_t L = 64;
  double a = 0.191, b = 0.7;
  std::vector<double> profile(L - 1);
  for (size_t x = 1; x < L; ++x) profile[x - 1] = a * chord(x, L) + b;
  FitResult fit = fit_log_profile(profile, L);
  CHECK(fit.slope == doctest::Approx(a).epsilon(1e-9));
  CHECK(fit.intercept == doctest::Approx(b).epsilon(1e-9));
  CHECK(fit.window_lo == 4);
  CHECK(fit.window_hi == 60);
  CHECK(fit.residual_norm < 1e-9);
}

TEST_CASE("profile fit rejects bad inputs") {
  std::vector<double> wrong(10, 0.0);
  CHECK_THROWS(fit_log_profile(wrong, 64));
  std::vector<double> tiny(11, 0.0);
  CHECK_THROWS(fit_log_profile(tiny, 12, 4));  // window smaller than 8 points
}

TEST_CASE("time fit recovers a planted slope and honors the window") {
  std::vector<double> times, values;
  for (double t = 1; t <= 64; t += 1) {
    times.push_back(t);
    values.push_back(0.2 * std::log2(t) + 0.1);
  }
  FitResult fit = fit_log_time(times, values, 2.0, 32.0);
  CHECK(fit.slope == doctest::Approx(0.2).epsilon(1e-9));
  CHECK_THROWS(fit_log_time(times, values, 100.0, 200.0));  // window collapse
}

TEST_CASE("bootstrap slope error shrinks with tighter data") {
  size_t L = 32;
  Rng rng(5);
  auto make = [&](double jitter) {
    std::vector<std::vector<double>> rows;
    for (int k = 0; k < 40; ++k) {
      std::vector<double> prof(L - 1);
      for (size_t x = 1; x < L; ++x) {
        prof[x - 1] = 0.2 * chord(x, L) + jitter * (rng.next_double() - 0.5);
      }
      rows.push_back(std::move(prof));
    }
    return rows;
  };
  double loose = bootstrap_profile_slope_err(make(0.5), L);
  double tight = bootstrap_profile_slope_err(make(0.005), L);
  CHECK(tight < loose);
  CHECK(tight >= 0.0);
}

TEST_CASE("curve crossing by linear interpolation") {
  EntropyCurve a, b;
  a.parameter = b.parameter = {0.0, 1.0, 2.0};
  a.mean = {0.0, 1.0, 2.0};
  b.mean = {1.0, 1.0, 1.0};
  auto x = curve_crossing(a, b);
  REQUIRE(x);
  CHECK(*x == doctest::Approx(1.0));
  b.mean = {5.0, 5.0, 5.0};
  CHECK_FALSE(curve_crossing(a, b));
  b.parameter = {0.0, 1.0};
  b.mean = {1.0, 1.0};
  CHECK_THROWS(curve_crossing(a, b));
}

TEST_CASE("scaling collapse recovers planted critical parameters") {
  std::vector<double> grid;
  for (double p = 0.30; p <= 0.701; p += 0.02) grid.push_back(p);
  std::vector<EntropyCurve> curves;
  for (size_t L : {16u, 32u, 64u, 128u}) {
    curves.push_back(synthetic_curve(L, grid, 0.5, 1.33, 42));
  }
  CollapseResult res = scaling_collapse(curves);
  CHECK(std::abs(res.p_c - 0.5) < 0.01);
  CHECK(std::abs(res.nu - 1.33) < 0.08);
  CHECK(res.p_c_err > 0.0);
  CHECK(res.nu_err > 0.0);
  CHECK_THROWS(scaling_collapse({curves[0], curves[1]}));
}
