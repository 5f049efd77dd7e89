#include "nodal/condition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "nodal/errors.hpp"

namespace nodal {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEndpointFloor = 1e-6;

std::vector<double> sample_points(int grid_size) {
  const double h = kPi / grid_size;
  std::vector<double> xs;
  xs.reserve(grid_size + 64);
  for (double d = 0.5 * h; d >= kEndpointFloor; d *= 0.5) xs.push_back(d);
  xs.push_back(kEndpointFloor);
  for (int j = 1; j < grid_size; ++j) xs.push_back(j * h);
  for (double d = 0.5 * h; d >= kEndpointFloor; d *= 0.5) xs.push_back(kPi - d);
  xs.push_back(kPi - kEndpointFloor);
  return xs;
}

}  // namespace

double condition_margin(const GKernel& kernel, double x) {
  const int n = kernel.n();
  GValues v = kernel.eval(x);
  return (n - 2.0) / (n - 1.0) * v.dg * v.dg / v.g - v.d2g;
}

EndpointLimits endpoint_limits(int n, double tol) {
  if (n < 4) throw Error(ErrorCode::InvalidDimension, "n = " + std::to_string(n));
  EndpointLimits e;
  e.zero_ratio = 2.0 * (n - 2.0) / (n - 1.0);
  e.pi_lhs = -alternating_zeta(n - 2, tol);
  return e;
}

ConditionReport check_condition(int n, int grid_size, double tol) {
  if (n < 4) throw Error(ErrorCode::InvalidDimension, "n = " + std::to_string(n));
  if (grid_size < 16) throw Error(ErrorCode::GridTooCoarse, "grid " + std::to_string(grid_size) + " < 16");
  GKernel kernel(n, tol);
  ConditionReport r;
  r.n = n;
  r.grid_size = grid_size;
  bool first = true;
  for (double x : sample_points(grid_size)) {
    double m = condition_margin(kernel, x);
    ++r.points_evaluated;
    // ties go to the smaller x so the result is order independent
    if (first || m < r.min_margin || (m == r.min_margin && x < r.argmin_x)) {
      r.min_margin = m;
      r.argmin_x = x;
      first = false;
    }
  }
  EndpointLimits e = endpoint_limits(n, tol);
  r.endpoint_zero_ratio = e.zero_ratio;
  r.endpoint_pi_lhs = e.pi_lhs;
  r.holds = r.min_margin > 0.0 && e.zero_ratio > 1.0 && e.pi_lhs < 0.0;
  return r;
}

ReducedN4Report reduced_n4_check(int grid_size, double tol) {
  if (grid_size < 16) throw Error(ErrorCode::GridTooCoarse, "grid " + std::to_string(grid_size) + " < 16");
  GKernel kernel(4, tol);
  ReducedN4Report r;
  r.grid_size = grid_size;
  bool first = true;
  bool series_positive = true;
  for (int j = 1; j < grid_size; ++j) {
    double t = 0.5 * j / grid_size;
    double lhs = 12.0 * t * t - 12.0 * t + 2.0;
    double derived = 8.0 / 3.0 * (1.0 - 2.0 * t) * (1.0 - 2.0 * t) - lhs;
    double printed = 8.0 / 3.0 * (1.0 + t) * (1.0 + t) - lhs;
    double mx = condition_margin(kernel, 2.0 * kPi * t);
    if (mx <= 0.0) series_positive = false;
    double gap = std::abs(mx - kPi * kPi / 12.0 * derived);
    if (first) {
      r.min_margin_derived = derived;
      r.min_margin_printed = printed;
      first = false;
    }
    r.min_margin_derived = std::min(r.min_margin_derived, derived);
    r.min_margin_printed = std::min(r.min_margin_printed, printed);
    r.max_series_gap = std::max(r.max_series_gap, gap);
  }
  r.printed_holds = r.min_margin_printed > 0.0;
  r.holds = r.min_margin_derived > 0.0 && series_positive;
  return r;
}

}  // namespace nodal
