#pragma once

#include "nodal/series.hpp"

namespace nodal {

struct ConditionReport {
  int n = 0;
  bool holds = false;
  double min_margin = 0.0;
  double argmin_x = 0.0;
  int grid_size = 0;
  double endpoint_zero_ratio = 0.0;  // lim_{x->0} rhs/lhs
  double endpoint_pi_lhs = 0.0;      // g''(pi)
  long points_evaluated = 0;
};

struct EndpointLimits {
  double zero_ratio = 0.0;
  double pi_lhs = 0.0;
};

// (n-2)/(n-1) g'^2/g - g''; positive where the condition holds.
double condition_margin(const GKernel& kernel, double x);

// Uniform interior grid plus dyadic refinement toward 0 and pi down to 1e-6.
ConditionReport check_condition(int n, int grid_size, double tol = kDefaultTol);

EndpointLimits endpoint_limits(int n, double tol = kDefaultTol);

// n = 4 in the variable t = x/(2pi), where g is proportional to t^2 (1-t)^2.
struct ReducedN4Report {
  bool holds = false;          // derived inequality holds and agrees with the series
  int grid_size = 0;
  double min_margin_derived = 0.0;  // min of (8/3)(1-2t)^2 - (12t^2 - 12t + 2)
  double min_margin_printed = 0.0;  // same with (8/3)(1+t)^2 on the right
  bool printed_holds = false;
  double max_series_gap = 0.0;  // max |margin_x - (pi^2/12) margin_t|
};

ReducedN4Report reduced_n4_check(int grid_size, double tol = kDefaultTol);

}  // namespace nodal
