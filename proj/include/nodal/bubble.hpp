#pragma once

#include <functional>
#include <ostream>
#include <span>
#include <vector>

namespace nodal {

// Base bubble at the origin plus k satellites of scale mu centred at
// sqrt(1 - mu^2) (cos theta_l, sin theta_l, 0, ..., 0).
class BubbleEnsemble {
 public:
  BubbleEnsemble(int n, int k);             // mu from mu_solve
  BubbleEnsemble(int n, int k, double mu);  // k = 0 is the lone base bubble

  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  double mu() const noexcept { return mu_; }
  double p() const noexcept { return p_; }
  double gamma() const noexcept { return gamma_; }
  double ring_radius() const noexcept { return r0_; }
  double center_x(int l) const { return cx_[l]; }  // l = 0..k-1
  double center_y(int l) const { return cy_[l]; }
  double angle(int l) const;

 private:
  int n_, k_;
  double mu_, p_, gamma_, r0_;
  std::vector<double> cx_, cy_;
};

inline constexpr int kBaseBubble = -1;

// value of U (which = kBaseBubble) or U_l; gradient written to grad if non-empty
double bubble_eval(const BubbleEnsemble& e, int which, std::span<const double> x, std::span<double> grad = {});

double ustar_eval(const BubbleEnsemble& e, std::span<const double> x);
double ustar_eval(const BubbleEnsemble& e, std::span<const double> x, std::span<double> grad);

// Delta U_* + f(U_*) from the closed form, no numerical derivatives
double error_eval(const BubbleEnsemble& e, std::span<const double> x);

// z_0 .. z_{3n-1} built from U_* (no correction term)
double kernel_field(const BubbleEnsemble& e, int index, std::span<const double> x);

// single-bubble kernel: Z_0 and Z_alpha = d_alpha U (alpha = 1..n)
double base_kernel(const BubbleEnsemble& e, int alpha, std::span<const double> x);
// per-satellite fields: alpha = 0 dilation, 1 radial, 2 tangential, 3..n d_alpha U_l
double satellite_kernel(const BubbleEnsemble& e, int alpha, int l, std::span<const double> x);

using Field = std::function<double(std::span<const double>)>;

enum class NormFlavor { StarStar, NMinus2 };

struct WeightedNormSpec {
  double q = 3.0;
  NormFlavor flavor = NormFlavor::StarStar;
};

struct NormOptions {
  int order = 8;               // Gauss points per panel; doubling it doubles the budget
  double core_fraction = 0.5;  // core radius over the distance to the wedge edge
  double inner_radius = 4.0;   // beyond it the tail is integrated in 1/|x|
  double tail_tol = 1e-3;      // relative change of the tail between two rules
};

struct NormResult {
  double value = 0.0;
  double core_part = 0.0;   // integrals of |weight f|^q; zero for the sup flavor
  double outer_part = 0.0;
  double tail_part = 0.0;
  long evaluations = 0;
};

// The field must share the ensemble's symmetry: invariant under rotation by
// 2 pi/k in (x1, x2), even in x2 and radial in (x3, ..., xn).
NormResult weighted_norm(const BubbleEnsemble& e, const Field& f, const WeightedNormSpec& spec,
                         const NormOptions& opts = {});

struct TaylorOptions {
  int satellite = 1;         // l - 1 of the compared satellite
  double y_norm = 0.25;
  double eta = 0.1;
  double sigma = 0.0;
  int sweep = 4;             // mu, mu/2, ..., mu/2^{sweep-1}
};

struct TaylorReport {
  std::vector<double> mus;
  std::vector<double> rem_base, rem_satellite, rem_dilation;  // relative remainders
  double order_base = 0.0;
  double order_satellite = 0.0;
  double order_dilation = 0.0;
  double order_satellite_printed_prefactor = 0.0;
  double dilation_leading_ratio = 0.0;  // at the smallest mu
};

TaylorReport taylor_order_check(const BubbleEnsemble& e, const TaylorOptions& opts = {});

// one CSV row x1,...,xn,value per point
void export_csv(std::ostream& os, const Field& f, const std::vector<std::vector<double>>& points);

}  // namespace nodal
