#pragma once

#include <span>
#include <vector>

namespace nodal {

inline constexpr double kDefaultTol = 1e-12;

// Bernoulli polynomials B_0..B_maxdeg. Coefficients are built as exact
// rationals and rounded once to double.
class BernoulliTable {
 public:
  static constexpr int kDefaultMaxDegree = 50;

  explicit BernoulliTable(int max_degree = kDefaultMaxDegree);

  // Process-wide table of degree 50, built on first use.
  static const BernoulliTable& shared();

  int max_degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

  // Bernoulli number b_m = B_m(0).
  double number(int m) const;

  // B_m(t) by Horner.
  double eval(int m, double t) const;

  // B_m(t) - B_m(0), no constant term; keeps relative accuracy for small t.
  double eval_shifted(int m, double t) const;

  // coefficient of t^j is coefficients(m)[j]
  std::span<const double> coefficients(int m) const;

 private:
  void check_degree(int m) const;
  std::vector<std::vector<double>> coeffs_;
};

// B_m(t) from the shared table; t in [0,1].
double bernoulli_poly(int m, double t);

enum class SeriesPath { Auto, ClosedForm, Summation };

// P_i(x) = sum cos(lx)/l^i and Q_i(x) = sum sin(lx)/l^i on [0, 2pi].
// Auto uses the Bernoulli closed form when it exists (even i for P, odd i
// for Q) and bounded direct summation otherwise.
double p_sum(int i, double x, double tol = kDefaultTol, SeriesPath path = SeriesPath::Auto);
double q_sum(int i, double x, double tol = kDefaultTol, SeriesPath path = SeriesPath::Auto);

// Number of terms used by the summation path for a given target tail.
long summation_length(int i, double x, double tail_target);

struct GValues {
  double g = 0.0;
  double dg = 0.0;
  double d2g = 0.0;
};

// g(x) = sum_j (1 - cos jx)/j^n together with g' = Q_{n-1}, g'' = P_{n-2}.
class GKernel {
 public:
  explicit GKernel(int n, double tol = kDefaultTol);

  int n() const noexcept { return n_; }
  double tol() const noexcept { return tol_; }

  // x in [0, pi]. g and g' keep relative accuracy as x -> 0.
  GValues eval(double x) const;

  double g(double x) const { return eval(x).g; }

 private:
  int n_;
  double tol_;
};

// sum_{l>=1} (-1)^{l-1} / l^s
double alternating_zeta(int s, double tol = kDefaultTol);

}  // namespace nodal
