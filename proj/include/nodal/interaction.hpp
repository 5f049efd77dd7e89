#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "nodal/series.hpp"

namespace nodal {

// k points on the unit circle at angles theta_l = 2 pi (l-1)/k and the
// balancing scale mu. Angle tables are indexed by j = l - 1.
class Configuration {
 public:
  Configuration(int n, int k);             // mu from mu_solve
  Configuration(int n, int k, double mu);

  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  double mu() const noexcept { return mu_; }
  double theta(int j) const;  // 2 pi j / k

  double cos_at(long j) const { return cos_[wrap(j)]; }
  double sin_at(long j) const { return sin_[wrap(j)]; }
  double one_minus_cos_at(long j) const { return omc_[wrap(j)]; }

  double xi() const noexcept { return xi_; }      // normalising constant
  double scale() const noexcept { return scale_; }  // xi * mu^{n-2}

 private:
  std::size_t wrap(long j) const { return static_cast<std::size_t>(((j % k_) + k_) % k_); }
  void build_tables();

  int n_, k_;
  double mu_;
  std::vector<double> cos_, sin_, omc_;
  double xi_ = 0.0, scale_ = 0.0;
};

// affine numerator a + b cos(theta) + c sin(theta)
struct Numerator {
  double constant = 1.0;
  double cos_coeff = 0.0;
  double sin_coeff = 0.0;
};

enum class Phase { Unit, Cos, Sin, OneMinusCos, CosMinusBase };

// sum_{l=2}^{k} num(theta_l) phase(m, theta_l) / (1 - cos theta_l)^exponent, where
// phase is 1, cos m theta, sin m theta, 1 - cos m theta or cos m theta - cos theta.
double trig_kernel_sum(const Configuration& cfg, int m, Numerator num, double exponent, Phase phase);

struct ModeCoefficients {
  int m = 0;
  double abar = 0, bbar = 0, cbar = 0, dbar = 0, fbar = 0, gbar = 0, hbar = 0;
};

ModeCoefficients mode_coefficients(const Configuration& cfg, int m);

// Relative deviation of the lattice sums from their continuum forms; the
// continuum forms carry a factor 2 because l and k+2-l contribute equally.
struct AsymptoticDeviation {
  int m = 0;
  double dev_a = 0.0;
  double dev_g = 0.0;
  std::optional<double> dev_c;  // empty when g'(2 pi m/k) = 0
};

AsymptoticDeviation asymptotic_check(const Configuration& cfg, int m, const GKernel& gk);

double mu_solve(int n, int k);

struct XiConstant {
  int n = 0;
  double value = 0.0;        // Gamma form
  double quadrature = 0.0;   // from the defining integral
  double rel_gap = 0.0;
};

XiConstant xi_value(int n);
double xi_closed_form(int n);

enum class MatrixTag { A, B, C, D, F, G, H };
const char* to_string(MatrixTag tag) noexcept;

// first row of the leading-order circulant, scaled by xi mu^{n-2}; the
// diagonal entry makes the row's spectrum match analytic_eigenvalue.
std::vector<double> entry_row(const Configuration& cfg, MatrixTag tag);

// xi mu^{n-2} times abar, bbar, i cbar, i dbar, fbar, gbar, hbar
std::complex<double> analytic_eigenvalue(const Configuration& cfg, MatrixTag tag, int m);

}  // namespace nodal
