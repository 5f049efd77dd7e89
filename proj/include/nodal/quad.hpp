#pragma once

#include <functional>

namespace nodal {

struct QuadOptions {
  double abs_tol = 0.0;  // many integrals here are tiny (n up to 48); rely on rel_tol
  double rel_tol = 1e-12;
  int max_subdivisions = 4000;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
  int intervals = 0;
};

using Integrand = std::function<double(double)>;

// Globally adaptive 7/15-point Gauss-Kronrod on [a, b]. Throws
// QuadratureNonConvergence when the interval budget runs out.
QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& opts = {});

// Integral over [a, inf) through x = a + tan(s).
QuadResult integrate_half_line(const Integrand& f, double a, const QuadOptions& opts = {});

// |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)
double sphere_area(int n);

// integral over R^n of f(|x|)
QuadResult radial_integral(int n, const Integrand& profile, const QuadOptions& opts = {});

// int_0^inf (r/(1+r^2))^q r^{-1-alpha} dr
double beta_integral(double q, double alpha, const QuadOptions& opts = {});
double beta_closed_form(double q, double alpha);

// Moments over R^n of (1+|x|^2)^{-(n+2)} with weights 1, |x|^2, |x|^4. The
// *_radial values omit the sphere area and are the ones with Gamma closed forms.
struct BubbleMoments {
  int n = 0;
  double m0 = 0.0, m2 = 0.0, m4 = 0.0;
  double m0_radial = 0.0, m2_radial = 0.0, m4_radial = 0.0;
  double m0_closed = 0.0, m2_closed = 0.0, m4_closed = 0.0;  // Gamma forms of the radial parts
  double ratio_m2_m0 = 0.0;                                   // expected (n/2)/(n/2+1)
};
BubbleMoments bubble_moments(int n, const QuadOptions& opts = {});

struct ZMassReport {
  int n = 0;
  double mass_z0 = 0.0;     // int U^{p-1} Z_0^2
  double mass_z1 = 0.0;     // int U^{p-1} Z_1^2
  double mass_gap = 0.0;    // |mass_z0 - mass_z1| / mass_z0
  double printed_value = 0.0;   // 2^{(n-4)/2} n (n-2)^2 Gamma(n/2)^2 / Gamma(n+2)
  double printed_rel_error = 0.0;
  double measured_ratio = 0.0;  // mass_z0 / printed_value
  double sphere_factor = 0.0;   // 2^{(n-2)/2} |S^{n-1}|
  double linear_lhs = 0.0;      // int U^{p-1} Z_0
  double linear_rhs = 0.0;      // -(n-2)/2 * (-int y_1 U^{p-1} Z_1)
  double linear_rel_gap = 0.0;
  double symmetry_gap = 0.0;    // int F x_1^2 vs (1/n) int F |x|^2, F = (1+r^2)^{-(n+2)}
};
ZMassReport z_mass_identities(int n, const QuadOptions& opts = {});

// Both sides of the scaling/translation identity for a bubble of scale mu
// centred at xi_norm * e_1, tested against a radial weight h(|x|).
struct KelvinLemmaReport {
  int n = 0;
  double mu = 0.0;
  double xi_norm = 0.0;
  double lhs = 0.0;   // mu int d/dmu [U_mu(x - xi)] h
  double rhs = 0.0;   // xi . int grad U_mu(x - xi) h
  double rel_gap = 0.0;
  bool on_unit_sphere = false;  // mu^2 + |xi|^2 == 1
  double weight_defect = 0.0;   // max |h(r) - r^{-n-2} h(1/r)| / |h(r)| on samples
};
KelvinLemmaReport kelvin_lemma_check(int n, double mu, double xi_norm, const Integrand& h_profile,
                                     const QuadOptions& opts = {0.0, 1e-10, 4000});

}  // namespace nodal
