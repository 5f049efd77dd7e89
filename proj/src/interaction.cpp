#include "nodal/interaction.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nodal/errors.hpp"
#include "nodal/quad.hpp"

namespace nodal {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTermLimit = 1e300;

void check_nk(int n, int k) {
  if (n < 4) throw Error(ErrorCode::InvalidDimension, "n = " + std::to_string(n) + " < 4");
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "k = " + std::to_string(k) + " < 2");
}

void check_mode(const Configuration& cfg, int m) {
  if (m < 0 || m >= cfg.k())
    throw Error(ErrorCode::ModeOutOfRange, "mode " + std::to_string(m) + " outside [0, " +
                                               std::to_string(cfg.k() - 1) + "]");
}

// 1/(1-cos theta_j)^e, guarded against overflow at the nearest neighbour
double inverse_power(double omc, double e) { return std::exp(-e * std::log(omc)); }

void guard(const Configuration& cfg, double exponent) {
  double worst = -exponent * std::log(cfg.one_minus_cos_at(1));
  if (worst > std::log(kTermLimit))
    throw Error(ErrorCode::ScaleOverflow, "(1 - cos theta_2)^{-" + std::to_string(exponent) +
                                              "} exceeds 1e300 at n = " + std::to_string(cfg.n()) +
                                              ", k = " + std::to_string(cfg.k()));
}

struct Kahan {
  double sum = 0.0, c = 0.0;
  void add(double v) {
    double y = v - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

double unit_sum(int k, double e) {
  // sum_{l>1} (1 - cos theta_l)^{-e}; only needs k
  Kahan acc;
  for (int j = 1; j < k; ++j) {
    int jj = std::min(j, k - j);
    double s = std::sin(kPi * jj / k);
    acc.add(inverse_power(2.0 * s * s, e));
  }
  return acc.sum;
}

}  // namespace

Configuration::Configuration(int n, int k) : Configuration(n, k, mu_solve(n, k)) {}

Configuration::Configuration(int n, int k, double mu) : n_(n), k_(k), mu_(mu) {
  check_nk(n, k);
  if (!(mu > 0.0) || !std::isfinite(mu)) throw Error(ErrorCode::InvalidArgument, "mu must be positive");
  build_tables();
  xi_ = xi_closed_form(n);
  scale_ = xi_ * std::pow(mu_, n_ - 2);
}

void Configuration::build_tables() {
  cos_.assign(k_, 0.0);
  sin_.assign(k_, 0.0);
  omc_.assign(k_, 0.0);
  cos_[0] = 1.0;
  for (int j = 1; 2 * j <= k_; ++j) {
    double a = 2.0 * kPi * j / k_;
    double c = std::cos(a), s = std::sin(a);
    if (4 * j == k_) c = 0.0, s = 1.0;
    if (2 * j == k_) c = -1.0, s = 0.0;
    double h = std::sin(kPi * j / k_);
    cos_[j] = c;
    sin_[j] = s;
    omc_[j] = 2.0 * h * h;
    cos_[k_ - j] = c;
    sin_[k_ - j] = -s;
    omc_[k_ - j] = omc_[j];
  }
}

double Configuration::theta(int j) const { return 2.0 * kPi * j / k_; }

double trig_kernel_sum(const Configuration& cfg, int m, Numerator num, double exponent, Phase phase) {
  if (!(exponent > 0.0)) throw Error(ErrorCode::InvalidArgument, "exponent must be positive");
  guard(cfg, exponent);
  const long k = cfg.k();
  Kahan acc;
  for (long j = 1; j < k; ++j) {
    const long mj = static_cast<long>(m) * j;
    double numer = num.constant + num.cos_coeff * cfg.cos_at(j) + num.sin_coeff * cfg.sin_at(j);
    double ph = 1.0;
    switch (phase) {
      case Phase::Unit: ph = 1.0; break;
      case Phase::Cos: ph = cfg.cos_at(mj); break;
      case Phase::Sin: ph = cfg.sin_at(mj); break;
      case Phase::OneMinusCos: ph = cfg.one_minus_cos_at(mj); break;
      case Phase::CosMinusBase: ph = cfg.cos_at(mj) - cfg.cos_at(j); break;
    }
    acc.add(numer * ph * inverse_power(cfg.one_minus_cos_at(j), exponent));
  }
  return acc.sum;
}

ModeCoefficients mode_coefficients(const Configuration& cfg, int m) {
  check_mode(cfg, m);
  const double n = cfg.n();
  const double lo = 0.5 * (n - 2.0), hi = 0.5 * n;
  ModeCoefficients c;
  c.m = m;
  c.abar = -lo * trig_kernel_sum(cfg, m, {1, 0, 0}, lo, Phase::Cos);
  c.bbar = -c.abar;
  c.fbar = trig_kernel_sum(cfg, 0, {0, 1, 0}, hi, Phase::Unit) +
           trig_kernel_sum(cfg, m, {-hi, lo, 0}, hi, Phase::Cos);
  c.gbar = -trig_kernel_sum(cfg, m, {hi, lo, 0}, hi, Phase::OneMinusCos);
  c.cbar = lo * trig_kernel_sum(cfg, m, {0, 0, 1}, hi, Phase::Sin);
  c.dbar = -c.cbar;
  c.hbar = trig_kernel_sum(cfg, m, {1, 0, 0}, hi, Phase::CosMinusBase);
  return c;
}

AsymptoticDeviation asymptotic_check(const Configuration& cfg, int m, const GKernel& gk) {
  check_mode(cfg, m);
  const int k = cfg.k();
  // 2 pi m / k in [pi/2, 3 pi/2]
  if (4 * m < k || 4 * m > 3 * k)
    throw Error(ErrorCode::ModeOutOfRange, "mode " + std::to_string(m) + " is not mid-range for k = " +
                                               std::to_string(k));
  if (gk.n() != cfg.n()) throw Error(ErrorCode::InvalidArgument, "kernel dimension differs from configuration");
  const double n = cfg.n();
  // fold to [0, pi]: g, g'' are even about pi and g' is odd
  int mm = std::min(m, k - m);
  double x = 2.0 * kPi * mm / k;
  double odd = (m <= k - m) ? 1.0 : -1.0;
  GValues v = gk.eval(x);
  const double base = k / (std::sqrt(2.0) * kPi);
  ModeCoefficients c = mode_coefficients(cfg, m);
  AsymptoticDeviation d;
  d.m = m;
  d.dev_a = std::abs(c.abar / (2.0 * -0.5 * (n - 2) * std::pow(base, n - 2) * v.d2g) - 1.0);
  d.dev_g = std::abs(c.gbar / (2.0 * -(n - 1) * std::pow(base, n) * v.g) - 1.0);
  double dg = odd * v.dg;
  if (2 * m != k && dg != 0.0)
    d.dev_c = std::abs(c.cbar / (2.0 * 0.5 * (n - 2) * std::sqrt(2.0) * std::pow(base, n - 1) * dg) - 1.0);
  return d;
}

double mu_solve(int n, int k) {
  check_nk(n, k);
  const double e = 0.5 * (n - 2.0);
  double s = std::sin(kPi / k);
  if (-e * std::log(2.0 * s * s) > std::log(kTermLimit))
    throw Error(ErrorCode::ScaleOverflow, "mu_solve at n = " + std::to_string(n) + ", k = " + std::to_string(k));
  return std::pow(unit_sum(k, e), -1.0 / e);
}

double xi_closed_form(int n) {
  if (n < 4) throw Error(ErrorCode::InvalidDimension, "n = " + std::to_string(n) + " < 4");
  const double gamma = n * (n - 2.0) / 4.0;
  // int U^p = 2^{(n+2)/2} pi^{n/2} / Gamma(n/2 + 1)
  double mass = std::exp(0.5 * (n + 2.0) * std::log(2.0) + 0.5 * n * std::log(kPi) - std::lgamma(0.5 * n + 1.0));
  return gamma * 0.5 * (n - 2.0) * mass;
}

XiConstant xi_value(int n) {
  XiConstant x;
  x.n = n;
  x.value = xi_closed_form(n);
  const double a = 0.5 * (n - 2.0), p = (n + 2.0) / (n - 2.0), gamma = n * (n - 2.0) / 4.0;
  // y_1 Z_1 = y_1 d_1 U averages over the sphere to r U'(r)/n
  double y1z1 = radial_integral(n, [&](double r) {
                  double U = std::pow(2.0 / (1.0 + r * r), a);
                  double dU = -(n - 2.0) * U * r / (1.0 + r * r);
                  return std::pow(U, p - 1.0) * r * dU / n;
                }).value;
  x.quadrature = p * gamma * a * (-y1z1);
  x.rel_gap = std::abs(x.quadrature - x.value) / x.value;
  return x;
}

const char* to_string(MatrixTag tag) noexcept {
  switch (tag) {
    case MatrixTag::A: return "A";
    case MatrixTag::B: return "B";
    case MatrixTag::C: return "C";
    case MatrixTag::D: return "D";
    case MatrixTag::F: return "F";
    case MatrixTag::G: return "G";
    case MatrixTag::H: return "H";
  }
  return "?";
}

std::vector<double> entry_row(const Configuration& cfg, MatrixTag tag) {
  const int k = cfg.k();
  const double n = cfg.n(), lo = 0.5 * (n - 2.0), hi = 0.5 * n;
  guard(cfg, hi);
  std::vector<double> row(k, 0.0);
  double diag = 0.0;
  for (int j = 1; j < k; ++j) {
    const double omc = cfg.one_minus_cos_at(j), c = cfg.cos_at(j), s = cfg.sin_at(j);
    double v = 0.0;
    switch (tag) {
      case MatrixTag::A: v = -lo * inverse_power(omc, lo); break;
      case MatrixTag::B: v = lo * inverse_power(omc, lo); break;
      case MatrixTag::C: v = lo * s * inverse_power(omc, hi); break;
      case MatrixTag::D: v = -lo * s * inverse_power(omc, hi); break;
      case MatrixTag::F:
        v = (lo * c - hi) * inverse_power(omc, hi);
        diag += c * inverse_power(omc, hi);
        break;
      case MatrixTag::G:
        v = (lo * c + hi) * inverse_power(omc, hi);
        diag -= v;
        break;
      case MatrixTag::H:
        v = inverse_power(omc, hi);
        diag -= c * v;
        break;
    }
    row[j] = cfg.scale() * v;
  }
  row[0] = cfg.scale() * diag;
  return row;
}

std::complex<double> analytic_eigenvalue(const Configuration& cfg, MatrixTag tag, int m) {
  ModeCoefficients c = mode_coefficients(cfg, m);
  const double s = cfg.scale();
  switch (tag) {
    case MatrixTag::A: return s * c.abar;
    case MatrixTag::B: return s * c.bbar;
    case MatrixTag::C: return {0.0, s * c.cbar};
    case MatrixTag::D: return {0.0, s * c.dbar};
    case MatrixTag::F: return s * c.fbar;
    case MatrixTag::G: return s * c.gbar;
    case MatrixTag::H: return s * c.hbar;
  }
  throw Error(ErrorCode::UnsupportedMatrix, "unknown matrix tag");
}

}  // namespace nodal
