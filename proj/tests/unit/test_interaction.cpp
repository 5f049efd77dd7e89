#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "nodal/circulant.hpp"
#include "nodal/errors.hpp"
#include "nodal/interaction.hpp"

using namespace nodal;

namespace {

// textbook evaluation straight from the angles
struct Naive {
  int n, k;
  double th(int l) const { return 2 * oracle::pi * (l - 1) / k; }
  template <class F>
  double sum(F f) const {
    long double s = 0;
    for (int l = 2; l <= k; ++l) s += f(th(l));
    return (double)s;
  }
  double abar(int m) const {
    return -(n - 2) / 2.0 * sum([&](double t) { return std::cos(m * t) / std::pow(1 - std::cos(t), (n - 2) / 2.0); });
  }
  double fbar(int m) const {
    return sum([&](double t) {
      return (std::cos(t) + ((n - 2) / 2.0 * std::cos(t) - n / 2.0) * std::cos(m * t)) / std::pow(1 - std::cos(t), n / 2.0);
    });
  }
  double gbar(int m) const {
    return -sum([&](double t) {
      return ((n - 2) / 2.0 * std::cos(t) + n / 2.0) * (1 - std::cos(m * t)) / std::pow(1 - std::cos(t), n / 2.0);
    });
  }
  double cbar(int m) const {
    return (n - 2) / 2.0 * sum([&](double t) { return std::sin(t) * std::sin(m * t) / std::pow(1 - std::cos(t), n / 2.0); });
  }
  double hbar(int m) const {
    return sum([&](double t) { return (std::cos(m * t) - std::cos(t)) / std::pow(1 - std::cos(t), n / 2.0); });
  }
};

double rel(double a, double b, double scale) { return std::abs(a - b) / scale; }

}  // namespace

TEST_CASE("kernel sum examples") {
  Configuration c10(4, 10);
  double s = trig_kernel_sum(c10, 0, {1, 0, 0}, 1.0, Phase::Unit);
  Naive nv{4, 10};
  CHECK(std::abs(s - nv.sum([](double t) { return 1 / (1 - std::cos(t)); })) <= 1e-12);
  CHECK(std::abs(s - 16.5) <= 1e-12);
  for (int k : {7, 16, 33}) {
    Configuration c(4, k);
    CHECK(std::abs(trig_kernel_sum(c, 0, {1, 0, 0}, 1.0, Phase::Unit) - (k * k - 1) / 6.0) <= 1e-11 * k * k);
  }
  CHECK(trig_kernel_sum(c10, 0, {1, 0.3, 0}, 2.0, Phase::Sin) == 0.0);
  for (int n : {4, 5, 6, 9}) {
    Configuration c2(n, 2);
    CHECK(std::abs(trig_kernel_sum(c2, 1, {0, 1, 0}, n / 2.0, Phase::Cos) - std::pow(2.0, -n / 2.0)) <= 1e-15);
  }
}

TEST_CASE("coefficients match the textbook sums") {
  for (int n : {4, 5, 7}) {
    for (int k : {5, 12, 32}) {
      Configuration cfg(n, k);
      Naive nv{n, k};
      for (int m = 0; m < k; ++m) {
        ModeCoefficients c = mode_coefficients(cfg, m);
        double sc = std::pow(k, n);
        CHECK(rel(c.abar, nv.abar(m), sc) <= 1e-13);
        CHECK(rel(c.fbar, nv.fbar(m), sc) <= 1e-13);
        CHECK(rel(c.gbar, nv.gbar(m), sc) <= 1e-13);
        CHECK(rel(c.cbar, nv.cbar(m), sc) <= 1e-13);
        CHECK(rel(c.hbar, nv.hbar(m), sc) <= 1e-13);
      }
    }
  }
}

TEST_CASE("exact identities of the coefficients") {
  for (int n = 4; n <= 8; ++n) {
    for (int k : {2, 3, 8, 17, 64}) {
      Configuration cfg(n, k);
      for (int m = 0; m < k; ++m) {
        ModeCoefficients c = mode_coefficients(cfg, m), r = mode_coefficients(cfg, (k - m) % k);
        CHECK(c.abar + c.bbar == 0.0);
        CHECK(c.cbar + c.dbar == 0.0);
        CHECK(c.abar == r.abar);
        CHECK(c.gbar == r.gbar);
        CHECK(c.cbar == -r.cbar);
        // f + b = -h holds as an identity of the sums
        double sc = std::abs(c.fbar) + std::abs(c.bbar) + 1;
        CHECK(std::abs(c.fbar + c.bbar + c.hbar) <= 1e-12 * sc);
      }
      ModeCoefficients z = mode_coefficients(cfg, 0);
      CHECK(z.gbar == 0.0);
      CHECK(z.cbar == 0.0);
      ModeCoefficients one = mode_coefficients(cfg, 1);
      CHECK(one.hbar == 0.0);
      CHECK(mode_coefficients(cfg, k - 1).hbar == 0.0);
      CHECK(std::abs(one.fbar + one.bbar) <= 1e-12 * std::max(std::abs(one.fbar), std::abs(one.bbar)));
    }
  }
  // one-term case k = 2
  ModeCoefficients c = mode_coefficients(Configuration(4, 2), 1);
  CHECK(std::abs(c.fbar + c.bbar) <= 1e-15);
}

TEST_CASE("balancing scale") {
  CHECK(std::abs(mu_solve(4, 10) - 6.0 / 99) <= 1e-15);
  for (int n : {4, 5, 9}) CHECK(std::abs(mu_solve(n, 2) - 2.0) <= 1e-14);
  for (int k : {100, 1000}) CHECK(std::abs(mu_solve(4, k) * k * k - 6.0 * k * k / (k * k - 1.0)) <= 1e-10);
  for (int n : {4, 6, 11}) {
    for (int k : {3, 16, 50}) {
      Configuration cfg(n, k);
      double s = trig_kernel_sum(cfg, 0, {1, 0, 0}, (n - 2) / 2.0, Phase::Unit);
      CHECK(std::abs(std::pow(cfg.mu(), (n - 2) / 2.0) * s - 1) <= 1e-13);
      CHECK(cfg.theta(0) == 0.0);
    }
  }
}

TEST_CASE("normalising constant") {
  XiConstant x4 = xi_value(4);
  CHECK(std::abs(x4.value - 8 * oracle::pi * oracle::pi) <= 1e-12 * x4.value);
  for (int n : {4, 5, 6, 10, 20, 48}) {
    XiConstant x = xi_value(n);
    CHECK(x.value > 0);
    CHECK(x.rel_gap <= 1e-8);
  }
}

TEST_CASE("entry rows") {
  Configuration c(4, 4);
  const double xi = xi_closed_form(4);
  CHECK(std::abs(entry_row(c, MatrixTag::A)[1] + xi * c.mu() * c.mu()) <= 1e-12 * xi * c.mu() * c.mu());
  for (int k : {4, 7, 16}) {
    Configuration cfg(5, k);
    for (MatrixTag t : {MatrixTag::C, MatrixTag::D}) {
      auto row = entry_row(cfg, t);
      CHECK(row[0] == 0.0);
      for (int l = 1; l < k; ++l) CHECK(row[l] == -row[k - l]);
    }
    for (MatrixTag t : {MatrixTag::A, MatrixTag::B, MatrixTag::F, MatrixTag::G, MatrixTag::H}) {
      auto row = entry_row(cfg, t);
      for (int l = 1; l < k; ++l) CHECK(row[l] == row[k - l]);
    }
  }
}

TEST_CASE("row spectra reproduce the analytic eigenvalues") {
  for (int n = 4; n <= 8; ++n) {
    for (int k : {4, 8, 16, 32}) {
      Configuration cfg(n, k);
      for (MatrixTag t : {MatrixTag::A, MatrixTag::B, MatrixTag::C, MatrixTag::D, MatrixTag::F, MatrixTag::G,
                          MatrixTag::H}) {
        Spectrum eta = eigenvalues(Circulant::from_real(entry_row(cfg, t)));
        double top = 0;
        for (auto& e : eta) top = std::max(top, std::abs(e));
        for (int m = 0; m < k; ++m) CHECK(std::abs(eta[m] - analytic_eigenvalue(cfg, t, m)) <= 1e-10 * top);
      }
    }
  }
}

TEST_CASE("continuum forms are approached with the factor 2") {
  for (int n : {4, 5}) {
    GKernel gk(n);
    std::vector<double> ks, da, dg;
    for (int k : {32, 64, 128, 256}) {
      AsymptoticDeviation d = asymptotic_check(Configuration(n, k), k / 4 + 1, gk);
      ks.push_back(k);
      da.push_back(d.dev_a);
      dg.push_back(std::max(d.dev_g, 1e-16));
      CHECK(d.dev_a < 0.05);
      CHECK(d.dev_g < 0.05);
      REQUIRE(d.dev_c.has_value());
      CHECK(*d.dev_c < 0.05);
    }
    // the lattice sums converge at second order in 1/k
    if (n == 5) CHECK(oracle::loglog_slope(ks, da) == doctest::Approx(-2.0).epsilon(0.15));
  }
  AsymptoticDeviation half = asymptotic_check(Configuration(4, 32), 16, GKernel(4));
  CHECK_FALSE(half.dev_c.has_value());
  CHECK_THROWS_AS(asymptotic_check(Configuration(4, 32), 2, GKernel(4)), Error);
}

TEST_CASE("interaction errors") {
  CHECK_THROWS_AS(Configuration(3, 8), Error);
  CHECK_THROWS_AS(Configuration(4, 1), Error);
  Configuration cfg(4, 1000);
  try {
    trig_kernel_sum(cfg, 0, {1, 0, 0}, 200.0, Phase::Unit);
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ScaleOverflow);
  }
  try {
    mode_coefficients(cfg, 1000);
    FAIL("expected mode error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ModeOutOfRange);
  }
}
