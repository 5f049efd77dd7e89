#pragma once
// Brute-force reference computations used only by the tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// sum_{l=1}^{N} f(l) in long double plus a midpoint tail estimate for 1/l^i decay
inline long double ipow(long double b, int e) {
  long double r = 1.0L;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

template <class F>
long double brute(long N, F f) {
  long double s = 0.0L;
  for (long l = N; l >= 1; --l) s += f(l);  // smallest terms first
  return s;
}

inline double p_sum(int i, double x, long N = 10'000'000) {
  long double xs = x;
  long double s = brute(N, [&](long l) { return std::cos(l * xs) / ipow(l, i); });
  if (x == 0.0) s += 1.0L / ((i - 1) * std::pow(N + 0.5L, i - 1));
  return static_cast<double>(s);
}

inline double q_sum(int i, double x, long N = 10'000'000) {
  long double xs = x;
  return static_cast<double>(brute(N, [&](long l) { return std::sin(l * xs) / ipow(l, i); }));
}

// g, g', g'' from the defining series
struct G {
  double g, dg, d2g;
};
inline G g_series(int n, double x, long N = 1'000'000) {
  long double xs = x;
  G out;
  out.g = (double)brute(N, [&](long j) {
    long double s = std::sin(0.5L * j * xs);
    return 2.0L * s * s / ipow(j, n);
  });
  out.dg = (double)brute(N, [&](long j) { return std::sin(j * xs) / ipow(j, n - 1); });
  out.d2g = (double)brute(N, [&](long j) { return std::cos(j * xs) / ipow(j, n - 2); });
  return out;
}

// least-squares slope of log(y) against log(x)
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  const size_t n = x.size();
  for (size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  return sxy / sxx;
}

}  // namespace oracle

namespace oracle {

// max distance after greedy nearest matching of two multisets of equal size
inline double multiset_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  double worst = 0.0;
  std::vector<bool> used(b.size(), false);
  for (const auto& z : a) {
    size_t best = b.size();
    double bd = 1e300;
    for (size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      double d = std::abs(z - b[j]);
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, bd);
  }
  return worst;
}

}  // namespace oracle

namespace oracle {

// fourth-order central difference Laplacian
template <class F>
double fd_laplacian(F f, std::vector<double> x, double h) {
  const double c = f(x);
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    double v[4];
    const double off[4] = {-2 * h, -h, h, 2 * h};
    for (int j = 0; j < 4; ++j) {
      x[i] = xi + off[j];
      v[j] = f(x);
    }
    x[i] = xi;
    s += (-v[0] + 16 * v[1] - 30 * c + 16 * v[2] - v[3]) / (12 * h * h);
  }
  return s;
}

template <class F>
double fd_partial(F f, std::vector<double> x, size_t i, double h) {
  const double xi = x[i];
  x[i] = xi + h;
  const double a = f(x);
  x[i] = xi - h;
  const double b = f(x);
  x[i] = xi + 2 * h;
  const double a2 = f(x);
  x[i] = xi - 2 * h;
  const double b2 = f(x);
  return (8 * (a - b) - (a2 - b2)) / (12 * h);
}

}  // namespace oracle
