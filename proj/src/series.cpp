#include "nodal/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/multiprecision/cpp_int.hpp>

#include "nodal/errors.hpp"

namespace nodal {

namespace {

using boost::multiprecision::cpp_rational;
using boost::multiprecision::cpp_int;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr long kMaxTerms = 1'000'000'000L;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw Error(ErrorCode::NonfiniteInput, what);
}

void require_index(int i) {
  if (i < 2) throw Error(ErrorCode::IndexTooSmall, "series index " + std::to_string(i) + " < 2");
}

void require_period(double x) {
  require_finite(x, "series argument");
  if (x < 0.0 || x > kTwoPi) throw Error(ErrorCode::InvalidArgument, "series argument outside [0, 2pi]");
}

// smallest L with c / L^a <= target
double integral_length(double c, double a, double target) {
  return std::ceil(std::pow(c / target, 1.0 / a));
}

// smallest L with c / (L+1)^a <= target
double dirichlet_length(double c, double a, double target) {
  return std::max(0.0, std::ceil(std::pow(c / target, 1.0 / a)) - 1.0);
}

long finalize_length(double len) {
  if (!(len <= static_cast<double>(kMaxTerms)))
    throw Error(ErrorCode::BudgetExhausted, "series needs more than 1e9 terms");
  return std::max(1L, static_cast<long>(len));
}

struct Kahan {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    double y = v - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

template <class Term>
double sum_terms(long L, Term term) {
  Kahan acc;
  for (long l = 1; l <= L; ++l) acc.add(term(l));
  return acc.sum;
}

double inv_pow(long l, int i) { return std::pow(static_cast<double>(l), -i); }

// (2pi)^m / (2 m!) computed as a product to keep it accurate for large m
double closed_form_scale(int m) {
  double s = 0.5;
  for (int j = 1; j <= m; ++j) s *= kTwoPi / j;
  return s;
}

double p_closed(int i, double x) {
  int half = i / 2;
  double sign = (half % 2 == 1) ? 1.0 : -1.0;  // (-1)^(half-1)
  return sign * closed_form_scale(i) * BernoulliTable::shared().eval(i, x / kTwoPi);
}

double q_closed(int i, double x) {
  int half = (i - 1) / 2;
  double sign = (half % 2 == 1) ? 1.0 : -1.0;
  return sign * closed_form_scale(i) * BernoulliTable::shared().eval(i, x / kTwoPi);
}

void require_degree_table(int i) {
  if (i > BernoulliTable::shared().max_degree())
    throw Error(ErrorCode::DegreeOutOfRange, "closed form needs B_" + std::to_string(i));
}

}  // namespace

BernoulliTable::BernoulliTable(int max_degree) {
  if (max_degree < 0) throw Error(ErrorCode::DegreeOutOfRange, "negative table degree");
  std::vector<cpp_rational> b(max_degree + 1);
  b[0] = 1;
  for (int m = 1; m <= max_degree; ++m) {
    // sum_{j=0}^{m} C(m+1, j) b_j = 0
    cpp_rational acc = 0;
    cpp_int binom = 1;  // C(m+1, j)
    for (int j = 0; j < m; ++j) {
      acc += cpp_rational(binom) * b[j];
      binom = binom * (m + 1 - j) / (j + 1);
    }
    b[m] = -acc / cpp_rational(m + 1);
  }
  coeffs_.resize(max_degree + 1);
  for (int m = 0; m <= max_degree; ++m) {
    coeffs_[m].assign(m + 1, 0.0);
    cpp_int binom = 1;  // C(m, j)
    for (int j = 0; j <= m; ++j) {
      coeffs_[m][m - j] = (cpp_rational(binom) * b[j]).convert_to<double>();
      binom = binom * (m - j) / (j + 1);
    }
  }
}

const BernoulliTable& BernoulliTable::shared() {
  static const BernoulliTable table;
  return table;
}

void BernoulliTable::check_degree(int m) const {
  if (m < 0 || m > max_degree())
    throw Error(ErrorCode::DegreeOutOfRange,
                "degree " + std::to_string(m) + " outside [0, " + std::to_string(max_degree()) + "]");
}

double BernoulliTable::number(int m) const {
  check_degree(m);
  return coeffs_[m][0];
}

std::span<const double> BernoulliTable::coefficients(int m) const {
  check_degree(m);
  return coeffs_[m];
}

double BernoulliTable::eval(int m, double t) const {
  check_degree(m);
  require_finite(t, "bernoulli argument");
  const auto& c = coeffs_[m];
  double v = 0.0;
  for (int j = m; j >= 0; --j) v = v * t + c[j];
  return v;
}

double BernoulliTable::eval_shifted(int m, double t) const {
  check_degree(m);
  require_finite(t, "bernoulli argument");
  const auto& c = coeffs_[m];
  double v = 0.0;
  for (int j = m; j >= 1; --j) v = v * t + c[j];
  return v * t;
}

double bernoulli_poly(int m, double t) {
  const auto& table = BernoulliTable::shared();
  if (m < 0 || m > table.max_degree())
    throw Error(ErrorCode::DegreeOutOfRange, "degree " + std::to_string(m));
  require_finite(t, "bernoulli argument");
  if (t < 0.0 || t > 1.0) throw Error(ErrorCode::InvalidArgument, "bernoulli argument outside [0,1]");
  return table.eval(m, t);
}

long summation_length(int i, double x, double tail_target) {
  require_index(i);
  double len = integral_length(1.0 / (i - 1), i - 1, tail_target);
  double s = std::abs(std::sin(0.5 * x));
  if (s > 0.0) len = std::min(len, dirichlet_length(1.0 / s, i, tail_target));
  return finalize_length(len);
}

double p_sum(int i, double x, double tol, SeriesPath path) {
  require_index(i);
  require_period(x);
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  bool closed = (i % 2 == 0);
  if (path == SeriesPath::ClosedForm && !closed)
    throw Error(ErrorCode::InvalidArgument, "no closed form for odd-index cosine sum");
  if (path != SeriesPath::Summation && closed) {
    require_degree_table(i);
    return p_closed(i, x);
  }
  long L = summation_length(i, x, 0.5 * tol);
  return sum_terms(L, [&](long l) { return std::cos(l * x) * inv_pow(l, i); });
}

double q_sum(int i, double x, double tol, SeriesPath path) {
  require_index(i);
  require_period(x);
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  bool closed = (i % 2 == 1);
  if (path == SeriesPath::ClosedForm && !closed)
    throw Error(ErrorCode::InvalidArgument, "no closed form for even-index sine sum");
  if (x == 0.0 || x == kTwoPi) return 0.0;
  if (path != SeriesPath::Summation && closed) {
    require_degree_table(i);
    return q_closed(i, x);
  }
  long L = summation_length(i, x, 0.5 * tol);
  return sum_terms(L, [&](long l) { return std::sin(l * x) * inv_pow(l, i); });
}

GKernel::GKernel(int n, double tol) : n_(n), tol_(tol) {
  if (n < 4) throw Error(ErrorCode::InvalidDimension, "g needs n >= 4, got " + std::to_string(n));
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  if (n % 2 == 0) require_degree_table(n);
}

GValues GKernel::eval(double x) const {
  require_finite(x, "g argument");
  if (x < 0.0 || x > std::numbers::pi) throw Error(ErrorCode::InvalidArgument, "g argument outside [0, pi]");
  GValues out;
  if (x == 0.0) {
    out.d2g = p_sum(n_ - 2, 0.0, tol_);
    return out;
  }
  const double t = x / kTwoPi;
  const double s = std::sin(0.5 * x);
  if (n_ % 2 == 0) {
    int half = n_ / 2;
    double sign = (half % 2 == 1) ? 1.0 : -1.0;
    out.g = -sign * closed_form_scale(n_) * BernoulliTable::shared().eval_shifted(n_, t);
    out.dg = q_sum(n_ - 1, x, tol_);
    out.d2g = p_sum(n_ - 2, x, tol_);
    return out;
  }
  const int n = n_;
  const double half_tol = 0.5 * tol_;
  {
    // sum 2 sin^2(jx/2)/j^n; tail <= min(2, j^2 x^2/2)/j^n summed
    double target = half_tol * std::min(1.0, x * x);
    double len = std::min(integral_length(2.0 / (n - 1), n - 1, target),
                          integral_length(x * x / (2.0 * (n - 3)), n - 3, target));
    long L = finalize_length(len);
    out.g = sum_terms(L, [&](long j) {
      double h = std::sin(0.5 * j * x);
      return 2.0 * h * h * inv_pow(j, n);
    });
  }
  {
    double target = half_tol * std::min(1.0, x);
    double len = std::min({integral_length(1.0 / (n - 2), n - 2, target),
                           integral_length(x / (n - 3), n - 3, target),
                           dirichlet_length(1.0 / s, n - 1, target)});
    long L = finalize_length(len);
    out.dg = sum_terms(L, [&](long j) { return std::sin(j * x) * inv_pow(j, n - 1); });
  }
  out.d2g = p_sum(n - 2, x, tol_);
  return out;
}

double alternating_zeta(int s, double tol) {
  require_index(s);
  // alternating tail is below the first omitted term
  long L = finalize_length(integral_length(1.0, s, 0.5 * tol));
  return sum_terms(L, [&](long l) { return (l % 2 == 1 ? 1.0 : -1.0) * inv_pow(l, s); });
}

}  // namespace nodal
