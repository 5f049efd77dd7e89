#include "nodal/bubble.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>

#include <boost/math/special_functions/legendre.hpp>

#include "nodal/errors.hpp"
#include "nodal/fit.hpp"
#include "nodal/interaction.hpp"
#include "nodal/quad.hpp"

namespace nodal {

namespace {

constexpr double kPi = std::numbers::pi;

void check_dims(const BubbleEnsemble& e, std::span<const double> x) {
  if (static_cast<int>(x.size()) != e.n())
    throw Error(ErrorCode::InvalidArgument, "point has " + std::to_string(x.size()) + " coordinates");
}

double norm2(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v * v;
  return s;
}

// squared distance to centre l; only the first two coordinates are shifted
double dist2(const BubbleEnsemble& e, int l, std::span<const double> x) {
  const double a = x[0] - e.center_x(l), b = x[1] - e.center_y(l);
  double s = a * a + b * b;
  for (std::size_t i = 2; i < x.size(); ++i) s += x[i] * x[i];
  return s;
}

struct GaussRule {
  std::vector<double> x, w;
};

GaussRule gauss_rule(int order) {
  GaussRule r;
  for (double z : boost::math::legendre_p_zeros<double>(order)) {
    const double d = boost::math::legendre_p_prime(order, z);
    const double w = 2.0 / ((1 - z * z) * d * d);
    r.x.push_back(z);
    r.w.push_back(w);
    if (z != 0.0) {
      r.x.push_back(-z);
      r.w.push_back(w);
    }
  }
  return r;
}

// breakpoints on [a, b], panels doubling away from focus from h0 up to hmax
std::vector<double> graded(double a, double b, double focus, double h0, double hmax) {
  focus = std::clamp(focus, a, b);
  std::vector<double> left, right;
  for (double pos = focus, h = h0; pos < b; h = std::min(2 * h, hmax)) {
    pos = std::min(b, pos + h);
    if (b - pos < 0.25 * h) pos = b;
    right.push_back(pos);
  }
  for (double pos = focus, h = h0; pos > a; h = std::min(2 * h, hmax)) {
    pos = std::max(a, pos - h);
    if (pos - a < 0.25 * h) pos = a;
    left.push_back(pos);
  }
  std::vector<double> pts(left.rbegin(), left.rend());
  pts.push_back(focus);
  pts.insert(pts.end(), right.begin(), right.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

std::vector<double> uniform(double a, double b, int panels) {
  std::vector<double> pts;
  for (int i = 0; i <= panels; ++i) pts.push_back(a + (b - a) * i / panels);
  return pts;
}

// nodes and weights of the composite rule on the given breakpoints
struct Nodes {
  std::vector<double> x, w;
};

Nodes composite(const std::vector<double>& pts, const GaussRule& g) {
  Nodes n;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double c = 0.5 * (pts[i] + pts[i + 1]), h = 0.5 * (pts[i + 1] - pts[i]);
    for (std::size_t j = 0; j < g.x.size(); ++j) {
      n.x.push_back(c + h * g.x[j]);
      n.w.push_back(h * g.w[j]);
    }
  }
  return n;
}

// 1 inside r/2, 0 beyond r, smooth in between
double cutoff(double d, double r) {
  const double t = (d - 0.5 * r) / (0.5 * r);
  if (t <= 0) return 1.0;
  if (t >= 1) return 0.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return b / (a + b);
}

double base_value(int n, double r2) { return std::pow(2.0 / (1.0 + r2), 0.5 * (n - 2)); }

double dilation_value(int n, double r2) { return 0.5 * (n - 2) * base_value(n, r2) * (1.0 - r2) / (1.0 + r2); }

}  // namespace

BubbleEnsemble::BubbleEnsemble(int n, int k) : BubbleEnsemble(n, k, k >= 2 ? mu_solve(n, k) : 1.0) {}

BubbleEnsemble::BubbleEnsemble(int n, int k, double mu) : n_(n), k_(k), mu_(mu) {
  if (n < 3) throw Error(ErrorCode::InvalidDimension, "dimension must be at least 3");
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "negative bubble count");
  if (k > 0 && !(mu > 0 && mu < 1)) throw Error(ErrorCode::InvalidArgument, "scale must lie in (0, 1)");
  p_ = (n + 2.0) / (n - 2.0);
  gamma_ = n * (n - 2.0) / 4.0;
  r0_ = k > 0 ? std::sqrt(1.0 - mu * mu) : 0.0;
  for (int l = 0; l < k; ++l) {
    cx_.push_back(r0_ * std::cos(angle(l)));
    cy_.push_back(r0_ * std::sin(angle(l)));
  }
}

double BubbleEnsemble::angle(int l) const { return 2.0 * kPi * l / k_; }

double bubble_eval(const BubbleEnsemble& e, int which, std::span<const double> x, std::span<double> grad) {
  check_dims(e, x);
  const int n = e.n();
  if (which == kBaseBubble) {
    const double r2 = norm2(x), u = base_value(n, r2);
    if (!grad.empty())
      for (int i = 0; i < n; ++i) grad[i] = -(n - 2) * u * x[i] / (1 + r2);
    return u;
  }
  if (which < 0 || which >= e.k()) throw Error(ErrorCode::InvalidArgument, "no bubble " + std::to_string(which));
  const double mu = e.mu(), d2 = dist2(e, which, x), den = mu * mu + d2;
  const double u = std::pow(2 * mu / den, 0.5 * (n - 2));
  if (!grad.empty()) {
    for (int i = 0; i < n; ++i) {
      double c = x[i];
      if (i == 0) c -= e.center_x(which);
      if (i == 1) c -= e.center_y(which);
      grad[i] = -(n - 2) * u * c / den;
    }
  }
  return u;
}

double ustar_eval(const BubbleEnsemble& e, std::span<const double> x) {
  check_dims(e, x);
  const int n = e.n();
  const double mu = e.mu(), ex = 0.5 * (n - 2);
  double s = base_value(n, norm2(x));
  for (int l = 0; l < e.k(); ++l) s -= std::pow(2 * mu / (mu * mu + dist2(e, l, x)), ex);
  return s;
}

double ustar_eval(const BubbleEnsemble& e, std::span<const double> x, std::span<double> grad) {
  check_dims(e, x);
  std::vector<double> g(e.n());
  double u = bubble_eval(e, kBaseBubble, x, grad);
  for (int l = 0; l < e.k(); ++l) {
    u -= bubble_eval(e, l, x, g);
    for (int i = 0; i < e.n(); ++i) grad[i] -= g[i];
  }
  return u;
}

double error_eval(const BubbleEnsemble& e, std::span<const double> x) {
  check_dims(e, x);
  const int n = e.n();
  const double mu = e.mu(), ex = 0.5 * (n - 2), p = e.p();
  const double u = base_value(n, norm2(x));
  double us = u, sat = 0.0;
  for (int l = 0; l < e.k(); ++l) {
    const double ul = std::pow(2 * mu / (mu * mu + dist2(e, l, x)), ex);
    us -= ul;
    sat += std::pow(ul, p);
  }
  const double f = std::copysign(std::pow(std::abs(us), p), us);
  return e.gamma() * (f - std::pow(u, p) + sat);
}

double kernel_field(const BubbleEnsemble& e, int idx, std::span<const double> x) {
  const int n = e.n();
  if (idx < 0 || idx >= 3 * n) throw Error(ErrorCode::InvalidArgument, "kernel field index " + std::to_string(idx));
  std::vector<double> g(n);
  const double u = ustar_eval(e, x, g);
  double gx = 0;
  for (int i = 0; i < n; ++i) gx += g[i] * x[i];
  const double z0 = 0.5 * (n - 2) * u + gx;
  if (idx == 0) return z0;
  if (idx <= n) return g[idx - 1];
  if (idx == n + 1) return -x[1] * g[0] + x[0] * g[1];
  const double r2 = norm2(x);
  if (idx == n + 2) return -2 * x[0] * z0 + r2 * g[0];
  if (idx == n + 3) return -2 * x[1] * z0 + r2 * g[1];
  if (idx <= 2 * n + 1) {
    const int l = idx - n - 1;  // 3..n
    return -x[l - 1] * g[0] + x[0] * g[l - 1];
  }
  const int l = idx - 2 * n + 1;  // 3..n
  return -x[l - 1] * g[1] + x[1] * g[l - 1];
}

double base_kernel(const BubbleEnsemble& e, int alpha, std::span<const double> x) {
  check_dims(e, x);
  const int n = e.n();
  if (alpha < 0 || alpha > n) throw Error(ErrorCode::InvalidArgument, "kernel index " + std::to_string(alpha));
  const double r2 = norm2(x);
  if (alpha == 0) return dilation_value(n, r2);
  return -(n - 2) * base_value(n, r2) * x[alpha - 1] / (1 + r2);
}

double satellite_kernel(const BubbleEnsemble& e, int alpha, int l, std::span<const double> x) {
  const int n = e.n();
  if (alpha < 0 || alpha > n) throw Error(ErrorCode::InvalidArgument, "kernel index " + std::to_string(alpha));
  std::vector<double> g(n);
  const double ul = bubble_eval(e, l, x, g);
  const double mu = e.mu(), d2 = dist2(e, l, x), r = std::sqrt(1 - mu * mu);
  const double c = std::cos(e.angle(l)), s = std::sin(e.angle(l));
  switch (alpha) {
    case 0: return 0.5 * (n - 2) * ul * (mu * mu - d2) / (mu * mu + d2);
    case 1: return r * (c * g[0] + s * g[1]);
    case 2: return r * (-s * g[0] + c * g[1]);
    default: return g[alpha - 1];
  }
}

NormResult weighted_norm(const BubbleEnsemble& e, const Field& f, const WeightedNormSpec& spec,
                         const NormOptions& opts) {
  const int n = e.n(), k = e.k();
  const double q = spec.q;
  if (!(q > 0.5 * n && q < n)) throw Error(ErrorCode::InvalidArgument, "exponent q must lie in (n/2, n)");
  if (opts.order < 2) throw Error(ErrorCode::InvalidArgument, "quadrature order below 2");
  const bool sup = spec.flavor == NormFlavor::NMinus2;
  const double wexp = n + 2.0 - 2.0 * n / q;
  const double shell = sphere_area(n - 2);  // the (x3..xn) directions
  NormResult res;
  double best = 0.0;
  std::vector<double> x(n, 0.0);

  auto integrand = [&](double x1, double x2, double rho) {
    x[0] = x1;
    x[1] = x2;
    x[2] = rho;
    const double v = f(x);
    ++res.evaluations;
    if (!std::isfinite(v)) throw Error(ErrorCode::NonfiniteInput, "field is not finite");
    const double r = std::sqrt(x1 * x1 + x2 * x2 + rho * rho);
    if (sup) {
      best = std::max(best, (1 + std::pow(r, n - 2)) * std::abs(v));
      return 0.0;
    }
    return std::pow(std::pow(1 + r, wexp) * std::abs(v), q);
  };

  const double r0 = e.ring_radius();
  const double wedge = k > 0 ? kPi / k : kPi;
  const double core = k > 0 ? opts.core_fraction * r0 * std::min(1.0, std::sin(kPi / std::max(k, 2))) : 0.0;
  const double h0 = k > 0 ? core / 8 : 0.125;

  // outer region in (R, polar angle from the x' axis, azimuth) with the core removed
  auto outer = [&](int order, const std::vector<double>& rpts, bool inverted) {
    const GaussRule g = gauss_rule(order);
    const Nodes rn = composite(rpts, g);
    const Nodes tn = composite(graded(0, 0.5 * kPi, 0.5 * kPi, h0 / std::max(r0, 1.0), 0.25), g);
    const Nodes pn = composite(graded(0, wedge, 0, h0 / std::max(r0, 1.0), std::max(core, 0.05) / std::max(r0, 1.0)), g);
    double total = 0.0;
    for (std::size_t a = 0; a < rn.x.size(); ++a) {
      const double R = inverted ? opts.inner_radius / rn.x[a] : rn.x[a];
      const double jr = inverted ? opts.inner_radius / (rn.x[a] * rn.x[a]) : 1.0;
      double acc_t = 0.0;
      for (std::size_t b = 0; b < tn.x.size(); ++b) {
        const double st = std::sin(tn.x[b]), ct = std::cos(tn.x[b]);
        const double rho = R * ct, rp = R * st;
        double acc_p = 0.0;
        for (std::size_t c = 0; c < pn.x.size(); ++c) {
          const double x1 = rp * std::cos(pn.x[c]), x2 = rp * std::sin(pn.x[c]);
          double chi = 0.0;
          if (k > 0) {
            const double dx = x1 - e.center_x(0);
            chi = cutoff(std::sqrt(dx * dx + x2 * x2 + rho * rho), core);
            if (chi == 1.0) continue;
          }
          acc_p += pn.w[c] * (1 - chi) * integrand(x1, x2, rho);
        }
        acc_t += tn.w[b] * st * std::pow(ct, n - 3) * acc_p;
      }
      total += rn.w[a] * jr * std::pow(R, n - 1) * acc_t;
    }
    return (k > 0 ? 2.0 * k : 2.0) * shell * total;
  };

  const double rfocus = k > 0 ? r0 : 1.0;
  res.outer_part = outer(opts.order, graded(0, opts.inner_radius, rfocus, h0, 0.25), false);
  const std::vector<double> tpts = uniform(0, 1, 4);
  res.tail_part = outer(opts.order, tpts, true);
  if (!sup) {
    const double check = outer(2 * opts.order, tpts, true);
    const double scale = std::max(res.outer_part + res.tail_part, 1e-300);
    if (std::abs(check - res.tail_part) > opts.tail_tol * scale)
      throw Error(ErrorCode::BudgetExhausted, "tail of the weighted norm did not settle");
  }

  // one core ball per satellite in scaled coordinates around the first centre
  if (k > 0) {
    const GaussRule g = gauss_rule(opts.order);
    const double mu = e.mu(), smax = core / mu;
    std::vector<double> spts{0.0};
    for (double s = 1.0; s < 0.5 * smax; s *= 2) spts.push_back(s);
    // the cutoff switches off between smax/2 and smax
    for (double f : {0.5, 0.625, 0.75, 0.875, 1.0})
      if (f * smax > spts.back()) spts.push_back(f * smax);
    const Nodes sn = composite(spts, g), an = composite(uniform(0, 0.5 * kPi, 4), g),
                bn = composite(uniform(0, kPi, 4), g);
    double total = 0.0;
    for (std::size_t a = 0; a < sn.x.size(); ++a) {
      const double s = sn.x[a];
      double acc = 0.0;
      for (std::size_t b = 0; b < an.x.size(); ++b) {
        const double sp = std::sin(an.x[b]), cp = std::cos(an.x[b]);
        double accb = 0.0;
        for (std::size_t c = 0; c < bn.x.size(); ++c) {
          const double y1 = s * sp * std::cos(bn.x[c]), y2 = s * sp * std::sin(bn.x[c]), rho = s * cp;
          const double chi = cutoff(mu * s, core);
          if (chi == 0.0) continue;
          accb += bn.w[c] * chi * integrand(e.center_x(0) + mu * y1, mu * y2, mu * rho);
        }
        acc += an.w[b] * sp * std::pow(cp, n - 3) * accb;
      }
      total += sn.w[a] * std::pow(s, n - 1) * acc;
    }
    res.core_part = 2.0 * k * shell * std::pow(mu, n) * total;
  }
  res.value = sup ? best : std::pow(res.outer_part + res.tail_part + res.core_part, 1.0 / q);
  return res;
}

TaylorReport taylor_order_check(const BubbleEnsemble& e, const TaylorOptions& opts) {
  const int n = e.n(), k = e.k();
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "expansions need at least two satellites");
  if (opts.satellite < 1 || opts.satellite >= k)
    throw Error(ErrorCode::InvalidArgument, "compared satellite must differ from the first");
  if (opts.sweep < 2) throw Error(ErrorCode::InvalidArgument, "sweep needs two scales");
  const double region = opts.eta / (e.mu() * std::pow(double(k), 1 + opts.sigma));
  if (opts.y_norm > region)
    throw Error(ErrorCode::SampleOutsideRegion,
                "|y| = " + std::to_string(opts.y_norm) + " exceeds " + std::to_string(region));
  const double ex = 0.5 * (n - 2);
  const double th = 2 * kPi * opts.satellite / k, c = std::cos(th), s = std::sin(th), omc = 1 - c;
  const double y[3] = {0.6 * opts.y_norm, 0.48 * opts.y_norm, 0.64 * opts.y_norm};
  const double yy = opts.y_norm * opts.y_norm;

  TaylorReport rep;
  std::vector<double> printed;
  for (int j = 0; j < opts.sweep; ++j) {
    const double mu = e.mu() / std::pow(2.0, j), r = std::sqrt(1 - mu * mu);
    rep.mus.push_back(mu);
    // base bubble near the first centre
    {
      const double a = r + mu * y[0], b = mu * y[1], cc = mu * y[2];
      const double exact = base_value(n, a * a + b * b + cc * cc);
      const double pref = std::pow(2 / (1 + r * r), ex), yx = y[0] * r;
      const double bracket = 1 - ex * y[0] * mu + 0.5 * ex * (0.5 * n * yx * yx - yy) * mu * mu;
      rep.rem_base.push_back(std::abs(exact / pref - bracket) / std::abs(bracket));
    }
    const double d[2] = {r * (1 - c), -r * s};  // first centre minus satellite
    const double dd = d[0] * d[0] + d[1] * d[1], dy = d[0] * y[0] + d[1] * y[1];
    // satellite seen from the first centre
    {
      const double z[3] = {y[0] + d[0] / mu, y[1] + d[1] / mu, y[2]};
      const double exact = base_value(n, z[0] * z[0] + z[1] * z[1] + z[2] * z[2]);
      const double bracket = 1 - ex * dy / omc * mu + 0.5 * ex * mu * mu / omc * (-1 - yy + n * dy * dy / dd);
      const double pref = std::pow(mu, n - 2) * std::pow(2.0 / dd, ex);
      const double pref_printed = std::pow(mu, n - 2) / std::pow(omc, ex);
      rep.rem_satellite.push_back(std::abs(exact / pref - bracket) / std::abs(bracket));
      printed.push_back(std::abs(exact / pref_printed - bracket) / std::abs(bracket));
    }
    // dilation field of the first centre seen from the satellite
    {
      const double z[3] = {y[0] - d[0] / mu, y[1] - d[1] / mu, y[2]};
      const double exact = dilation_value(n, z[0] * z[0] + z[1] * z[1] + z[2] * z[2]);
      const double lead = -ex * std::pow(mu, n - 2) / std::pow(omc, ex);
      const double approx = lead * (1 + (n - 2) * dy / dd * mu);
      rep.rem_dilation.push_back(std::abs(exact - approx) / std::abs(approx));
      if (j == opts.sweep - 1) rep.dilation_leading_ratio = dilation_value(n, dd / (mu * mu)) / lead;
    }
  }
  rep.order_base = loglog_slope(rep.mus, rep.rem_base);
  rep.order_satellite = loglog_slope(rep.mus, rep.rem_satellite);
  rep.order_dilation = loglog_slope(rep.mus, rep.rem_dilation);
  rep.order_satellite_printed_prefactor = loglog_slope(rep.mus, printed);
  return rep;
}

void export_csv(std::ostream& os, const Field& f, const std::vector<std::vector<double>>& points) {
  const auto old = os.precision(17);
  for (const auto& p : points) {
    for (double v : p) os << v << ',';
    os << f(p) << '\n';
  }
  os.precision(old);
}

}  // namespace nodal
