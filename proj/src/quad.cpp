#include "nodal/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "nodal/errors.hpp"

namespace nodal {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// 15-point Kronrod nodes (positive half, last is 0) and weights; Gauss weights
// belong to the odd-indexed nodes.
constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b, value, error, abs_value;
};

Piece kronrod(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fc = f(c);
  double resk = fc * wgk[7], resg = fc * wg[3], resabs = std::abs(fc) * wgk[7];
  for (int j = 0; j < 7; ++j) {
    double dx = h * xgk[j];
    double f1 = f(c - dx), f2 = f(c + dx);
    resk += wgk[j] * (f1 + f2);
    resabs += wgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += wg[j / 2] * (f1 + f2);
  }
  Piece p{a, b, resk * h, std::abs((resk - resg) * h), resabs * std::abs(h)};
  if (!std::isfinite(p.value)) throw Error(ErrorCode::NonfiniteInput, "integrand is not finite");
  return p;
}

struct WorseFirst {
  bool operator()(const Piece& x, const Piece& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;
  }
};

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& opts) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw Error(ErrorCode::NonfiniteInput, "integration limits");
  QuadResult out;
  if (a == b) return out;
  std::priority_queue<Piece, std::vector<Piece>, WorseFirst> queue;
  std::vector<Piece> done;  // pieces too narrow to split
  Piece first = kronrod(f, a, b);
  out.evaluations = 15;
  double total = first.value, err = first.error, total_abs = first.abs_value;
  queue.push(first);
  int intervals = 1;
  auto target = [&] { return std::max({opts.abs_tol, opts.rel_tol * std::abs(total), 50 * kEps * total_abs}); };
  while (err > target() && !queue.empty()) {
    if (intervals >= opts.max_subdivisions)
      throw Error(ErrorCode::QuadratureNonConvergence,
                  "error " + std::to_string(err) + " after " + std::to_string(intervals) + " intervals");
    Piece p = queue.top();
    queue.pop();
    double mid = 0.5 * (p.a + p.b);
    if (!(mid > std::min(p.a, p.b) && mid < std::max(p.a, p.b))) {
      done.push_back(p);
      err -= p.error;  // cannot be refined further; treated as converged
      continue;
    }
    Piece l = kronrod(f, p.a, mid), r = kronrod(f, mid, p.b);
    out.evaluations += 30;
    ++intervals;
    total += l.value + r.value - p.value;
    err += l.error + r.error - p.error;
    total_abs += l.abs_value + r.abs_value - p.abs_value;
    queue.push(l);
    queue.push(r);
  }
  while (!queue.empty()) {
    done.push_back(queue.top());
    queue.pop();
  }
  std::sort(done.begin(), done.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
  double s = 0.0, c = 0.0, e = 0.0;
  for (const Piece& p : done) {
    double y = p.value - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
    e += p.error;
  }
  out.value = s;
  out.error = e;
  out.intervals = intervals;
  return out;
}

QuadResult integrate_half_line(const Integrand& f, double a, const QuadOptions& opts) {
  return integrate(
      [&](double s) {
        double t = std::tan(s);
        return f(a + t) * (1.0 + t * t);
      },
      0.0, 0.5 * kPi, opts);
}

double sphere_area(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidDimension, "sphere area needs n >= 1");
  return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

QuadResult radial_integral(int n, const Integrand& profile, const QuadOptions& opts) {
  QuadResult r = integrate_half_line([&](double rad) { return profile(rad) * std::pow(rad, n - 1); }, 0.0, opts);
  double area = sphere_area(n);
  r.value *= area;
  r.error *= area;
  return r;
}

double beta_closed_form(double q, double alpha) {
  if (!(q - std::abs(alpha) > 0.0))
    throw Error(ErrorCode::DivergentParameters, "need q > |alpha|");
  return std::exp(std::lgamma(0.5 * (q + alpha)) + std::lgamma(0.5 * (q - alpha)) - std::lgamma(q)) / 2.0;
}

double beta_integral(double q, double alpha, const QuadOptions& opts) {
  if (!std::isfinite(q) || !std::isfinite(alpha)) throw Error(ErrorCode::NonfiniteInput, "beta parameters");
  if (!(q - std::abs(alpha) > 0.0))
    throw Error(ErrorCode::DivergentParameters, "need q > |alpha|");
  // r = tan s gives sin^{e} s cos^{f} s on (0, pi/2). Split at pi/4; a
  // negative power on a half is removed by v = s^{e+1} (resp. (pi/2 - s)^{f+1}).
  const double e = q - 1.0 - alpha, fpow = q + alpha - 1.0;
  const double c = 0.25 * kPi;
  auto half = [&](double p, double other) {
    if (p >= 0.0)
      return integrate([&](double s) { return std::pow(std::sin(s), p) * std::pow(std::cos(s), other); }, 0.0, c,
                       opts)
          .value;
    auto g = [&](double v) {
      if (v <= 0.0) return 1.0 / (p + 1.0);
      double s = std::pow(v, 1.0 / (p + 1.0));
      return std::pow(std::sin(s) / s, p) * std::pow(std::cos(s), other) / (p + 1.0);
    };
    return integrate(g, 0.0, std::pow(c, p + 1.0), opts).value;
  };
  return half(e, fpow) + half(fpow, e);
}

BubbleMoments bubble_moments(int n, const QuadOptions& opts) {
  if (n < 3) throw Error(ErrorCode::InvalidDimension, "moments need n >= 3");
  BubbleMoments m;
  m.n = n;
  auto base = [n](double r) { return std::pow(1.0 + r * r, -(n + 2.0)); };
  auto rad = [&](int w) {
    return integrate_half_line([&](double r) { return base(r) * std::pow(r, n - 1 + w); }, 0.0, opts).value;
  };
  m.m0_radial = rad(0);
  m.m2_radial = rad(2);
  m.m4_radial = rad(4);
  double area = sphere_area(n);
  m.m0 = area * m.m0_radial;
  m.m2 = area * m.m2_radial;
  m.m4 = area * m.m4_radial;
  const double h = 0.5 * n;
  const double g2 = std::exp(2.0 * std::lgamma(h) - std::lgamma(n + 2.0));
  m.m0_closed = h * (h + 1.0) * g2 / 2.0;
  m.m2_closed = h * h * g2 / 2.0;
  m.m4_closed = h * (h + 1.0) * g2 / 2.0;
  m.ratio_m2_m0 = m.m2 / m.m0;
  return m;
}

ZMassReport z_mass_identities(int n, const QuadOptions& opts) {
  if (n < 4) throw Error(ErrorCode::InvalidDimension, "need n >= 4");
  ZMassReport z;
  z.n = n;
  const double a = 0.5 * (n - 2.0), p = (n + 2.0) / (n - 2.0);
  auto U = [a](double r) { return std::pow(2.0 / (1.0 + r * r), a); };
  // Z_0 = a U (1 - r^2)/(1 + r^2); dU/dr = -(n-2) U r/(1 + r^2)
  auto Z0 = [&](double r) { return a * U(r) * (1.0 - r * r) / (1.0 + r * r); };
  auto dU = [&](double r) { return -(n - 2.0) * U(r) * r / (1.0 + r * r); };
  z.mass_z0 = radial_integral(n, [&](double r) { return std::pow(U(r), p - 1) * Z0(r) * Z0(r); }, opts).value;
  // Z_1 = dU/dr x_1/r and the angular mean of x_1^2 is r^2/n
  z.mass_z1 = radial_integral(n, [&](double r) { return std::pow(U(r), p - 1) * dU(r) * dU(r) / n; }, opts).value;
  z.mass_gap = std::abs(z.mass_z0 - z.mass_z1) / z.mass_z0;
  z.printed_value = std::pow(2.0, (n - 4.0) / 2.0) * n * (n - 2.0) * (n - 2.0) *
                    std::exp(2.0 * std::lgamma(0.5 * n) - std::lgamma(n + 2.0));
  z.printed_rel_error = std::abs(z.mass_z0 - z.printed_value) / z.printed_value;
  z.measured_ratio = z.mass_z0 / z.printed_value;
  z.sphere_factor = std::pow(2.0, a) * sphere_area(n);
  z.linear_lhs = radial_integral(n, [&](double r) { return std::pow(U(r), p - 1) * Z0(r); }, opts).value;
  // y_1 Z_1 averages to r dU/dr / n
  double y1z1 = radial_integral(n, [&](double r) { return std::pow(U(r), p - 1) * r * dU(r) / n; }, opts).value;
  z.linear_rhs = -a * (-y1z1);
  z.linear_rel_gap = std::abs(z.linear_lhs - z.linear_rhs) / std::abs(z.linear_rhs);
  auto F = [n](double r) { return std::pow(1.0 + r * r, -(n + 2.0)); };
  // int F x_1^2 done on a product of a 1-d line and the orthogonal R^{n-1}
  double x1sq = integrate_half_line(
                    [&](double x1) {
                      return 2.0 * x1 * x1 *
                             radial_integral(n - 1, [&](double rho) { return F(std::hypot(x1, rho)); }, opts).value;
                    },
                    0.0, opts)
                    .value;
  double avg = radial_integral(n, [&](double r) { return F(r) * r * r; }, opts).value / n;
  z.symmetry_gap = std::abs(x1sq - avg) / avg;
  return z;
}

KelvinLemmaReport kelvin_lemma_check(int n, double mu, double xi_norm, const Integrand& h,
                                     const QuadOptions& opts) {
  if (n < 3) throw Error(ErrorCode::InvalidDimension, "need n >= 3");
  if (!(mu > 0.0) || !(xi_norm >= 0.0) || !std::isfinite(mu) || !std::isfinite(xi_norm))
    throw Error(ErrorCode::InvalidArgument, "need mu > 0 and |xi| >= 0");
  KelvinLemmaReport rep;
  rep.n = n;
  rep.mu = mu;
  rep.xi_norm = xi_norm;
  rep.on_unit_sphere = std::abs(mu * mu + xi_norm * xi_norm - 1.0) <= 1e-12;
  for (double r : {0.11, 0.37, 0.73, 1.3, 2.9, 7.1}) {
    double hr = h(r);
    double dev = std::abs(hr - std::pow(r, -n - 2.0) * h(1.0 / r)) / std::max(std::abs(hr), 1e-300);
    rep.weight_defect = std::max(rep.weight_defect, dev);
  }
  if (rep.weight_defect > 1e-9)
    throw Error(ErrorCode::WeightPrecondition, "h violates the Kelvin weight identity by " +
                                                   std::to_string(rep.weight_defect));
  const double a = 0.5 * (n - 2.0);
  const double scale = std::pow(mu, -a);
  const double area = sphere_area(n - 1);  // |S^{n-2}|
  // polar coordinates around the bubble centre: x = xi + s (cos phi e_1 + sin phi e_perp)
  auto shell = [&](double s, bool left) {
    double y = s / mu;
    double U = std::pow(2.0 / (1.0 + y * y), a);
    double z0 = a * U * (1.0 - y * y) / (1.0 + y * y);
    double du = -(n - 2.0) * U / (1.0 + y * y);  // times y_1
    auto inner = [&](double phi) {
      double c = std::cos(phi), sn = std::sin(phi);
      double x1 = xi_norm + s * c, rho = s * sn;
      double w = h(std::hypot(x1, rho)) * std::pow(sn, n - 2);
      // lhs: -mu^{-a} Z_0(y); rhs: |xi| mu^{-a-1} d_1 U(y) with y_1 = s cos(phi)/mu
      return left ? -scale * z0 * w : xi_norm * scale / mu * du * (s * c / mu) * w;
    };
    QuadOptions in = opts;
    in.rel_tol = 0.1 * opts.rel_tol;
    in.abs_tol = 0.0;
    return area * std::pow(s, n - 1) * integrate(inner, 0.0, kPi, in).value;
  };
  std::vector<double> breaks = {0.0, mu, 8.0 * mu};
  if (xi_norm > 0.0)
    for (double b : {0.5 * xi_norm, xi_norm, 2.0 * xi_norm}) breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  auto side = [&](bool left) {
    auto f = [&](double s) { return shell(s, left); };
    double total = 0.0;
    for (size_t i = 0; i + 1 < breaks.size(); ++i) total += integrate(f, breaks[i], breaks[i + 1], opts).value;
    return total + integrate_half_line(f, breaks.back(), opts).value;
  };
  rep.lhs = side(true);
  rep.rhs = side(false);
  double denom = std::max(std::abs(rep.lhs), std::abs(rep.rhs));
  rep.rel_gap = denom > 0.0 ? std::abs(rep.lhs - rep.rhs) / denom : 0.0;
  return rep;
}

}  // namespace nodal
