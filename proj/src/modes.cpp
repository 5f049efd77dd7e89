#include "nodal/modes.hpp"

#include <algorithm>
#include <cmath>

#include "nodal/circulant.hpp"
#include "nodal/errors.hpp"

namespace nodal {

namespace {

constexpr cplx I{0.0, 1.0};

double row_norm(const Eigen::Matrix3cd& a, int r) { return a.row(r).norm(); }

Eigen::MatrixXd dense_real(const std::vector<double>& row) {
  const int k = static_cast<int>(row.size());
  Eigen::MatrixXd d(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) d(i, j) = row[((j - i) % k + k) % k];
  return d;
}

std::vector<cplx> complexify(std::span<const double> v) { return {v.begin(), v.end()}; }

double dot(std::span<const double> a, const std::vector<double>& b) {
  long double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (long double)a[i] * b[i];
  return (double)s;
}

double norm(std::span<const double> a) {
  long double s = 0;
  for (double x : a) s += (long double)x * x;
  return std::sqrt((double)s);
}

void check_input(std::span<const double> v, int k, const char* what) {
  if (static_cast<int>(v.size()) != k) throw Error(ErrorCode::InvalidArgument, std::string(what) + " has wrong length");
  for (double x : v)
    if (!std::isfinite(x)) throw Error(ErrorCode::NonfiniteInput, std::string(what) + " is not finite");
}

}  // namespace

const char* to_string(CaseTag tag) noexcept {
  switch (tag) {
    case CaseTag::Kernel0: return "kernel0";
    case CaseTag::Kernel1: return "kernel1";
    case CaseTag::Regular: return "regular";
  }
  return "?";
}

ModeBlock build_block(const ModeCoefficients& c, int k) {
  ModeBlock b;
  b.m = c.m;
  b.coeffs = c;
  b.full << c.abar, c.bbar, I * c.cbar,
            c.bbar, c.fbar, I * c.dbar,
            -I * c.cbar, -I * c.dbar, c.gbar;
  b.reduced << -c.bbar, 0.0, I * c.cbar,
               0.0, c.fbar + c.bbar, 0.0,
               -I * c.cbar, 0.0, c.gbar;
  b.ell = -(c.bbar + c.fbar) * (c.gbar * c.bbar + c.cbar * c.cbar);
  if (!std::isfinite(b.ell)) throw Error(ErrorCode::ScaleOverflow, "determinant of mode " + std::to_string(c.m));
  const double rows = row_norm(b.reduced, 0) * row_norm(b.reduced, 1) * row_norm(b.reduced, 2);
  b.margin = rows > 0 ? std::abs(b.ell) / rows : 0.0;
  if (c.m == 0)
    b.case_tag = CaseTag::Kernel0;
  else if (c.m == 1 || c.m == k - 1)
    b.case_tag = CaseTag::Kernel1;
  else
    b.case_tag = CaseTag::Regular;
  return b;
}

EllScan ell_scan(const Configuration& cfg) {
  EllScan s;
  s.n = cfg.n();
  s.k = cfg.k();
  s.min_margin = INFINITY;
  for (int m = 0; m < cfg.k(); ++m) {
    ModeBlock b = build_block(mode_coefficients(cfg, m), cfg.k());
    int sign = (b.ell > 0) - (b.ell < 0);
    s.entries.push_back({m, b.ell, b.margin, sign});
    if (m >= 2 && m <= cfg.k() - 2) {
      if (b.ell >= 0) s.nonnegative.push_back(m);
      s.min_margin = std::min(s.min_margin, b.margin);
    }
  }
  for (int m = 1; m < cfg.k(); ++m)
    if (s.entries[m].ell != s.entries[cfg.k() - m].ell) s.symmetric = false;
  if (!std::isfinite(s.min_margin)) s.min_margin = 0.0;
  return s;
}

BlockSolution solve_block(const ModeBlock& b, const Eigen::Vector3cd& h, double tol, double resonance_tol) {
  for (int i = 0; i < 3; ++i)
    if (!std::isfinite(h[i].real()) || !std::isfinite(h[i].imag()))
      throw Error(ErrorCode::NonfiniteInput, "block right-hand side");
  const ModeCoefficients& c = b.coeffs;
  const double scale = h.norm();
  BlockSolution out;
  cplx u = 0.0, y1 = 0.0, y2 = 0.0;
  // 2x2 system [[-b, i c], [-i c, g]] (u, y2) = (r0, r2)
  auto solve2 = [&](cplx r0, cplx r2) {
    const double det = -c.bbar * c.gbar - c.cbar * c.cbar;
    u = (c.gbar * r0 - I * c.cbar * r2) / det;
    y2 = (-c.bbar * r2 + I * c.cbar * r0) / det;
  };
  switch (b.case_tag) {
    case CaseTag::Kernel0:
      if (std::abs(h[2]) > tol * scale)
        throw Error(ErrorCode::InconsistentRhs, "mode 0: third component " + std::to_string(std::abs(h[2])));
      u = h[0] / -c.bbar;
      y1 = (h[0] + h[1]) / (c.fbar + c.bbar);
      out.kernel = Eigen::Vector3cd(0, 0, 1);
      break;
    case CaseTag::Kernel1:
      if (std::abs(h[0] + h[1]) > tol * scale)
        throw Error(ErrorCode::InconsistentRhs,
                    "mode " + std::to_string(b.m) + ": h0 + h1 = " + std::to_string(std::abs(h[0] + h[1])));
      solve2(h[0], h[2]);
      out.kernel = Eigen::Vector3cd(1, 1, 0);
      break;
    case CaseTag::Regular:
      if (b.margin <= resonance_tol)
        throw Error(ErrorCode::SingularRegularBlock,
                    "mode " + std::to_string(b.m) + " margin " + std::to_string(b.margin));
      y1 = (h[0] + h[1]) / (c.fbar + c.bbar);
      solve2(h[0], h[2]);
      break;
  }
  out.y << u + y1, y1, y2;
  return out;
}

Eigen::MatrixXd assemble_N(const Configuration& cfg) {
  const int k = cfg.k();
  Eigen::MatrixXd a = dense_real(entry_row(cfg, MatrixTag::A)), b = dense_real(entry_row(cfg, MatrixTag::B)),
                  c = dense_real(entry_row(cfg, MatrixTag::C)), d = dense_real(entry_row(cfg, MatrixTag::D)),
                  f = dense_real(entry_row(cfg, MatrixTag::F)), g = dense_real(entry_row(cfg, MatrixTag::G));
  Eigen::MatrixXd n(3 * k, 3 * k);
  n << a, b, c,
       b, f, d,
       -c, -d, g;
  return n;
}

Eigen::MatrixXd assemble_H(const Configuration& cfg) { return dense_real(entry_row(cfg, MatrixTag::H)); }

BlockSolveResult solve_N(const Configuration& cfg, std::span<const double> s0, std::span<const double> s1,
                         std::span<const double> s2, double tol) {
  const int k = cfg.k();
  check_input(s0, k, "s0");
  check_input(s1, k, "s1");
  check_input(s2, k, "s2");
  std::vector<double> ones(k, 1.0), cs(k), sn(k), s01(k);
  for (int j = 0; j < k; ++j) {
    cs[j] = cfg.cos_at(j);
    sn[j] = cfg.sin_at(j);
    s01[j] = s0[j] + s1[j];
  }
  const double snorm = std::sqrt(norm(s0) * norm(s0) + norm(s1) * norm(s1) + norm(s2) * norm(s2));
  auto require = [&](const char* name, double value, const std::vector<double>& v) {
    const double vn = norm(v);
    if (vn > 0 && std::abs(value) > tol * snorm * vn) throw SolvabilityError(name, value);
  };
  require("s2.1_k", dot(s2, ones), ones);
  require("(s0+s1).cos", dot(s01, cs), cs);
  require("(s0+s1).sin", dot(s01, sn), sn);

  const auto h0 = to_modes(complexify(s0)), h1 = to_modes(complexify(s1)), h2 = to_modes(complexify(s2));
  std::vector<cplx> y0(k), y1(k), y2(k);
  const double inv = 1.0 / cfg.scale();
  for (int m = 0; m < k; ++m) {
    ModeBlock b = build_block(mode_coefficients(cfg, m), k);
    Eigen::Vector3cd r(h0[m] * inv, h1[m] * inv, h2[m] * inv);
    // drop the components already certified as negligible
    if (b.case_tag == CaseTag::Kernel0) r[2] = 0.0;
    if (b.case_tag == CaseTag::Kernel1) {
      const cplx d = 0.5 * (r[0] + r[1]);
      r[0] -= d;
      r[1] -= d;
    }
    BlockSolution sol = solve_block(b, r, tol);
    y0[m] = sol.y[0];
    y1[m] = sol.y[1];
    y2[m] = sol.y[2];
  }
  const auto w0 = from_modes(y0), w1 = from_modes(y1), w2 = from_modes(y2);
  BlockSolveResult res;
  res.particular.resize(3 * k);
  for (int j = 0; j < k; ++j) {
    for (auto [blk, w] : {std::pair{0, &w0}, std::pair{1, &w1}, std::pair{2, &w2}}) {
      res.particular[blk * k + j] = (*w)[j].real();
      res.imaginary_residue = std::max(res.imaginary_residue, std::abs((*w)[j].imag()));
    }
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(3 * k);
  v.segment(2 * k, k).setOnes();
  res.kernel_basis.push_back(v);
  v.setZero();
  for (int j = 0; j < k; ++j) v[j] = v[k + j] = cs[j];
  res.kernel_basis.push_back(v);
  if (k > 2) {
    v.setZero();
    for (int j = 0; j < k; ++j) v[j] = v[k + j] = sn[j];
    res.kernel_basis.push_back(v);
  }
  res.free_parameters = static_cast<int>(res.kernel_basis.size());
  if (snorm > 0)
    res.estimate_ratio = res.particular.norm() * std::pow(double(k), cfg.n()) * std::pow(cfg.mu(), cfg.n() - 2) / snorm;
  return res;
}

BlockSolveResult solve_H(const Configuration& cfg, int alpha, std::span<const double> s, double tol) {
  const int k = cfg.k();
  if (alpha < 3 || alpha > cfg.n())
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in 3..n, got " + std::to_string(alpha));
  check_input(s, k, "s");
  std::vector<double> cs(k), sn(k);
  for (int j = 0; j < k; ++j) {
    cs[j] = cfg.cos_at(j);
    sn[j] = cfg.sin_at(j);
  }
  const double snorm = norm(s);
  auto require = [&](const char* name, double value, const std::vector<double>& v) {
    const double vn = norm(v);
    if (vn > 0 && std::abs(value) > tol * snorm * vn) throw SolvabilityError(name, value);
  };
  require("s.cos", dot(s, cs), cs);
  require("s.sin", dot(s, sn), sn);

  const auto h = to_modes(complexify(s));
  std::vector<cplx> y(k, 0.0);
  double top = 0.0;
  std::vector<double> eta(k);
  for (int m = 0; m < k; ++m) {
    eta[m] = mode_coefficients(cfg, m).hbar;
    top = std::max(top, std::abs(eta[m]));
  }
  for (int m = 0; m < k; ++m) {
    if (m == 1 || m == k - 1) continue;
    if (std::abs(eta[m]) <= 1e-12 * top)
      throw Error(ErrorCode::SingularRegularBlock, "H mode " + std::to_string(m));
    y[m] = h[m] / (cfg.scale() * eta[m]);
  }
  const auto w = from_modes(y);
  BlockSolveResult res;
  res.particular.resize(k);
  for (int j = 0; j < k; ++j) {
    res.particular[j] = w[j].real();
    res.imaginary_residue = std::max(res.imaginary_residue, std::abs(w[j].imag()));
  }
  res.kernel_basis.push_back(Eigen::Map<const Eigen::VectorXd>(cs.data(), k));
  if (k > 2) res.kernel_basis.push_back(Eigen::Map<const Eigen::VectorXd>(sn.data(), k));
  res.free_parameters = static_cast<int>(res.kernel_basis.size());
  if (snorm > 0)
    res.estimate_ratio = res.particular.norm() * std::pow(double(k), cfg.n()) * std::pow(cfg.mu(), cfg.n() - 2) / snorm;
  return res;
}

}  // namespace nodal
