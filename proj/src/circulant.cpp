#include "nodal/circulant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nodal/errors.hpp"

namespace nodal {

std::vector<cplx> roots_of_unity(std::size_t k) {
  std::vector<cplx> w(k);
  if (k == 0) return w;
  w[0] = 1.0;
  for (std::size_t j = 1; 2 * j <= k; ++j) {
    double a = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(k);
    cplx v(std::cos(a), std::sin(a));
    if (4 * j == k) v = cplx(0.0, 1.0);
    if (2 * j == k) v = cplx(-1.0, 0.0);
    w[j] = v;
    w[k - j] = std::conj(v);
  }
  return w;
}

Circulant::Circulant(std::vector<cplx> row) : row_(std::move(row)) {
  if (row_.empty()) throw Error(ErrorCode::EmptyRow, "circulant needs at least one entry");
  for (const cplx& z : row_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(ErrorCode::NonfiniteInput, "circulant row");
}

Circulant Circulant::from_real(std::span<const double> row) {
  return Circulant(std::vector<cplx>(row.begin(), row.end()));
}

cplx Circulant::entry(std::size_t i, std::size_t j) const {
  const std::size_t k = size();
  return row_[(j + k - i % k) % k];
}

Eigen::MatrixXcd Circulant::dense() const {
  const auto k = static_cast<Eigen::Index>(size());
  Eigen::MatrixXcd m(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) m(i, j) = entry(i, j);
  return m;
}

Circulant Circulant::transpose() const {
  const std::size_t k = size();
  std::vector<cplx> r(k);
  for (std::size_t l = 0; l < k; ++l) r[l] = row_[(k - l) % k];
  return Circulant(std::move(r));
}

Circulant Circulant::operator+(const Circulant& other) const {
  if (other.size() != size()) throw Error(ErrorCode::InvalidArgument, "circulant sizes differ");
  std::vector<cplx> r(row_);
  for (std::size_t l = 0; l < r.size(); ++l) r[l] += other.row_[l];
  return Circulant(std::move(r));
}

Circulant Circulant::operator*(const Circulant& other) const {
  if (other.size() != size()) throw Error(ErrorCode::InvalidArgument, "circulant sizes differ");
  const std::size_t k = size();
  std::vector<cplx> r(k);
  // first row of the product: r[j] = sum_l a[l] b[(j - l) mod k]
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t l = 0; l < k; ++l) r[j] += row_[l] * other.row_[(j + k - l) % k];
  return Circulant(std::move(r));
}

std::vector<cplx> Circulant::apply(std::span<const cplx> v) const {
  const std::size_t k = size();
  if (v.size() != k) throw Error(ErrorCode::InvalidArgument, "vector length differs from circulant size");
  std::vector<cplx> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += entry(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

Spectrum eigenvalues(const Circulant& c) {
  const std::size_t k = c.size();
  auto w = roots_of_unity(k);
  auto row = c.row();
  Spectrum eta(k);
  for (std::size_t m = 0; m < k; ++m) {
    cplx s = 0.0;
    for (std::size_t l = 0; l < k; ++l) s += row[l] * w[(m * l) % k];
    eta[m] = s;
  }
  return eta;
}

Eigen::MatrixXcd eigenvector_matrix(std::size_t k) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be positive");
  auto w = roots_of_unity(k);
  const double s = 1.0 / std::sqrt(static_cast<double>(k));
  Eigen::MatrixXcd p(k, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t m = 0; m < k; ++m) p(j, m) = s * w[(m * j) % k];
  return p;
}

std::vector<cplx> to_modes(std::span<const cplx> v) {
  const std::size_t k = v.size();
  auto w = roots_of_unity(k);
  const double s = 1.0 / std::sqrt(static_cast<double>(k));
  std::vector<cplx> y(k);
  for (std::size_t m = 0; m < k; ++m) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < k; ++j) acc += std::conj(w[(m * j) % k]) * v[j];
    y[m] = s * acc;
  }
  return y;
}

std::vector<cplx> from_modes(std::span<const cplx> y) {
  const std::size_t k = y.size();
  auto w = roots_of_unity(k);
  const double s = 1.0 / std::sqrt(static_cast<double>(k));
  std::vector<cplx> v(k);
  for (std::size_t j = 0; j < k; ++j) {
    cplx acc = 0.0;
    for (std::size_t m = 0; m < k; ++m) acc += w[(m * j) % k] * y[m];
    v[j] = s * acc;
  }
  return v;
}

CirculantSolution solve(const Circulant& c, std::span<const cplx> rhs, double kernel_tol) {
  const std::size_t k = c.size();
  if (rhs.size() != k) throw Error(ErrorCode::InvalidArgument, "rhs length differs from circulant size");
  if (!(kernel_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "kernel_tol must be positive");
  Spectrum eta = eigenvalues(c);
  double scale = 0.0;
  for (const cplx& e : eta) scale = std::max(scale, std::abs(e));
  if (scale == 0.0) throw Error(ErrorCode::AllModesDegenerate, "zero circulant");
  auto h = to_modes(rhs);
  double rhs_scale = 0.0;
  for (const cplx& z : h) rhs_scale = std::max(rhs_scale, std::abs(z));
  CirculantSolution out;
  std::vector<cplx> y(k);
  for (std::size_t m = 0; m < k; ++m) {
    if (std::abs(eta[m]) <= kernel_tol * scale) {
      if (std::abs(h[m]) > kernel_tol * std::max(1.0, rhs_scale))
        throw Error(ErrorCode::InconsistentRhs, "rhs has component " + std::to_string(std::abs(h[m])) +
                                                    " on kernel mode " + std::to_string(m));
      out.kernel_modes.push_back(m);
      y[m] = 0.0;
    } else {
      y[m] = h[m] / eta[m];
    }
  }
  if (out.kernel_modes.size() == k) throw Error(ErrorCode::AllModesDegenerate, "every mode is degenerate");
  out.particular = from_modes(y);
  return out;
}

}  // namespace nodal
