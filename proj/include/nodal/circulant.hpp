#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace nodal {

using cplx = std::complex<double>;
using Spectrum = std::vector<cplx>;

// e^{2 pi i j / k} for j = 0..k-1, with exact conjugate symmetry w[k-j] = conj(w[j]).
std::vector<cplx> roots_of_unity(std::size_t k);

// k x k circulant: entry(i, j) = row[(j - i) mod k].
class Circulant {
 public:
  explicit Circulant(std::vector<cplx> row);
  static Circulant from_real(std::span<const double> row);

  std::size_t size() const noexcept { return row_.size(); }
  std::span<const cplx> row() const noexcept { return row_; }
  cplx entry(std::size_t i, std::size_t j) const;

  Eigen::MatrixXcd dense() const;
  Circulant transpose() const;
  Circulant operator+(const Circulant& other) const;
  Circulant operator*(const Circulant& other) const;  // circulants commute

  std::vector<cplx> apply(std::span<const cplx> v) const;

 private:
  std::vector<cplx> row_;
};

// eta_m = sum_l row[l] e^{2 pi i m l / k}, direct O(k^2) sum
Spectrum eigenvalues(const Circulant& c);

// column m is k^{-1/2} (e^{2 pi i m j / k})_j; unitary
Eigen::MatrixXcd eigenvector_matrix(std::size_t k);

// coordinates in the eigenvector basis: P^* v
std::vector<cplx> to_modes(std::span<const cplx> v);
// back to the standard basis: P y
std::vector<cplx> from_modes(std::span<const cplx> y);

struct CirculantSolution {
  std::vector<cplx> particular;              // minimal norm
  std::vector<std::size_t> kernel_modes;     // free directions, as mode indices
};

// A mode is a kernel mode when |eta_m| <= kernel_tol * max |eta|.
CirculantSolution solve(const Circulant& c, std::span<const cplx> rhs, double kernel_tol = 1e-10);

}  // namespace nodal
