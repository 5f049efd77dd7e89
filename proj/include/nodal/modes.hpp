#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nodal/interaction.hpp"

namespace nodal {

enum class CaseTag { Kernel0, Kernel1, Regular };
const char* to_string(CaseTag tag) noexcept;

// Per-mode 3x3 block on the normalised scale (divide right-hand sides by
// cfg.scale() before solving).
struct ModeBlock {
  int m = 0;
  ModeCoefficients coeffs;
  Eigen::Matrix3cd full;     // rows/cols act on (y0, y1, y2)
  Eigen::Matrix3cd reduced;  // acts on (y0 - y1, y1, y2), rhs (h0, h0 + h1, h2)
  double ell = 0.0;
  double margin = 0.0;       // |ell| over the product of reduced row norms
  CaseTag case_tag = CaseTag::Regular;
};

ModeBlock build_block(const ModeCoefficients& coeffs, int k);

struct EllEntry {
  int m = 0;
  double ell = 0.0;
  double margin = 0.0;
  int sign = 0;
};

struct EllScan {
  int n = 0, k = 0;
  std::vector<EllEntry> entries;
  std::vector<int> nonnegative;  // offending m in [2, k-2]
  bool symmetric = true;         // ell(m) == ell(k-m) for all m
  double min_margin = 0.0;       // over m in [2, k-2]
};

EllScan ell_scan(const Configuration& cfg);

struct BlockSolution {
  Eigen::Vector3cd y = Eigen::Vector3cd::Zero();
  std::optional<Eigen::Vector3cd> kernel;
};

// rhs already on the normalised scale. Throws InconsistentRhs when the
// Fredholm condition of a degenerate mode fails by more than tol * |rhs|,
// SingularRegularBlock when a Regular block has margin below resonance_tol.
BlockSolution solve_block(const ModeBlock& block, const Eigen::Vector3cd& rhs, double tol = 1e-9,
                          double resonance_tol = 1e-12);

struct BlockSolveResult {
  Eigen::VectorXd particular;               // stacked (w0, w1, w2) or a single k-vector
  std::vector<Eigen::VectorXd> kernel_basis;
  int free_parameters = 0;
  double imaginary_residue = 0.0;           // max |Im| before taking the real part
  double estimate_ratio = 0.0;              // |w| k^n mu^{n-2} / |s|
};

// Solves N w = s with N = [[A, B, C], [B, F, D], [-C, -D, G]].
BlockSolveResult solve_N(const Configuration& cfg, std::span<const double> s0, std::span<const double> s1,
                         std::span<const double> s2, double tol = 1e-9);

// Solves H_alpha w = s; the leading-order H is the same for every alpha in 3..n.
BlockSolveResult solve_H(const Configuration& cfg, int alpha, std::span<const double> s, double tol = 1e-9);

Eigen::MatrixXd assemble_N(const Configuration& cfg);
Eigen::MatrixXd assemble_H(const Configuration& cfg);

}  // namespace nodal
