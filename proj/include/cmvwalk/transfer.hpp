#pragma once

// Gesztesy-Zinchenko and Szego transfer matrices, orthogonal polynomial pairs
// and local l2 norms.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cmvwalk/cmv.hpp"
#include "cmvwalk/mat2.hpp"
#include "cmvwalk/sparse_model.hpp"

namespace cmvwalk {

using TransferMatrix = Mat2;

/// A matrix held as e^{log_scale} * m. Products renormalize whenever the
/// Frobenius norm of m exceeds 1e150.
struct ScaledMatrix {
  Mat2 m = Mat2::identity();
  double log_scale = 0.0;

  void left_multiply(const Mat2& step);
  /// m * e^{log_scale}; may overflow to inf.
  Mat2 value() const;
  /// log of the operator norm.
  double log_norm() const;
};

/// P(alpha, z) = (1/rho) [[-alpha, 1/z], [z, -conj(alpha)]]. DomainError for z = 0.
TransferMatrix gz_p(const DiskCoefficient& c, cplx z);
/// Q(alpha, z) = (1/rho) [[-conj(alpha), 1], [1, -alpha]]. DomainError for z = 0.
TransferMatrix gz_q(const DiskCoefficient& c, cplx z);
/// Y(n, z): P(alpha_n, z) at even n, Q(alpha_n, z) at odd n.
TransferMatrix gz_step(const VerblunskySequence& seq, std::int64_t n, cplx z);

/// Z(n, m; z) = Y(n-1) ... Y(m) for n > m, identity for n = m, Z(m, n)^{-1} for n < m.
ScaledMatrix gz_cocycle_scaled(const VerblunskySequence& seq, std::int64_t n, std::int64_t m, cplx z);
TransferMatrix gz_cocycle(const VerblunskySequence& seq, std::int64_t n, std::int64_t m, cplx z);

struct GzProfile {
  std::vector<double> log_norm;   // log ||Z(n, 0; z)|| for n = 0..n_max
  std::vector<double> log_bound;  // sum_{k < n} log ||Y(k, z)||
};

GzProfile gz_norm_profile(const VerblunskySequence& seq, cplx z, std::int64_t n_max);

/// S(alpha, z) = (1/rho) [[z, -conj(alpha)], [-alpha z, 1]].
TransferMatrix szego_step(const DiskCoefficient& c, cplx z);

/// T(n, 0; z) = S(alpha_{n-1}, z) ... S(alpha_0, z). Runs of zero coefficients
/// are applied in one step as diag(z^k, 1), so cost scales with the number of
/// nonzero coefficients below n.
ScaledMatrix szego_t_scaled(const VerblunskySequence& seq, std::int64_t n, cplx z);
TransferMatrix szego_t(const VerblunskySequence& seq, std::int64_t n, cplx z);

struct PolynomialPair {
  cplx phi, phi_star, psi, psi_star;
};

/// (phi_n, phi*_n) = T(n, 0; z)(1, 1), (psi_n, psi*_n) = T(n, 0; z)(1, -1).
PolynomialPair opuc_pair(const VerblunskySequence& seq, std::int64_t n, cplx z);

/// opuc_pair for n = 0..n_max in one pass.
std::vector<PolynomialPair> opuc_pairs(const VerblunskySequence& seq, std::int64_t n_max, cplx z);

struct LocalNorm {
  double m = 0.0;
  double value = 0.0;  // ||a||_m^2
};

/// ||a||_m^2 = sum_{j <= floor(m)} a_j + frac(m) a_{floor(m)+1}, where `abs_sq`
/// holds |a_j|^2. Throws PreconditionError for m < 0 and RangeError when an
/// entry with nonzero weight is missing.
LocalNorm local_norm(std::span<const double> abs_sq, double m);

struct SubordinacyReport {
  double beta = 0.0;  // eta / (2 - eta)
  std::vector<double> m_grid;
  std::vector<double> ratios;       // ||phi||_m^2 / ||psi||_m^{2 (beta - delta)}
  std::vector<double> running_min;  // min of ratios[0..k]
};

/// Requires |z| = 1 and 0 < delta < beta (PreconditionError).
SubordinacyReport subordinacy_ratio(const SparseSpec& spec, cplx z, double delta,
                                    std::span<const double> m_grid);

}  // namespace cmvwalk
