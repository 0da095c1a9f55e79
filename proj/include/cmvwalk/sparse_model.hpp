#pragma once

// Sparse high-barrier Verblunsky sequences and the matching walk coins.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "cmvwalk/cmv.hpp"
#include "cmvwalk/coin.hpp"

namespace cmvwalk {

struct SparseSpec {
  double eta = 0.5;
  std::vector<std::int64_t> lengths;  // L_1 < L_2 < ...
  cplx lambda_phase = 1.0;

  /// Throws ValidationError on eta outside (0,1), non-increasing or non-positive lengths,
  /// or a non-unimodular phase.
  void validate() const;
};

/// L_j = base^{j!} for j = 1, 2, ... while the value fits below 2^62.
std::vector<std::int64_t> log_factorial_lengths(std::int64_t base = 2,
                                                std::size_t max_terms = std::numeric_limits<std::size_t>::max());

/// eta with the default lengths (2, 4, 64, 2^24).
SparseSpec default_sparse_spec(double eta = 0.5);

/// Barrier height exponent (1 - eta) / (2 eta).
inline double barrier_exponent(double eta) { return (1.0 - eta) / (2.0 * eta); }

/// Asymptotic lower transport exponent (p + 1) / (p + 1/eta).
inline double theory_beta_minus(double p, double eta) { return (p + 1.0) / (p + 1.0 / eta); }

/// nu_N = log(L_1 ... L_{N-1}) / log L_N, computed in log space; nu_1 = 0.
double nu(const SparseSpec& spec, std::size_t N);

/// rho = L^{-(1-eta)/(2 eta)} taken directly, alpha = sqrt(1 - rho^2) >= 0.
DiskCoefficient barrier_coefficient(std::int64_t L, double eta);

/// alpha_n = lambda * barrier_coefficient(L_j) at n = L_j, zero elsewhere.
VerblunskySequence verblunsky(const SparseSpec& spec);

struct CoinSpec {
  std::vector<std::int64_t> sites;       // walk sites L_j
  std::vector<double> reflectivities;    // r_j = (2 L_j - 1)^{-(1-eta)/(2 eta)}
  CoinSequence coins;                    // rotation(r_j) at L_j, identity elsewhere
};

CoinSpec coin_sequence(const SparseSpec& spec);

}  // namespace cmvwalk
