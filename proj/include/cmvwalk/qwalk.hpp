#pragma once

// Coined quantum walks on the half-line and their CMV form.
//
// Basis order: phi_0 = delta_0 (x) e_down, phi_{2m-1} = delta_m (x) e_up,
// phi_{2m} = delta_m (x) e_down. Walk site of basis index n is ceil(n / 2).

#include <cstddef>
#include <span>
#include <vector>

#include "cmvwalk/cmv.hpp"
#include "cmvwalk/coin.hpp"
#include "cmvwalk/dynamics.hpp"
#include "cmvwalk/sparse_model.hpp"

namespace cmvwalk {

inline std::size_t walk_site(std::size_t basis_index) { return (basis_index + 1) / 2; }

class WalkOperator {
 public:
  explicit WalkOperator(CoinSequence coins) : coins_(std::move(coins)) {}

  const CoinSequence& coins() const { return coins_; }

  /// U psi computed from the update rule. The output capacity is at least psi.frontier + 3.
  StateVector apply(const StateVector& psi) const;

  /// <phi_i, U phi_j>.
  cplx entry(std::size_t i, std::size_t j) const;

 private:
  CoinSequence coins_;
};

/// Throws DomainError if any coin is not unitary to within 1e-14.
WalkOperator build_walk(CoinSequence coins);

/// Verblunsky sequence with alpha_{2m} = 0 and alpha_{2m-1} = conj(c21_m), rho_{2m-1} = c22_m.
/// Requires every coin to have c11 = c22 real and positive; other coins need
/// gauge_transform (UnsupportedError).
VerblunskySequence coins_to_cmv(const CoinSequence& coins);

/// Diagonal unimodular Lambda with Lambda(0) = 1 such that Lambda^* U Lambda is the CMV
/// matrix of `seq`.
struct GaugeTransform {
  VerblunskySequence seq;
  std::vector<cplx> phases;  // basis indices 0 .. 2K+1; constant per parity beyond

  cplx phase(std::size_t basis_index) const;
};

/// Phases are fixed greedily block by block so that every rho-entry becomes real
/// and positive. Throws DomainError for coins with c22 = 0 (perfect reflectors),
/// which have no CMV counterpart with rho > 0.
GaugeTransform gauge_transform(const CoinSequence& coins);

/// Moment curve of the sparse-coin walk, measured in walk sites.
MomentCurve walk_exponents(const SparseSpec& spec, double p, std::span<const double> times);

}  // namespace cmvwalk
