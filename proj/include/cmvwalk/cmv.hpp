#pragma once

// Half-line CMV operators built from Verblunsky coefficients.
//
// The operator is kept in factored form C = L M, where L is the direct sum of
// Theta(alpha_0), Theta(alpha_2), ... and M is 1 (+) Theta(alpha_1) (+) Theta(alpha_3) ...
// Both factors are applied as block sweeps; explicit entries are available for
// checks but are never used on the hot path.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cmvwalk/mat2.hpp"

namespace cmvwalk {

/// A Verblunsky coefficient alpha in the open unit disk together with
/// rho = sqrt(1 - |alpha|^2).
///
/// Near the unit circle rho cannot be recovered from alpha without
/// cancellation, so constructors that know rho exactly take it directly.
class DiskCoefficient {
 public:
  constexpr DiskCoefficient() = default;

  /// Throws DomainError unless |alpha| < 1.
  static DiskCoefficient from_alpha(cplx alpha);

  /// alpha = phase * sqrt(1 - rho^2). Throws DomainError unless 0 < rho <= 1 and |phase| = 1.
  static DiskCoefficient from_rho(double rho, cplx phase = 1.0);

  /// Accepts a pair that already satisfies |alpha|^2 + rho^2 = 1 to within `tol`.
  static DiskCoefficient from_pair(cplx alpha, double rho, double tol = 1e-13);

  cplx alpha() const { return alpha_; }
  double rho() const { return rho_; }
  bool is_zero() const { return alpha_ == cplx{} && rho_ == 1.0; }

  /// lambda * alpha with rho unchanged; |lambda| = 1.
  DiskCoefficient rotated(cplx lambda) const;

  friend bool operator==(const DiskCoefficient&, const DiskCoefficient&) = default;

 private:
  constexpr DiskCoefficient(cplx a, double r) : alpha_(a), rho_(r) {}
  cplx alpha_{};
  double rho_ = 1.0;
};

/// Theta(alpha) = [[conj(alpha), rho], [rho, -alpha]].
Mat2 theta_block(const DiskCoefficient& c);
/// Throws DomainError when |alpha| >= 1.
Mat2 theta_block(cplx alpha);

struct Barrier {
  std::int64_t index;
  DiskCoefficient coeff;
};

/// A Verblunsky sequence (alpha_n)_{n >= 0}: an optional dense head, a sorted
/// list of isolated nonzero entries ("barriers"), zero elsewhere, and a
/// unimodular boundary phase lambda multiplying every alpha.
class VerblunskySequence {
 public:
  VerblunskySequence() = default;

  static VerblunskySequence zero() { return {}; }
  static VerblunskySequence explicit_list(std::vector<DiskCoefficient> head);
  /// Indices must be strictly increasing and nonnegative.
  static VerblunskySequence sparse(std::vector<Barrier> barriers);

  /// Copy with every alpha multiplied by lambda (composes with an existing phase).
  VerblunskySequence with_phase(cplx lambda) const;

  DiskCoefficient entry(std::int64_t n) const;
  DiskCoefficient operator[](std::int64_t n) const { return entry(n); }

  /// Largest index whose coefficient is nonzero, or -1 for the zero sequence.
  std::int64_t support_end() const;

  std::span<const DiskCoefficient> head() const { return head_; }
  std::span<const Barrier> barriers() const { return barriers_; }
  cplx phase() const { return phase_; }
  bool is_zero() const { return support_end() < 0; }

  /// Copy that keeps the coefficients with index <= last and zeroes the rest.
  VerblunskySequence truncated_after(std::int64_t last) const;

 private:
  std::vector<DiskCoefficient> head_;
  std::vector<Barrier> barriers_;
  cplx phase_ = 1.0;
};

/// Keeps the first N barriers (alpha_{N,n} = alpha_n for n <= L_N, 0 beyond).
/// Throws PreconditionError for sequences with a dense head and RangeError when
/// N exceeds the number of barriers. truncate(zero, N) is zero.
VerblunskySequence truncate(const VerblunskySequence& seq, std::size_t N);

/// Finite complex amplitude vector over sites 0..capacity-1 with an implicit
/// zero tail. Every amplitude above `frontier` is exactly zero.
struct StateVector {
  std::vector<cplx> amplitudes;
  std::size_t frontier = 0;

  StateVector() = default;
  explicit StateVector(std::size_t capacity) : amplitudes(capacity) {}

  /// delta_n in a buffer of the given capacity.
  static StateVector delta(std::size_t n, std::size_t capacity);
  /// Frontier is set to the last nonzero entry.
  static StateVector from_amplitudes(std::vector<cplx> amps);

  cplx operator[](std::size_t n) const { return n < amplitudes.size() ? amplitudes[n] : cplx{}; }
  std::size_t capacity() const { return amplitudes.size(); }
  void grow(std::size_t capacity);
  double norm_sq() const;
};

class CmvOperator {
 public:
  /// Materializes the coefficients for sites 0..size-1.
  CmvOperator(const VerblunskySequence& seq, std::size_t size);

  std::size_t size() const { return coeffs_.size(); }
  const VerblunskySequence& sequence() const { return seq_; }
  const DiskCoefficient& coeff(std::size_t n) const { return coeffs_[n]; }

  /// Entry (i, j) of the half-line CMV matrix in its explicit pentadiagonal form.
  cplx entry(std::size_t i, std::size_t j) const;

  /// C v. Requires v.frontier + 2 < size(); throws TruncationOverflow otherwise.
  StateVector apply(const StateVector& v) const;
  /// C^* v, same window requirement.
  StateVector apply_adjoint(const StateVector& v) const;

  /// In-place variant used by the evolution loop: out = C v, with `scratch`
  /// holding M v. `out` and `scratch` are resized as needed.
  void apply_into(const StateVector& v, StateVector& out, StateVector& scratch) const;

 private:
  void check_window(const StateVector& v) const;

  VerblunskySequence seq_;
  std::vector<DiskCoefficient> coeffs_;
};

/// Throws PreconditionError when size < 2.
CmvOperator build_cmv(const VerblunskySequence& seq, std::size_t size);

inline StateVector apply(const CmvOperator& op, const StateVector& v) { return op.apply(v); }
inline StateVector apply_adjoint(const CmvOperator& op, const StateVector& v) {
  return op.apply_adjoint(v);
}

/// (C - C_N) phi in closed form: a sum of two-site corrections around each
/// barrier L_k with k > N. Requires L_{k+1} >= L_k + 2 for every k >= N
/// (PreconditionError otherwise). The result has capacity phi.capacity() + 3.
StateVector operator_difference_apply(const VerblunskySequence& seq, std::size_t N,
                                      const StateVector& phi);

}  // namespace cmvwalk
