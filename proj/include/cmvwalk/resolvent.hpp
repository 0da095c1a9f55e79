#pragma once

// Resolvent (C - z)^{-1} delta_0 outside the unit circle, the Caratheodory
// function, and the Poisson-kernel integrals built on them.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "cmvwalk/cmv.hpp"
#include "cmvwalk/dynamics.hpp"

namespace cmvwalk {

inline constexpr std::size_t kMaxResolventWindow = std::size_t{1} << 22;

enum class ResolventMethod { ExactTail, Windowed };

/// u = (C - z)^{-1} delta_0 and v = M u.
///
/// Stored entries cover 0..window. With the exact tail, beyond the window u
/// vanishes on even sites and is multiplied by 1/z every two odd sites; v does
/// the same with the parities swapped. Windowed solutions are zero beyond.
class ResolventSolution {
 public:
  cplx z;
  ResolventMethod method = ResolventMethod::ExactTail;
  std::vector<cplx> u, v;  // size window + 1
  /// Bound on the l2 distance between the returned u and the true resolvent column.
  double error_bound = 0.0;
  /// Residual ||(C - z) u - delta_0|| over the stored window.
  double residual = 0.0;

  std::size_t window() const { return u.size() - 1; }
  cplx u_at(std::int64_t n) const;
  cplx v_at(std::int64_t n) const;
  /// ||u||^2 including the geometric tail.
  double norm_sq() const;
};

/// Exact-tail solve. Requires |z| > 1 (DomainError) and no nonzero coefficient
/// beyond support_end (PreconditionError). The linear system covers
/// sites 0..W-1 with W the smallest even number >= support_end + 2; rows past
/// W are satisfied by the geometric closure. Throws ResourceError for windows
/// above kMaxResolventWindow sites.
ResolventSolution solve_resolvent(const VerblunskySequence& seq, cplx z, std::int64_t support_end);
/// Uses seq.support_end().
ResolventSolution solve_resolvent(const VerblunskySequence& seq, cplx z);

/// Plain truncation to sites 0..window-1 with zero continuation. The error
/// bound is ||R(z)|| <= 1/(|z| - 1) times the residual leaking past the window.
ResolventSolution solve_resolvent_windowed(const VerblunskySequence& seq, cplx z, std::size_t window);

/// C_N for the largest barrier index <= horizon (the zero sequence if none).
VerblunskySequence truncate_at_horizon(const VerblunskySequence& seq, std::int64_t horizon);

/// F(z) = 1 + 2 z u(0).
inline cplx caratheodory(const ResolventSolution& sol) { return 1.0 + 2.0 * sol.z * sol.u[0]; }

/// ||R_a(z) delta_0 - R_b(z) delta_0|| with both tails included.
double resolvent_difference_norm(const ResolventSolution& a, const ResolventSolution& b);

/// (1 - r^2) / (1 - 2 r Re tau + r^2). Throws DomainError unless 0 <= r < 1.
double poisson_kernel(double r, cplx tau);

struct CircleGrid {
  double epsilon = 0.1;
  std::size_t n_theta = 4096;

  /// Throws ValidationError unless epsilon > 0 and n_theta is a power of two.
  void validate() const;
  double theta(std::size_t m) const;
  cplx node(std::size_t m) const;  // e^{i theta_m + epsilon}
};

struct QuadratureResult {
  double value = 0.0;
  std::size_t n_theta = 0;
  /// |value(n_theta) - value(n_theta / 2)|; 0 for a single evaluation.
  double change = 0.0;
};

/// Trapezoid mean of f over the grid nodes, reduced in index order.
double circle_mean(const CircleGrid& grid, const std::function<double(cplx)>& f, unsigned threads = 1);

/// Doubles n_theta starting from grid.n_theta until successive means differ by
/// less than tol or n_max is reached.
QuadratureResult circle_mean_adaptive(CircleGrid grid, const std::function<double(cplx)>& f,
                                      double tol = 1e-10, std::size_t n_max = std::size_t{1} << 20,
                                      unsigned threads = 1);

/// Mean of Re F over the circle |z| = e^epsilon (adaptive from grid.n_theta).
QuadratureResult caratheodory_mean(const VerblunskySequence& seq, const CircleGrid& grid,
                                   unsigned threads = 1);

/// J(eps) from a stored record: the time-averaged return probability at T = 1/eps.
double return_integral_J(const EvolutionRecord& rec, double epsilon);
/// J(eps) by streaming evolution.
double return_integral_J(const VerblunskySequence& seq, double epsilon);

/// I(eps) = (1 - e^{-2 eps}) * mean of (Re F)^2 on |z| = e^eps (adaptive).
QuadratureResult autocorrelation_integral_I(const VerblunskySequence& seq, const CircleGrid& grid,
                                            unsigned threads = 1);

struct ParsevalCheck {
  double lhs = 0.0;  // atilde(n, T) from the time sum
  double rhs = 0.0;  // (e^{2/T} - 1) * mean |u_n|^2 on |z| = e^{1/T}
  double discrepancy = 0.0;
  std::size_t n_theta = 0;
};

/// grid.epsilon is ignored; the circle radius is e^{1/T}. The time-sum side
/// evolves until the Abel tail is below 1e-16.
ParsevalCheck parseval_check(const VerblunskySequence& seq, std::int64_t n, double T,
                             const CircleGrid& grid, unsigned threads = 1);

}  // namespace cmvwalk
