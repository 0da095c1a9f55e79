#pragma once

// Time evolution of delta_0 and exponentially time-averaged transport statistics.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cmvwalk/cmv.hpp"

namespace cmvwalk {

/// Tail tolerance for the truncated Abel sum.
inline constexpr double kTailTolerance = 1e-16;

/// Default memory budget for stored evolution records.
inline constexpr std::size_t kDefaultRecordBudgetBytes = std::size_t{1} << 30;

/// Smallest t_max whose discarded Abel weight at scale T is below 1e-16:
/// ceil(T ln(1e16) / 2).
std::int64_t required_t_max(double T);

/// Steps C^t delta_0 forward, doubling the operator window whenever the
/// frontier gets within 4 sites of its edge.
class Evolver {
 public:
  explicit Evolver(const VerblunskySequence& seq, std::size_t initial_size = 64);

  std::int64_t time() const { return t_; }
  const StateVector& state() const { return state_; }
  void step();

 private:
  VerblunskySequence seq_;
  CmvOperator op_;
  StateVector state_, next_, scratch_;
  std::int64_t t_ = 0;
};

/// Amplitudes C^t delta_0 (n) for 0 <= t <= t_max, stored row by row over the
/// light cone n <= 2t.
class EvolutionRecord {
 public:
  std::int64_t t_max() const { return static_cast<std::int64_t>(offsets_.size()) - 2; }
  /// Largest n that may be nonzero at time t (the row length minus one).
  std::size_t row_end(std::int64_t t) const;
  std::span<const cplx> row(std::int64_t t) const;
  /// Zero outside the stored light cone.
  cplx amplitude(std::int64_t n, std::int64_t t) const;
  double probability(std::int64_t n, std::int64_t t) const { return std::norm(amplitude(n, t)); }

 private:
  friend EvolutionRecord evolve(const VerblunskySequence&, std::int64_t, std::size_t);
  std::vector<cplx> data_;
  std::vector<std::size_t> offsets_;  // row t occupies [offsets_[t], offsets_[t+1])
  std::size_t total_ = 0;
};

/// Bytes needed to store a record up to t_max.
std::size_t record_bytes(std::int64_t t_max);

/// Throws PreconditionError for t_max < 0 and ResourceError (with the largest
/// feasible t_max) when the record would exceed `budget_bytes`.
EvolutionRecord evolve(const VerblunskySequence& seq, std::int64_t t_max,
                       std::size_t budget_bytes = kDefaultRecordBudgetBytes);

struct TimeAverage {
  double T = 0.0;
  std::vector<double> atilde;  // over n = 0 .. atilde.size()-1, zero beyond
  double tail_bound = 0.0;     // e^{-2 t_max / T}
};

/// atilde(n, T) = (1 - e^{-2/T}) sum_t e^{-2t/T} a(n, t), summed up to the record's t_max.
/// Throws PreconditionError if T <= 0 or rec.t_max() < required_t_max(T).
TimeAverage time_averaged_prob(const EvolutionRecord& rec, double T);

/// Streaming variant: evolves once up to the largest required t_max and keeps
/// only O(sites) memory per T.
std::vector<TimeAverage> time_averages(const VerblunskySequence& seq, std::span<const double> Ts);

/// Sum of atilde(n) over n >= M (strict set, no interpolation). M must be > 0.
double outside_prob(const TimeAverage& ta, double M);
/// Sum of atilde(n) over n < M.
double inside_prob(const TimeAverage& ta, double M);

enum class Observable {
  CmvSite,   // position n
  WalkSite,  // position ceil(n / 2)
};

/// sum_n (x(n)^p + 1) atilde(n) in descending n with compensated summation.
/// Throws PreconditionError for p <= 0 and RangeError when a weight overflows.
double moment(const TimeAverage& ta, double p, Observable obs = Observable::CmvSite);

struct MomentCurve {
  double p = 1.0;
  Observable observable = Observable::CmvSite;
  std::vector<double> times;
  std::vector<double> moments;
  /// log moment / (p log T); NaN at T = 1 where the slope is undefined.
  std::vector<double> slopes;
  /// Proxy window: the trailing half of the grid in log T.
  double window_lo = 0.0, window_hi = 0.0;
  double beta_minus_proxy = 0.0, beta_plus_proxy = 0.0;
  std::optional<double> theory_beta_minus;
};

/// Normalized slope log(m) / (p log T); NaN when T == 1.
double normalized_slope(double moment_value, double p, double T);

/// Moment curves for several p on one time grid from a single evolution.
/// Moments come from the Abel sum of instantaneous moments
/// m_p(t) = sum_n (x(n)^p + 1) |psi_t(n)|^2, which equals the moment of the
/// time-averaged distribution without storing it.
std::vector<MomentCurve> moment_curves(const VerblunskySequence& seq, std::span<const double> ps,
                                       std::span<const double> times,
                                       Observable obs = Observable::CmvSite);

/// Throws PreconditionError for an empty or non-increasing grid or T <= 0.
MomentCurve exponent_curve(const VerblunskySequence& seq, double p, std::span<const double> times,
                           Observable obs = Observable::CmvSite);

/// count points spaced evenly in log between lo and hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, std::size_t count);

}  // namespace cmvwalk
