#include "cmvwalk/cmv.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cmvwalk/errors.hpp"
#include "cmvwalk/summation.hpp"

namespace cmvwalk {

namespace {

bool is_unimodular(cplx z) { return std::abs(std::abs(z) - 1.0) <= 1e-14; }

}  // namespace

DiskCoefficient DiskCoefficient::from_alpha(cplx alpha) {
  const double m = std::abs(alpha);
  if (!(m < 1.0)) {
    throw DomainError("Verblunsky coefficient must satisfy |alpha| < 1, got |alpha| = " +
                      std::to_string(m));
  }
  return {alpha, std::sqrt((1.0 - m) * (1.0 + m))};
}

DiskCoefficient DiskCoefficient::from_rho(double rho, cplx phase) {
  if (!(rho > 0.0 && rho <= 1.0)) {
    throw DomainError("rho must lie in (0, 1], got " + std::to_string(rho));
  }
  if (!is_unimodular(phase)) throw DomainError("coefficient phase must be unimodular");
  return {phase * std::sqrt((1.0 - rho) * (1.0 + rho)), rho};
}

DiskCoefficient DiskCoefficient::from_pair(cplx alpha, double rho, double tol) {
  if (!(std::abs(alpha) < 1.0) || !(rho > 0.0 && rho <= 1.0)) {
    throw DomainError("(alpha, rho) pair outside the open disk");
  }
  if (std::abs(std::norm(alpha) + rho * rho - 1.0) > tol) {
    throw DomainError("(alpha, rho) pair violates |alpha|^2 + rho^2 = 1");
  }
  return {alpha, rho};
}

DiskCoefficient DiskCoefficient::rotated(cplx lambda) const {
  if (!is_unimodular(lambda)) throw DomainError("rotation phase must be unimodular");
  return {lambda * alpha_, rho_};
}

Mat2 theta_block(const DiskCoefficient& c) {
  const cplx a = c.alpha();
  const double r = c.rho();
  return {std::conj(a), r, r, -a};
}

Mat2 theta_block(cplx alpha) { return theta_block(DiskCoefficient::from_alpha(alpha)); }

VerblunskySequence VerblunskySequence::explicit_list(std::vector<DiskCoefficient> head) {
  VerblunskySequence s;
  s.head_ = std::move(head);
  return s;
}

VerblunskySequence VerblunskySequence::sparse(std::vector<Barrier> barriers) {
  for (std::size_t i = 0; i < barriers.size(); ++i) {
    if (barriers[i].index < 0) throw RangeError("barrier index must be nonnegative");
    if (i > 0 && barriers[i].index <= barriers[i - 1].index) {
      throw RangeError("barrier indices must be strictly increasing");
    }
  }
  VerblunskySequence s;
  s.barriers_ = std::move(barriers);
  return s;
}

VerblunskySequence VerblunskySequence::with_phase(cplx lambda) const {
  if (!is_unimodular(lambda)) throw DomainError("boundary phase must be unimodular");
  VerblunskySequence s = *this;
  s.phase_ *= lambda;
  return s;
}

DiskCoefficient VerblunskySequence::entry(std::int64_t n) const {
  DiskCoefficient c;
  if (n < 0) return c;
  if (static_cast<std::uint64_t>(n) < head_.size()) {
    c = head_[static_cast<std::size_t>(n)];
  } else if (!barriers_.empty()) {
    auto it = std::lower_bound(barriers_.begin(), barriers_.end(), n,
                               [](const Barrier& b, std::int64_t k) { return b.index < k; });
    if (it != barriers_.end() && it->index == n) c = it->coeff;
  }
  if (phase_ != cplx{1.0} && !c.is_zero()) c = c.rotated(phase_);
  return c;
}

std::int64_t VerblunskySequence::support_end() const {
  for (auto it = barriers_.rbegin(); it != barriers_.rend(); ++it) {
    if (!it->coeff.is_zero()) return it->index;
  }
  for (std::size_t i = head_.size(); i-- > 0;) {
    if (!head_[i].is_zero()) return static_cast<std::int64_t>(i);
  }
  return -1;
}

VerblunskySequence VerblunskySequence::truncated_after(std::int64_t last) const {
  VerblunskySequence s;
  s.phase_ = phase_;
  if (last < 0) return s;
  const auto keep = std::min<std::size_t>(head_.size(), static_cast<std::size_t>(last) + 1);
  s.head_.assign(head_.begin(), head_.begin() + static_cast<std::ptrdiff_t>(keep));
  for (const auto& b : barriers_) {
    if (b.index > last) break;
    s.barriers_.push_back(b);
  }
  return s;
}

VerblunskySequence truncate(const VerblunskySequence& seq, std::size_t N) {
  if (seq.is_zero()) return seq;
  if (!seq.head().empty()) {
    throw PreconditionError("truncate: expected a sparse-model sequence (no dense head)");
  }
  if (N < 1) throw RangeError("truncate: N must be at least 1");
  const auto b = seq.barriers();
  if (N > b.size()) {
    throw RangeError("truncate: N = " + std::to_string(N) + " exceeds the " +
                     std::to_string(b.size()) + " available barriers");
  }
  return seq.truncated_after(b[N - 1].index);
}

StateVector StateVector::delta(std::size_t n, std::size_t capacity) {
  if (n >= capacity) throw RangeError("delta index outside state capacity");
  StateVector v(capacity);
  v.amplitudes[n] = 1.0;
  v.frontier = n;
  return v;
}

StateVector StateVector::from_amplitudes(std::vector<cplx> amps) {
  StateVector v;
  v.amplitudes = std::move(amps);
  v.frontier = 0;
  for (std::size_t i = v.amplitudes.size(); i-- > 0;) {
    if (v.amplitudes[i] != cplx{}) {
      v.frontier = i;
      break;
    }
  }
  return v;
}

void StateVector::grow(std::size_t capacity) {
  if (capacity > amplitudes.size()) amplitudes.resize(capacity);
}

double StateVector::norm_sq() const {
  CompensatedSum s;
  const std::size_t top = std::min(frontier + 1, amplitudes.size());
  for (std::size_t i = 0; i < top; ++i) s += std::norm(amplitudes[i]);
  return s.value();
}

CmvOperator::CmvOperator(const VerblunskySequence& seq, std::size_t size) : seq_(seq) {
  if (size < 2) throw PreconditionError("CMV window must retain at least 2 sites");
  coeffs_.resize(size);
  for (std::size_t n = 0; n < size; ++n) coeffs_[n] = seq.entry(static_cast<std::int64_t>(n));
}

CmvOperator build_cmv(const VerblunskySequence& seq, std::size_t size) {
  return CmvOperator(seq, size);
}

cplx CmvOperator::entry(std::size_t i, std::size_t j) const {
  // alpha_{-1} = -1, rho_{-1} = 0 makes row 0 and row 1 fit the generic pattern.
  auto alpha = [&](std::int64_t n) -> cplx {
    if (n < 0) return -1.0;
    return static_cast<std::size_t>(n) < coeffs_.size() ? coeffs_[n].alpha() : seq_.entry(n).alpha();
  };
  auto rho = [&](std::int64_t n) -> double {
    if (n < 0) return 0.0;
    return static_cast<std::size_t>(n) < coeffs_.size() ? coeffs_[n].rho() : seq_.entry(n).rho();
  };
  const auto k2 = static_cast<std::int64_t>(i & ~std::size_t{1});  // 2k
  const auto col = static_cast<std::int64_t>(j);
  const std::int64_t offset = col - k2;  // column relative to 2k
  if (offset < -1 || offset > 2) return 0.0;
  if ((i & 1) == 0) {
    switch (offset) {
      case -1: return std::conj(alpha(k2)) * rho(k2 - 1);
      case 0: return -std::conj(alpha(k2)) * alpha(k2 - 1);
      case 1: return rho(k2) * std::conj(alpha(k2 + 1));
      default: return rho(k2) * rho(k2 + 1);
    }
  }
  switch (offset) {
    case -1: return rho(k2) * rho(k2 - 1);
    case 0: return -rho(k2) * alpha(k2 - 1);
    case 1: return -alpha(k2) * std::conj(alpha(k2 + 1));
    default: return -alpha(k2) * rho(k2 + 1);
  }
}

void CmvOperator::check_window(const StateVector& v) const {
  if (v.frontier + 2 >= size()) {
    throw TruncationOverflow("state frontier " + std::to_string(v.frontier) +
                             " leaves the retained window of " + std::to_string(size()) +
                             " sites");
  }
}

namespace {

// Applies the 2x2 block Theta(c) (or its adjoint) to (x, y).
inline void theta_apply(const DiskCoefficient& c, cplx x, cplx y, cplx& out_x, cplx& out_y) {
  const cplx a = c.alpha();
  const double r = c.rho();
  out_x = std::conj(a) * x + r * y;
  out_y = r * x - a * y;
}

inline void theta_adjoint_apply(const DiskCoefficient& c, cplx x, cplx y, cplx& out_x,
                                cplx& out_y) {
  const cplx a = c.alpha();
  const double r = c.rho();
  out_x = a * x + r * y;
  out_y = r * x - std::conj(a) * y;
}

// Zeroes buf[from..to] (inclusive, clamped).
inline void zero_range(std::vector<cplx>& buf, std::size_t from, std::size_t to) {
  to = std::min(to, buf.size() - 1);
  for (std::size_t i = from; i <= to; ++i) buf[i] = cplx{};
}

}  // namespace

void CmvOperator::apply_into(const StateVector& v, StateVector& out, StateVector& scratch) const {
  check_window(v);
  const std::size_t n = size();
  if (v.capacity() != n) throw PreconditionError("apply_into: state capacity must equal window size");
  if (out.capacity() != n) out = StateVector(n);
  if (scratch.capacity() != n) scratch = StateVector(n);
  const std::size_t f = v.frontier;
  const cplx* x = v.amplitudes.data();
  cplx* w = scratch.amplitudes.data();
  cplx* y = out.amplitudes.data();

  // w = M v on [0, f + 2]
  w[0] = x[0];
  std::size_t wtop = 0;
  for (std::size_t k = 1; k <= f; k += 2) {
    theta_apply(coeffs_[k], x[k], x[k + 1], w[k], w[k + 1]);
    wtop = k + 1;
  }
  zero_range(scratch.amplitudes, wtop + 1, f + 2);

  // out = L w; the support grows to f + 1 (f even) or f + 2 (f odd)
  const std::size_t old_top = out.frontier;
  std::size_t ytop = 0;
  for (std::size_t k = 0; k <= f + 1; k += 2) {
    theta_apply(coeffs_[k], w[k], w[k + 1], y[k], y[k + 1]);
    ytop = k + 1;
  }
  if (old_top > ytop) zero_range(out.amplitudes, ytop + 1, old_top);
  out.frontier = (f % 2 == 1) ? f + 2 : f + 1;
}

StateVector CmvOperator::apply(const StateVector& v) const {
  check_window(v);
  StateVector in(size());
  std::copy_n(v.amplitudes.begin(), std::min(v.frontier + 1, v.capacity()), in.amplitudes.begin());
  in.frontier = v.frontier;
  StateVector out(size()), scratch(size());
  apply_into(in, out, scratch);
  return out;
}

StateVector CmvOperator::apply_adjoint(const StateVector& v) const {
  check_window(v);
  const std::size_t n = size();
  const std::size_t f = v.frontier;
  std::vector<cplx> x(n), w(n);
  std::copy_n(v.amplitudes.begin(), std::min(f + 1, v.capacity()), x.begin());

  // w = L^* v
  for (std::size_t k = 0; k <= f; k += 2) theta_adjoint_apply(coeffs_[k], x[k], x[k + 1], w[k], w[k + 1]);

  // out = M^* w
  StateVector out(n);
  auto& y = out.amplitudes;
  y[0] = w[0];
  for (std::size_t k = 1; k <= f + 1; k += 2) theta_adjoint_apply(coeffs_[k], w[k], w[k + 1], y[k], y[k + 1]);
  out.frontier = (f % 2 == 0) ? f + 2 : f + 1;
  return out;
}

StateVector operator_difference_apply(const VerblunskySequence& seq, std::size_t N,
                                      const StateVector& phi) {
  if (!seq.head().empty()) {
    throw PreconditionError("operator_difference_apply: expected a sparse-model sequence");
  }
  const auto bars = seq.barriers();
  // bars is 0-based: bars[k] holds L_{k+1}.
  for (std::size_t k = N; k < bars.size(); ++k) {
    if (bars[k].index < 1) throw PreconditionError("barrier beyond the truncation sits at site 0");
    if (k >= 1 && bars[k].index < bars[k - 1].index + 2) {
      throw PreconditionError("barriers beyond the truncation must be at least 2 sites apart");
    }
  }

  StateVector out(phi.capacity() + 3);
  auto at = [&](std::int64_t n) -> cplx {
    return (n < 0 || static_cast<std::size_t>(n) > phi.frontier) ? cplx{} : phi[static_cast<std::size_t>(n)];
  };
  const auto cap = static_cast<std::int64_t>(out.capacity());
  for (std::size_t k = N; k < bars.size(); ++k) {
    const std::int64_t L = bars[k].index;
    if (L - 1 > static_cast<std::int64_t>(phi.frontier)) break;
    const DiskCoefficient c = seq.entry(L);
    const cplx a = c.alpha();
    const double rm1 = c.rho() - 1.0;
    std::int64_t lo, hi;
    cplx x, y;
    if (L % 2 == 0) {
      const cplx p = at(L - 1), q = at(L + 2);
      lo = L, hi = L + 1;
      x = std::conj(a) * p + rm1 * q;
      y = rm1 * p - a * q;
    } else {
      const cplx p = at(L), q = at(L + 1);
      lo = L - 1, hi = L + 2;
      x = std::conj(a) * p + rm1 * q;
      y = rm1 * p - a * q;
    }
    if (hi >= cap) throw RangeError("operator_difference_apply: output exceeds capacity");
    out.amplitudes[static_cast<std::size_t>(lo)] += x;
    out.amplitudes[static_cast<std::size_t>(hi)] += y;
  }
  for (std::size_t i = out.capacity(); i-- > 0;) {
    if (out.amplitudes[i] != cplx{}) {
      out.frontier = i;
      break;
    }
  }
  return out;
}

}  // namespace cmvwalk
