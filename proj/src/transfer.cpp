#include "cmvwalk/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cmvwalk/errors.hpp"
#include "cmvwalk/summation.hpp"

namespace cmvwalk {

namespace {

constexpr double kRenormHigh = 1e150;
constexpr double kRenormLow = 1e-150;

void check_nonzero(cplx z) {
  if (z == cplx{}) throw DomainError("transfer matrices need z != 0");
}

void renormalize(ScaledMatrix& s) {
  const double f = frobenius_norm(s.m);
  if (f > kRenormHigh || (f < kRenormLow && f > 0.0)) {
    s.m *= 1.0 / f;
    s.log_scale += std::log(f);
  }
}

// Indices below n with a nonzero coefficient, ascending.
std::vector<std::int64_t> nonzero_indices(const VerblunskySequence& seq, std::int64_t n) {
  std::vector<std::int64_t> out;
  const auto head = seq.head();
  for (std::size_t i = 0; i < head.size() && static_cast<std::int64_t>(i) < n; ++i) {
    if (!head[i].is_zero()) out.push_back(static_cast<std::int64_t>(i));
  }
  for (const auto& b : seq.barriers()) {
    if (b.index >= n) break;
    if (b.index >= static_cast<std::int64_t>(head.size()) && !b.coeff.is_zero()) out.push_back(b.index);
  }
  return out;
}

// Left-multiplies by diag(z^k, 1), folding |z|^k into the log scale when it grows.
void apply_free_run(ScaledMatrix& s, cplx z, std::int64_t k) {
  if (k == 0) return;
  const double kd = static_cast<double>(k);
  const double a = kd * std::log(std::abs(z));
  const cplx phase = std::polar(1.0, kd * std::arg(z));
  if (a > 0.0) {
    const double shrink = std::exp(-a);
    s.m = {phase * s.m.a, phase * s.m.b, shrink * s.m.c, shrink * s.m.d};
    s.log_scale += a;
  } else {
    const cplx top = std::exp(a) * phase;
    s.m = {top * s.m.a, top * s.m.b, s.m.c, s.m.d};
  }
  renormalize(s);
}

}  // namespace

void ScaledMatrix::left_multiply(const Mat2& step) {
  m = step * m;
  renormalize(*this);
}

Mat2 ScaledMatrix::value() const {
  Mat2 r = m;
  r *= std::exp(log_scale);
  return r;
}

double ScaledMatrix::log_norm() const { return std::log(operator_norm(m)) + log_scale; }

TransferMatrix gz_p(const DiskCoefficient& c, cplx z) {
  check_nonzero(z);
  const cplx a = c.alpha();
  const double s = 1.0 / c.rho();
  return {-a * s, s / z, z * s, -std::conj(a) * s};
}

TransferMatrix gz_q(const DiskCoefficient& c, cplx z) {
  check_nonzero(z);
  const cplx a = c.alpha();
  const double s = 1.0 / c.rho();
  return {-std::conj(a) * s, s, s, -a * s};
}

TransferMatrix gz_step(const VerblunskySequence& seq, std::int64_t n, cplx z) {
  const auto c = seq.entry(n);
  return (n % 2 == 0) ? gz_p(c, z) : gz_q(c, z);
}

ScaledMatrix gz_cocycle_scaled(const VerblunskySequence& seq, std::int64_t n, std::int64_t m, cplx z) {
  check_nonzero(z);
  if (n < 0 || m < 0) throw RangeError("cocycle indices must be nonnegative");
  if (n < m) {
    ScaledMatrix fwd = gz_cocycle_scaled(seq, m, n, z);
    return {fwd.m.inverse(), -fwd.log_scale};
  }
  ScaledMatrix s;
  for (std::int64_t k = m; k < n; ++k) s.left_multiply(gz_step(seq, k, z));
  return s;
}

TransferMatrix gz_cocycle(const VerblunskySequence& seq, std::int64_t n, std::int64_t m, cplx z) {
  return gz_cocycle_scaled(seq, n, m, z).value();
}

GzProfile gz_norm_profile(const VerblunskySequence& seq, cplx z, std::int64_t n_max) {
  check_nonzero(z);
  if (n_max < 0) throw RangeError("profile length must be nonnegative");
  GzProfile p;
  p.log_norm.reserve(static_cast<std::size_t>(n_max) + 1);
  p.log_bound.reserve(static_cast<std::size_t>(n_max) + 1);
  ScaledMatrix s;
  double bound = 0.0;
  p.log_norm.push_back(0.0);
  p.log_bound.push_back(0.0);
  for (std::int64_t k = 0; k < n_max; ++k) {
    const Mat2 y = gz_step(seq, k, z);
    s.left_multiply(y);
    bound += std::log(operator_norm(y));
    p.log_norm.push_back(s.log_norm());
    p.log_bound.push_back(bound);
  }
  return p;
}

TransferMatrix szego_step(const DiskCoefficient& c, cplx z) {
  const cplx a = c.alpha();
  const double s = 1.0 / c.rho();
  return {z * s, -std::conj(a) * s, -a * z * s, s};
}

ScaledMatrix szego_t_scaled(const VerblunskySequence& seq, std::int64_t n, cplx z) {
  if (n < 0) throw RangeError("Szego product length must be nonnegative");
  ScaledMatrix s;
  std::int64_t k = 0;
  for (std::int64_t j : nonzero_indices(seq, n)) {
    apply_free_run(s, z, j - k);
    s.left_multiply(szego_step(seq.entry(j), z));
    k = j + 1;
  }
  apply_free_run(s, z, n - k);
  return s;
}

TransferMatrix szego_t(const VerblunskySequence& seq, std::int64_t n, cplx z) {
  return szego_t_scaled(seq, n, z).value();
}

PolynomialPair opuc_pair(const VerblunskySequence& seq, std::int64_t n, cplx z) {
  const Mat2 t = szego_t(seq, n, z);
  const Vec2 phi = t * Vec2{1.0, 1.0};
  const Vec2 psi = t * Vec2{1.0, -1.0};
  return {phi[0], phi[1], psi[0], psi[1]};
}

std::vector<PolynomialPair> opuc_pairs(const VerblunskySequence& seq, std::int64_t n_max, cplx z) {
  if (n_max < 0) throw RangeError("polynomial degree must be nonnegative");
  std::vector<PolynomialPair> out;
  out.reserve(static_cast<std::size_t>(n_max) + 1);
  Vec2 phi{1.0, 1.0}, psi{1.0, -1.0};
  out.push_back({phi[0], phi[1], psi[0], psi[1]});
  for (std::int64_t k = 0; k < n_max; ++k) {
    const Mat2 s = szego_step(seq.entry(k), z);
    phi = s * phi;
    psi = s * psi;
    out.push_back({phi[0], phi[1], psi[0], psi[1]});
  }
  return out;
}

LocalNorm local_norm(std::span<const double> abs_sq, double m) {
  if (!(m >= 0.0)) throw PreconditionError("local norm needs m >= 0");
  const double fl = std::floor(m);
  const double frac = m - fl;
  const auto k = static_cast<std::size_t>(fl);
  if (k >= abs_sq.size() || (frac > 0.0 && k + 1 >= abs_sq.size())) {
    throw RangeError("sequence too short for the local norm at m = " + std::to_string(m));
  }
  CompensatedSum s;
  for (std::size_t j = 0; j <= k; ++j) s.add(abs_sq[j]);
  if (frac > 0.0) s.add(frac * abs_sq[k + 1]);
  return {m, s.value()};
}

SubordinacyReport subordinacy_ratio(const SparseSpec& spec, cplx z, double delta,
                                    std::span<const double> m_grid) {
  if (std::abs(std::abs(z) - 1.0) > 1e-12) throw PreconditionError("subordinacy needs |z| = 1");
  SubordinacyReport r;
  r.beta = spec.eta / (2.0 - spec.eta);
  if (!(delta > 0.0 && delta < r.beta)) throw PreconditionError("subordinacy needs 0 < delta < beta");
  double top = 0.0;
  for (double m : m_grid) {
    if (!(m >= 0.0)) throw PreconditionError("m grid values must be nonnegative");
    top = std::max(top, m);
  }
  const auto seq = verblunsky(spec);
  const auto pairs = opuc_pairs(seq, static_cast<std::int64_t>(std::floor(top)) + 1, z);
  std::vector<double> phi_sq(pairs.size()), psi_sq(pairs.size());
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    phi_sq[j] = std::norm(pairs[j].phi);
    psi_sq[j] = std::norm(pairs[j].psi);
  }
  const double e = r.beta - delta;
  double running = std::numeric_limits<double>::infinity();
  for (double m : m_grid) {
    const double num = local_norm(phi_sq, m).value;
    const double den = std::pow(local_norm(psi_sq, m).value, e);
    const double ratio = num / den;
    running = std::min(running, ratio);
    r.m_grid.push_back(m);
    r.ratios.push_back(ratio);
    r.running_min.push_back(running);
  }
  return r;
}

}  // namespace cmvwalk
