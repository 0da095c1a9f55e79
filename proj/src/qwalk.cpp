#include "cmvwalk/qwalk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cmvwalk/errors.hpp"

namespace cmvwalk {

StateVector WalkOperator::apply(const StateVector& psi) const {
  const std::size_t f = psi.frontier;
  StateVector out(std::max(psi.capacity(), f + 3));
  auto& y = out.amplitudes;
  const std::size_t top = std::min(f, psi.capacity() - 1);
  if (psi.capacity() > 0) y[1] += psi.amplitudes[0];
  for (std::size_t j = 1; j <= top; ++j) {
    const cplx x = psi.amplitudes[j];
    if (x == cplx{}) continue;
    const std::size_t m = walk_site(j);
    const Coin c = coins_.at(static_cast<std::int64_t>(m));
    if (j % 2 == 1) {
      y[2 * m + 1] += c.c11 * x;
      y[2 * m - 2] += c.c21 * x;
    } else {
      y[2 * m + 1] += c.c12 * x;
      y[2 * m - 2] += c.c22 * x;
    }
  }
  out.frontier = (f % 2 == 1) ? f + 2 : f + 1;
  return out;
}

cplx WalkOperator::entry(std::size_t i, std::size_t j) const {
  if (j == 0) return i == 1 ? cplx{1.0} : cplx{};
  const std::size_t m = walk_site(j);
  const Coin c = coins_.at(static_cast<std::int64_t>(m));
  const bool up = (j % 2 == 1);
  if (i == 2 * m + 1) return up ? c.c11 : c.c12;
  if (i == 2 * m - 2) return up ? c.c21 : c.c22;
  return {};
}

WalkOperator build_walk(CoinSequence coins) {
  for (const auto& sc : coins.nontrivial()) {
    if (sc.coin.unitarity_defect() > 1e-14) {
      throw DomainError("coin at site " + std::to_string(sc.site) + " is not unitary");
    }
  }
  return WalkOperator(std::move(coins));
}

VerblunskySequence coins_to_cmv(const CoinSequence& coins) {
  std::vector<Barrier> bars;
  for (const auto& sc : coins.nontrivial()) {
    const Coin& c = sc.coin;
    if (c.unitarity_defect() > 1e-14) {
      throw DomainError("coin at site " + std::to_string(sc.site) + " is not unitary");
    }
    if (c.c11 != c.c22 || c.c22.imag() != 0.0 || !(c.c22.real() > 0.0)) {
      throw UnsupportedError("coin at site " + std::to_string(sc.site) +
                             " needs c11 = c22 real and positive; use gauge_transform");
    }
    const cplx alpha = std::conj(c.c21);
    if (alpha == cplx{}) continue;
    bars.push_back({2 * sc.site - 1, DiskCoefficient::from_pair(alpha, c.c22.real())});
  }
  return VerblunskySequence::sparse(std::move(bars));
}

cplx GaugeTransform::phase(std::size_t basis_index) const {
  if (basis_index < phases.size()) return phases[basis_index];
  const std::size_t last = phases.size() - 1;  // odd
  return (basis_index % 2 == 1) ? phases[last] : phases[last - 1];
}

GaugeTransform gauge_transform(const CoinSequence& coins) {
  const auto nt = coins.nontrivial();
  const auto K = static_cast<std::size_t>(coins.support_end());
  GaugeTransform g;
  g.phases.assign(2 * K + 2, cplx{1.0});
  std::vector<Barrier> bars;
  std::size_t next = 0;
  for (std::size_t m = 1; m <= K; ++m) {
    Coin c = Coin::identity();
    if (next < nt.size() && static_cast<std::size_t>(nt[next].site) == m) c = nt[next++].coin;
    if (c.unitarity_defect() > 1e-14) {
      throw DomainError("coin at site " + std::to_string(m) + " is not unitary");
    }
    if (c.c22 == cplx{}) {
      throw DomainError("coin at site " + std::to_string(m) +
                        " is a perfect reflector (c22 = 0); no CMV form with rho > 0");
    }
    const double rho = std::abs(c.c22);
    // Make <phi_{2m-2}, U phi_{2m}> and <phi_{2m+1}, U phi_{2m-1}> real and positive.
    g.phases[2 * m] = g.phases[2 * m - 2] * (std::conj(c.c22) / rho);
    g.phases[2 * m + 1] = g.phases[2 * m - 1] * (c.c11 / std::abs(c.c11));
    const cplx alpha = g.phases[2 * m - 2] * std::conj(c.c21) * std::conj(g.phases[2 * m - 1]);
    if (alpha != cplx{}) {
      bars.push_back({static_cast<std::int64_t>(2 * m - 1), DiskCoefficient::from_pair(alpha, rho)});
    }
  }
  g.seq = VerblunskySequence::sparse(std::move(bars));
  return g;
}

MomentCurve walk_exponents(const SparseSpec& spec, double p, std::span<const double> times) {
  const auto seq = coins_to_cmv(coin_sequence(spec).coins);
  auto curve = exponent_curve(spec.lambda_phase == cplx{1.0} ? seq : seq.with_phase(spec.lambda_phase),
                              p, times, Observable::WalkSite);
  curve.theory_beta_minus = theory_beta_minus(p, spec.eta);
  return curve;
}

}  // namespace cmvwalk
