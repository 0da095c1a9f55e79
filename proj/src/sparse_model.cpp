#include "cmvwalk/sparse_model.hpp"

#include <cmath>
#include <string>

#include "cmvwalk/errors.hpp"

namespace cmvwalk {

void SparseSpec::validate() const {
  if (!(eta > 0.0 && eta < 1.0)) throw ValidationError("eta must lie in (0, 1)");
  for (std::size_t j = 0; j < lengths.size(); ++j) {
    if (lengths[j] < 1) throw ValidationError("lengths must be positive");
    if (j > 0 && lengths[j] <= lengths[j - 1]) {
      throw ValidationError("lengths must be strictly increasing");
    }
  }
  if (std::abs(std::abs(lambda_phase) - 1.0) > 1e-14) {
    throw ValidationError("lambda_phase must be unimodular");
  }
}

std::vector<std::int64_t> log_factorial_lengths(std::int64_t base, std::size_t max_terms) {
  if (base < 2) throw ValidationError("log_factorial base must be at least 2");
  constexpr std::int64_t limit = std::int64_t{1} << 62;
  std::vector<std::int64_t> out;
  std::uint64_t fact = 1;
  for (std::uint64_t j = 1; out.size() < max_terms; ++j) {
    fact *= j;
    // base^fact, stopping before it passes the limit
    std::int64_t v = 1;
    bool fits = true;
    for (std::uint64_t e = 0; e < fact; ++e) {
      if (v > limit / base) {
        fits = false;
        break;
      }
      v *= base;
    }
    if (!fits) break;
    out.push_back(v);
  }
  return out;
}

SparseSpec default_sparse_spec(double eta) {
  SparseSpec s;
  s.eta = eta;
  s.lengths = log_factorial_lengths(2);
  s.validate();
  return s;
}

double nu(const SparseSpec& spec, std::size_t N) {
  if (N < 1) throw RangeError("nu: N must be at least 1");
  if (N > spec.lengths.size()) {
    throw RangeError("nu: N = " + std::to_string(N) + " exceeds the number of lengths");
  }
  if (N == 1) return 0.0;
  const double den = std::log(static_cast<double>(spec.lengths[N - 1]));
  if (den == 0.0) throw DomainError("nu: log L_N = 0 (division by zero)");
  double num = 0.0;
  for (std::size_t j = 0; j + 1 < N; ++j) num += std::log(static_cast<double>(spec.lengths[j]));
  return num / den;
}

DiskCoefficient barrier_coefficient(std::int64_t L, double eta) {
  if (L < 1) throw DomainError("barrier length must be >= 1");
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("eta must lie in (0, 1)");
  const double rho = std::pow(static_cast<double>(L), -barrier_exponent(eta));
  return DiskCoefficient::from_rho(rho);
}

VerblunskySequence verblunsky(const SparseSpec& spec) {
  spec.validate();
  std::vector<Barrier> bars;
  bars.reserve(spec.lengths.size());
  for (auto L : spec.lengths) bars.push_back({L, barrier_coefficient(L, spec.eta)});
  auto seq = VerblunskySequence::sparse(std::move(bars));
  return spec.lambda_phase == cplx{1.0} ? seq : seq.with_phase(spec.lambda_phase);
}

CoinSpec coin_sequence(const SparseSpec& spec) {
  spec.validate();
  CoinSpec out;
  std::vector<SiteCoin> coins;
  const double g = barrier_exponent(spec.eta);
  for (auto L : spec.lengths) {
    const double r = std::pow(static_cast<double>(2 * L - 1), -g);
    out.sites.push_back(L);
    out.reflectivities.push_back(r);
    coins.push_back({L, Coin::rotation(r)});
  }
  out.coins = CoinSequence::sparse(std::move(coins));
  return out;
}

}  // namespace cmvwalk
