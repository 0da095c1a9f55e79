#include "cmvwalk/sampling.hpp"

#include <cmath>
#include <numbers>

namespace cmvwalk {

namespace {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

}  // namespace

cplx random_alpha(Rng& rng, double radius) {
  const double r = radius * std::sqrt(uniform(rng, 0.0, 1.0));
  return std::polar(r, uniform(rng, 0.0, 2.0 * std::numbers::pi));
}

VerblunskySequence random_sequence(Rng& rng, std::size_t length, double radius) {
  std::vector<DiskCoefficient> head(length);
  for (auto& c : head) c = DiskCoefficient::from_alpha(random_alpha(rng, radius));
  return VerblunskySequence::explicit_list(std::move(head));
}

VerblunskySequence random_sparse_sequence(Rng& rng, std::size_t count, std::int64_t first, double radius) {
  std::vector<Barrier> bars;
  std::int64_t site = first;
  std::uniform_int_distribution<std::int64_t> gap(2, 7);
  for (std::size_t k = 0; k < count; ++k) {
    bars.push_back({site, DiskCoefficient::from_alpha(random_alpha(rng, radius))});
    site += gap(rng);
  }
  return VerblunskySequence::sparse(std::move(bars));
}

Coin random_coin(Rng& rng) {
  std::normal_distribution<double> g;
  for (;;) {
    cplx a{g(rng), g(rng)}, b{g(rng), g(rng)};
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    a /= n;
    b /= n;
    if (std::abs(a) < 0.05) continue;
    const cplx ph = std::polar(1.0, uniform(rng, 0.0, 2.0 * std::numbers::pi));
    // ph * [[a, b], [-conj(b), conj(a)]] is unitary with c22 = ph * conj(a).
    return {ph * a, ph * b, -ph * std::conj(b), ph * std::conj(a)};
  }
}

Coin random_rotation_coin(Rng& rng) { return Coin::rotation(uniform(rng, 0.05, 1.0)); }

StateVector random_state(Rng& rng, std::size_t frontier, std::size_t capacity) {
  std::normal_distribution<double> g;
  StateVector v(capacity);
  double s = 0.0;
  for (std::size_t n = 0; n <= frontier; ++n) {
    v.amplitudes[n] = {g(rng), g(rng)};
    s += std::norm(v.amplitudes[n]);
  }
  for (std::size_t n = 0; n <= frontier; ++n) v.amplitudes[n] /= std::sqrt(s);
  v.frontier = frontier;
  return v;
}

cplx random_on_circle(Rng& rng, double radius) {
  return std::polar(radius, uniform(rng, 0.0, 2.0 * std::numbers::pi));
}

}  // namespace cmvwalk
