#pragma once

// Seeded random instances for property checks.

#include <cstddef>
#include <random>

#include "cmvwalk/cmv.hpp"
#include "cmvwalk/coin.hpp"

namespace cmvwalk {

using Rng = std::mt19937_64;

/// Uniform point in the disk |alpha| <= radius.
cplx random_alpha(Rng& rng, double radius = 0.9);
/// Explicit sequence with `length` random coefficients of modulus <= radius.
VerblunskySequence random_sequence(Rng& rng, std::size_t length, double radius = 0.9);
/// Sparse sequence with `count` random coefficients at increasing random sites
/// spaced at least 2 apart, starting at or after `first`.
VerblunskySequence random_sparse_sequence(Rng& rng, std::size_t count, std::int64_t first = 1,
                                          double radius = 0.95);
/// Haar-like random U(2) coin with |c22| >= 0.05.
Coin random_coin(Rng& rng);
/// Rotation coin [[r, -s], [s, r]] with r uniform in [0.05, 1].
Coin random_rotation_coin(Rng& rng);
/// Random state with unit norm supported on 0..frontier.
StateVector random_state(Rng& rng, std::size_t frontier, std::size_t capacity);
/// Point on |z| = radius with uniform argument.
cplx random_on_circle(Rng& rng, double radius);

}  // namespace cmvwalk
