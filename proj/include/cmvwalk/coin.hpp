#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cmvwalk/mat2.hpp"

namespace cmvwalk {

/// A 2x2 unitary quantum coin [[c11, c12], [c21, c22]].
struct Coin {
  cplx c11{1.0}, c12{}, c21{}, c22{1.0};

  static Coin identity() { return {}; }
  /// Boundary coin at the origin, [[0, 1], [-1, 0]].
  static Coin boundary() { return {0.0, 1.0, -1.0, 0.0}; }
  /// Perfect reflector J = [[0, -1], [1, 0]].
  static Coin reflector() { return {0.0, -1.0, 1.0, 0.0}; }
  /// SO(2) coin [[r, -s], [s, r]] with s = sqrt(1 - r^2).
  static Coin rotation(double r);

  Mat2 matrix() const { return {c11, c12, c21, c22}; }
  /// max |(C^* C - I)_{ij}|
  double unitarity_defect() const;
  bool is_identity() const { return c11 == cplx{1.0} && c12 == cplx{} && c21 == cplx{} && c22 == cplx{1.0}; }

  friend bool operator==(const Coin&, const Coin&) = default;
};

struct SiteCoin {
  std::int64_t site;
  Coin coin;
};

/// Coins for walk sites n >= 1 (identity where unspecified) plus the fixed
/// boundary coin at site 0.
class CoinSequence {
 public:
  CoinSequence() = default;

  /// coins[0] is the coin at site 1.
  static CoinSequence explicit_list(std::vector<Coin> coins);
  /// Sites must be strictly increasing and >= 1.
  static CoinSequence sparse(std::vector<SiteCoin> coins);

  Coin at(std::int64_t site) const;
  /// Last site carrying a non-identity coin, or 0 if there is none.
  std::int64_t support_end() const;

  /// All non-identity coins with their sites, in increasing site order.
  std::vector<SiteCoin> nontrivial() const;

 private:
  std::vector<Coin> head_;
  std::vector<SiteCoin> sparse_;
};

}  // namespace cmvwalk
