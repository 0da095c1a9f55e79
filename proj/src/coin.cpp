#include "cmvwalk/coin.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cmvwalk/errors.hpp"

namespace cmvwalk {

Coin Coin::rotation(double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("rotation coin needs 0 <= r <= 1");
  const double s = std::sqrt((1.0 - r) * (1.0 + r));
  return {r, -s, s, r};
}

double Coin::unitarity_defect() const {
  const Mat2 m = matrix();
  return max_abs_diff(m.adjoint() * m, Mat2::identity());
}

CoinSequence CoinSequence::explicit_list(std::vector<Coin> coins) {
  CoinSequence s;
  s.head_ = std::move(coins);
  return s;
}

CoinSequence CoinSequence::sparse(std::vector<SiteCoin> coins) {
  for (std::size_t i = 0; i < coins.size(); ++i) {
    if (coins[i].site < 1) throw RangeError("coin sites must be >= 1");
    if (i > 0 && coins[i].site <= coins[i - 1].site) {
      throw RangeError("coin sites must be strictly increasing");
    }
  }
  CoinSequence s;
  s.sparse_ = std::move(coins);
  return s;
}

Coin CoinSequence::at(std::int64_t site) const {
  if (site <= 0) return Coin::boundary();
  if (static_cast<std::uint64_t>(site) <= head_.size()) return head_[static_cast<std::size_t>(site - 1)];
  auto it = std::lower_bound(sparse_.begin(), sparse_.end(), site,
                             [](const SiteCoin& c, std::int64_t s) { return c.site < s; });
  if (it != sparse_.end() && it->site == site) return it->coin;
  return Coin::identity();
}

std::vector<SiteCoin> CoinSequence::nontrivial() const {
  std::vector<SiteCoin> out;
  for (std::size_t i = 0; i < head_.size(); ++i) {
    if (!head_[i].is_identity()) out.push_back({static_cast<std::int64_t>(i) + 1, head_[i]});
  }
  for (const auto& c : sparse_) {
    if (c.site > static_cast<std::int64_t>(head_.size()) && !c.coin.is_identity()) out.push_back(c);
  }
  return out;
}

std::int64_t CoinSequence::support_end() const {
  const auto nt = nontrivial();
  return nt.empty() ? 0 : nt.back().site;
}

}  // namespace cmvwalk
