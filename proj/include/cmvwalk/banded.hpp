#pragma once

// Complex banded LU with partial pivoting (LAPACK zgbtrf / zgbtrs).

#include <cstddef>
#include <span>
#include <vector>

#include "cmvwalk/mat2.hpp"

namespace cmvwalk {

/// n x n matrix with kl sub- and ku super-diagonals in LAPACK band storage
/// (column-major, kl extra rows on top for pivoting fill-in).
class BandedMatrix {
 public:
  BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku);

  std::size_t size() const { return n_; }
  std::size_t lower() const { return kl_; }
  std::size_t upper() const { return ku_; }

  /// Entry (i, j); requires i - kl <= j <= i + ku.
  cplx& at(std::size_t i, std::size_t j);
  cplx get(std::size_t i, std::size_t j) const;

 private:
  friend class BandedLU;
  cplx& raw(std::size_t i, std::size_t j) { return data_[j * ld_ + (kl_ + ku_ + i - j)]; }
  std::size_t n_, kl_, ku_, ld_;
  std::vector<cplx> data_;
};

class BandedLU {
 public:
  /// Factors in place. Throws NumericError on an exactly zero pivot and
  /// ResourceError when n exceeds the LAPACK integer range.
  explicit BandedLU(BandedMatrix a);

  /// Solves A x = b in place.
  void solve(std::span<cplx> b) const;

 private:
  BandedMatrix a_;
  std::vector<int> pivots_;
};

}  // namespace cmvwalk
