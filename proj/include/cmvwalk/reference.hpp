#pragma once

// Dense brute-force constructions used as oracles by tests and the verify suites.
// Everything here is O(n^2) or worse and built independently of the banded code.

#include <cstddef>
#include <vector>

#include "cmvwalk/cmv.hpp"
#include "cmvwalk/coin.hpp"

namespace cmvwalk::reference {

struct DenseMatrix {
  std::size_t n = 0;
  std::vector<cplx> a;  // row-major

  explicit DenseMatrix(std::size_t size = 0) : n(size), a(size * size) {}
  cplx& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  cplx operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

DenseMatrix identity(std::size_t n);
DenseMatrix multiply(const DenseMatrix& x, const DenseMatrix& y);
DenseMatrix adjoint(const DenseMatrix& x);
DenseMatrix subtract(const DenseMatrix& x, const DenseMatrix& y);
/// Leading k x k block.
DenseMatrix crop(const DenseMatrix& x, std::size_t k);
std::vector<cplx> matvec(const DenseMatrix& x, const std::vector<cplx>& v);
double max_abs_diff(const DenseMatrix& x, const DenseMatrix& y);

/// L = Theta(alpha_0) (+) Theta(alpha_2) (+) ... on an n x n window (blocks cut at the edge).
DenseMatrix dense_l(const VerblunskySequence& seq, std::size_t n);
/// M = 1 (+) Theta(alpha_1) (+) Theta(alpha_3) (+) ...
DenseMatrix dense_m(const VerblunskySequence& seq, std::size_t n);
/// Leading n x n block of the half-line C, formed as the product of the
/// factors on a slightly larger window.
DenseMatrix dense_cmv(const VerblunskySequence& seq, std::size_t n);

/// Gaussian elimination with partial pivoting; x solves a x = b.
std::vector<cplx> solve(DenseMatrix a, std::vector<cplx> b);

/// Repeated dense products: rows t = 0..t_max of C^t delta_0 on an n-site window.
std::vector<std::vector<cplx>> dense_evolution(const VerblunskySequence& seq, std::size_t n,
                                               std::size_t t_max);

/// Walk unitary on the ordered basis phi_0 .. phi_{n-1}, formed as shift times
/// coin operator on l2(Z_+) (x) C^2 and then restricted.
DenseMatrix dense_walk(const CoinSequence& coins, std::size_t n);

}  // namespace cmvwalk::reference
