#include "cmvwalk/banded.hpp"

#include <limits>
#include <string>

#include "cmvwalk/errors.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace cmvwalk {

BandedMatrix::BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), ld_(2 * kl + ku + 1), data_(n * ld_) {}

cplx& BandedMatrix::at(std::size_t i, std::size_t j) {
  if (i >= n_ || j >= n_ || j + kl_ < i || j > i + ku_) throw RangeError("banded entry outside the band");
  return raw(i, j);
}

cplx BandedMatrix::get(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_ || j + kl_ < i || j > i + kl_ + ku_) return {};
  return data_[j * ld_ + (kl_ + ku_ + i - j)];
}

BandedLU::BandedLU(BandedMatrix a) : a_(std::move(a)), pivots_(a_.n_) {
  if (a_.n_ > static_cast<std::size_t>(std::numeric_limits<int>::max() / a_.ld_)) {
    throw ResourceError("banded LU: matrix too large for LAPACK", std::numeric_limits<int>::max() / a_.ld_);
  }
  const auto n = static_cast<lapack_int>(a_.n_);
  const lapack_int info = LAPACKE_zgbtrf(LAPACK_COL_MAJOR, n, n, static_cast<lapack_int>(a_.kl_),
                                         static_cast<lapack_int>(a_.ku_), a_.data_.data(),
                                         static_cast<lapack_int>(a_.ld_), pivots_.data());
  if (info > 0) throw NumericError("banded LU: zero pivot in column " + std::to_string(info - 1));
  if (info < 0) throw NumericError("banded LU: invalid argument " + std::to_string(-info));
}

void BandedLU::solve(std::span<cplx> b) const {
  if (b.size() != a_.n_) throw PreconditionError("banded solve: right-hand side has the wrong length");
  const auto n = static_cast<lapack_int>(a_.n_);
  const lapack_int info = LAPACKE_zgbtrs(LAPACK_COL_MAJOR, 'N', n, static_cast<lapack_int>(a_.kl_),
                                         static_cast<lapack_int>(a_.ku_), 1, a_.data_.data(),
                                         static_cast<lapack_int>(a_.ld_), pivots_.data(), b.data(), n);
  if (info != 0) throw NumericError("banded solve: invalid argument " + std::to_string(-info));
}

}  // namespace cmvwalk
