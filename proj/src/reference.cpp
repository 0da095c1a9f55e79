#include "cmvwalk/reference.hpp"

#include <algorithm>
#include <cmath>

#include "cmvwalk/errors.hpp"

namespace cmvwalk::reference {

DenseMatrix identity(std::size_t n) {
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix multiply(const DenseMatrix& x, const DenseMatrix& y) {
  DenseMatrix r(x.n);
  for (std::size_t i = 0; i < x.n; ++i) {
    for (std::size_t k = 0; k < x.n; ++k) {
      const cplx a = x(i, k);
      if (a == cplx{}) continue;
      for (std::size_t j = 0; j < x.n; ++j) r(i, j) += a * y(k, j);
    }
  }
  return r;
}

DenseMatrix adjoint(const DenseMatrix& x) {
  DenseMatrix r(x.n);
  for (std::size_t i = 0; i < x.n; ++i) {
    for (std::size_t j = 0; j < x.n; ++j) r(j, i) = std::conj(x(i, j));
  }
  return r;
}

DenseMatrix subtract(const DenseMatrix& x, const DenseMatrix& y) {
  DenseMatrix r(x.n);
  for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
  return r;
}

DenseMatrix crop(const DenseMatrix& x, std::size_t k) {
  DenseMatrix r(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) r(i, j) = x(i, j);
  }
  return r;
}

std::vector<cplx> matvec(const DenseMatrix& x, const std::vector<cplx>& v) {
  std::vector<cplx> r(x.n);
  for (std::size_t i = 0; i < x.n; ++i) {
    cplx s{};
    for (std::size_t j = 0; j < x.n && j < v.size(); ++j) s += x(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

double max_abs_diff(const DenseMatrix& x, const DenseMatrix& y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.a.size(); ++i) d = std::max(d, std::abs(x.a[i] - y.a[i]));
  return d;
}

namespace {

void put_theta(DenseMatrix& m, std::size_t k, const DiskCoefficient& c) {
  const cplx a = c.alpha();
  const double r = c.rho();
  m(k, k) = std::conj(a);
  if (k + 1 < m.n) {
    m(k, k + 1) = r;
    m(k + 1, k) = r;
    m(k + 1, k + 1) = -a;
  }
}

}  // namespace

DenseMatrix dense_l(const VerblunskySequence& seq, std::size_t n) {
  DenseMatrix m(n);
  for (std::size_t k = 0; k < n; k += 2) put_theta(m, k, seq.entry(static_cast<std::int64_t>(k)));
  return m;
}

DenseMatrix dense_m(const VerblunskySequence& seq, std::size_t n) {
  DenseMatrix m(n);
  if (n > 0) m(0, 0) = 1.0;
  for (std::size_t k = 1; k < n; k += 2) put_theta(m, k, seq.entry(static_cast<std::int64_t>(k)));
  return m;
}

DenseMatrix dense_cmv(const VerblunskySequence& seq, std::size_t n) {
  // Every L block touching rows < n is complete on an (n + 2)-site window.
  return crop(multiply(dense_l(seq, n + 2), dense_m(seq, n + 2)), n);
}

std::vector<cplx> solve(DenseMatrix a, std::vector<cplx> b) {
  const std::size_t n = a.n;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    }
    if (a(p, k) == cplx{}) throw NumericError("dense solve: singular matrix");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(b[k], b[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx l = a(i, k) / a(k, k);
      if (l == cplx{}) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= l * a(k, j);
      b[i] -= l * b[k];
    }
  }
  std::vector<cplx> x(n);
  for (std::size_t i = n; i-- > 0;) {
    cplx s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

std::vector<std::vector<cplx>> dense_evolution(const VerblunskySequence& seq, std::size_t n,
                                               std::size_t t_max) {
  const DenseMatrix c = dense_cmv(seq, n);
  std::vector<std::vector<cplx>> rows;
  std::vector<cplx> v(n);
  v[0] = 1.0;
  rows.push_back(v);
  for (std::size_t t = 0; t < t_max; ++t) {
    v = matvec(c, v);
    rows.push_back(v);
  }
  return rows;
}

DenseMatrix dense_walk(const CoinSequence& coins, std::size_t n) {
  // Full space l2({0..S}) (x) C^2 with index 2s (up) and 2s + 1 (down).
  const std::size_t sites = n / 2 + 3;
  const std::size_t dim = 2 * sites;
  DenseMatrix coin(dim), shift(dim);
  for (std::size_t s = 0; s < sites; ++s) {
    const Coin c = coins.at(static_cast<std::int64_t>(s));
    coin(2 * s, 2 * s) = c.c11;
    coin(2 * s, 2 * s + 1) = c.c12;
    coin(2 * s + 1, 2 * s) = c.c21;
    coin(2 * s + 1, 2 * s + 1) = c.c22;
    if (s + 1 < sites) shift(2 * (s + 1), 2 * s) = 1.0;  // up moves right
    if (s > 0) shift(2 * (s - 1) + 1, 2 * s + 1) = 1.0;  // down moves left
  }
  const DenseMatrix u = multiply(shift, coin);
  // phi_0 = (0, down), phi_{2m-1} = (m, up), phi_{2m} = (m, down)
  auto full_index = [](std::size_t b) -> std::size_t {
    if (b == 0) return 1;
    const std::size_t m = (b + 1) / 2;
    return (b % 2 == 1) ? 2 * m : 2 * m + 1;
  };
  DenseMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(i, j) = u(full_index(i), full_index(j));
  }
  return out;
}

}  // namespace cmvwalk::reference
