#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cmvwalk/banded.hpp"
#include "cmvwalk/errors.hpp"
#include "cmvwalk/reference.hpp"
#include "cmvwalk/resolvent.hpp"
#include "cmvwalk/sampling.hpp"
#include "cmvwalk/sparse_model.hpp"
#include "cmvwalk/transfer.hpp"

using namespace cmvwalk;
namespace ref = cmvwalk::reference;

TEST_SUITE("resolvent") {
  TEST_CASE("banded LU against dense elimination") {
    Rng rng(71);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t n = 40;
      BandedMatrix a(n, 2, 2);
      ref::DenseMatrix d(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = (i >= 2 ? i - 2 : 0); j <= std::min(n - 1, i + 2); ++j) {
          const cplx v{g(rng), g(rng)};
          a.at(i, j) = v;
          d(i, j) = v;
        }
      }
      std::vector<cplx> b(n);
      for (auto& x : b) x = {g(rng), g(rng)};
      auto x = b;
      BandedLU(a).solve(x);
      const auto y = ref::solve(d, b);
      double diff = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        diff = std::max(diff, std::abs(x[i] - y[i]));
        scale = std::max(scale, std::abs(y[i]));
      }
      CHECK(diff <= 1e-10 * scale);
    }
    BandedMatrix singular(3, 2, 2);
    CHECK_THROWS_AS(BandedLU{singular}, NumericError);
  }

  TEST_CASE("free resolvent") {
    for (const cplx z : {cplx{1.5, 0.0}, std::polar(1.01, 2.0), std::polar(3.0, -0.4)}) {
      const auto s = solve_resolvent(VerblunskySequence::zero(), z);
      CHECK(std::abs(s.u_at(0) + 1.0 / z) <= 1e-15);
      CHECK(std::abs(s.u_at(1) + 1.0 / (z * z)) <= 1e-15);
      CHECK(s.u_at(2) == cplx{});
      CHECK(std::abs(s.u_at(7) + std::pow(z, -5)) <= 1e-15);
      CHECK(std::abs(caratheodory(s) + 1.0) <= 1e-14);
    }
    CHECK_THROWS_AS(solve_resolvent(VerblunskySequence::zero(), cplx{1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(solve_resolvent(VerblunskySequence::zero(), cplx{0.3, 0.1}), DomainError);
  }

  TEST_CASE("support precondition") {
    Rng rng(73);
    const auto seq = random_sequence(rng, 10);
    CHECK_THROWS_AS(solve_resolvent(seq, cplx{2.0}, 5), PreconditionError);
    CHECK_NOTHROW(solve_resolvent(seq, cplx{2.0}, 30));
  }

  TEST_CASE("exact tail matches a large dense window") {
    Rng rng(79);
    for (int trial = 0; trial < 3; ++trial) {
      const auto seq = random_sequence(rng, 25);
      const cplx z = std::polar(std::exp(0.05), 0.7);
      const auto exact = solve_resolvent(seq, z, 24);
      const auto wide = solve_resolvent_windowed(seq, z, 2000);
      double d = 0.0;
      for (std::int64_t n = 0; n < 2000; ++n) d = std::max(d, std::abs(exact.u_at(n) - wide.u_at(n)));
      CHECK(d <= 1e-10);
      CHECK(wide.error_bound <= 1e-10);
      CHECK(exact.residual <= exact.error_bound * (std::abs(z) - 1.0) + 1e-300);
      CHECK(exact.error_bound <= 1e-12 * std::sqrt(exact.norm_sq()));
    }
  }

  TEST_CASE("exact tail matches dense Gaussian elimination") {
    Rng rng(83);
    const auto seq = random_sequence(rng, 12);
    const cplx z = std::polar(1.3, 1.9);
    const std::size_t n = 64;
    auto a = ref::dense_cmv(seq, n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) -= z;
    std::vector<cplx> b(n);
    b[0] = 1.0;
    const auto x = ref::solve(a, b);
    const auto s = solve_resolvent(seq, z);
    double d = 0.0;
    for (std::size_t k = 0; k < 40; ++k) d = std::max(d, std::abs(x[k] - s.u_at(static_cast<std::int64_t>(k))));
    CHECK(d <= 1e-12);
  }

  TEST_CASE("resolvent identities") {
    Rng rng(89);
    for (int trial = 0; trial < 10; ++trial) {
      const auto seq = random_sequence(rng, 16);
      const cplx z = random_on_circle(rng, std::exp(0.02 + 0.5 * trial / 10.0));
      const auto s = solve_resolvent(seq, z);
      const cplx F = caratheodory(s);
      CHECK(F.real() < 0.0);
      const double nu2 = s.norm_sq();
      CHECK(std::abs(nu2 - F.real() / (1.0 - std::norm(z))) <= 1e-9 * nu2);
      // pairing of u and v = M u
      for (std::int64_t k = 1; k < 40; k += 2) {
        const double lhs = std::norm(s.u_at(k)) + std::norm(s.u_at(k + 1));
        const double rhs = std::norm(s.v_at(k)) + std::norm(s.v_at(k + 1));
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, lhs));
      }
      // GZ reconstruction
      for (std::int64_t n = 1; n <= 18; ++n) {
        // Forward propagation of the decaying solution loses accuracy at rate |Z(n,0)|.
        const Mat2 zn = gz_cocycle(seq, n, 0, z);
        const Vec2 w = zn * Vec2{F + 1.0, F - 1.0};
        const cplx un = w[0] / (2.0 * z), vn = w[1] / (2.0 * z);
        const double scale = frobenius_norm(zn) * (std::abs(F) + 1.0);
        CHECK(std::abs(un - s.u_at(n)) <= 1e-13 * scale);
        CHECK(std::abs(vn - s.v_at(n)) <= 1e-13 * scale);
      }
    }
  }

  TEST_CASE("truncated sparse tails") {
    SparseSpec spec;
    spec.eta = 0.5;
    for (std::int64_t LN : {std::int64_t{12}, std::int64_t{13}}) {
      spec.lengths = {3, 6, LN, 400};
      const auto seqN = truncate(verblunsky(spec), 3);
      const cplx z = std::polar(std::exp(0.05), 1.2);
      const auto s = solve_resolvent(seqN, z, LN);
      const auto wide = solve_resolvent_windowed(seqN, z, 1600);
      for (std::int64_t k = LN + 2; k < LN + 200; ++k) {
        if (k % 2 == 0) CHECK(s.u_at(k) == cplx{});
      }
      for (std::int64_t k = LN + 2; k < LN + 40; ++k) {
        if (k % 2 == 1) CHECK(std::abs(wide.u_at(k + 2) / wide.u_at(k) - 1.0 / z) <= 1e-12);
      }
      if (LN % 2 == 0) {
        CHECK(std::abs(s.v_at(LN + 1)) <= 1e-12);
      } else {
        CHECK(std::abs(s.u_at(LN + 1)) <= 1e-12);
      }
    }
  }

  TEST_CASE("poisson kernel") {
    CHECK(poisson_kernel(0.0, std::polar(1.0, 0.3)) == 1.0);
    CHECK(poisson_kernel(0.5, 1.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK_THROWS_AS(poisson_kernel(1.0, 1.0), DomainError);
    CircleGrid g{0.1, 1024};
    const double mean = circle_mean(g, [](cplx z) { return poisson_kernel(0.7, z / std::abs(z)); });
    CHECK(std::abs(mean - 1.0) <= 1e-12);
    Rng rng(97);
    for (int k = 0; k < 10; ++k) {
      const double r = 0.9 * std::uniform_real_distribution<double>(0, 1)(rng);
      const cplx tau = random_on_circle(rng, 1.0);
      cplx series = 1.0;
      for (int l = 1; l < 400; ++l) series += std::pow(r, l) * (std::pow(tau, l) + std::pow(tau, -l));
      CHECK(std::abs(series.real() - poisson_kernel(r, tau)) <= 1e-10);
    }
  }

  TEST_CASE("circle grid validation") {
    CHECK_THROWS_AS((CircleGrid{0.1, 1000}.validate()), ValidationError);
    CHECK_THROWS_AS((CircleGrid{0.0, 1024}.validate()), ValidationError);
  }

  TEST_CASE("caratheodory mean") {
    const auto free_mean = caratheodory_mean(VerblunskySequence::zero(), {0.1, 4096});
    CHECK(std::abs(free_mean.value + 1.0) <= 1e-14);
    Rng rng(101);
    const auto seq = random_sequence(rng, 16);
    CHECK(std::abs(caratheodory_mean(seq, {0.1, 4096}).value + 1.0) <= 1e-10);
    CHECK(std::abs(caratheodory_mean(seq, {0.01, 8192}).value + 1.0) <= 1e-8);
  }

  TEST_CASE("J and I") {
    const double eps = 0.2;
    const auto rec = evolve(VerblunskySequence::zero(), required_t_max(1.0 / eps));
    CHECK(return_integral_J(rec, eps) == doctest::Approx(0.3296799539643607141).epsilon(1e-14));
    CHECK(return_integral_J(VerblunskySequence::zero(), eps) ==
          doctest::Approx(0.3296799539643607141).epsilon(1e-14));
    CHECK(return_integral_J(VerblunskySequence::zero(), 50.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(return_integral_J(rec, 0.01), PreconditionError);
    const auto I_free = autocorrelation_integral_I(VerblunskySequence::zero(), {eps, 1024});
    CHECK(I_free.value == doctest::Approx(-std::expm1(-2 * eps)).epsilon(1e-14));

    Rng rng(103);
    for (int trial = 0; trial < 4; ++trial) {
      const auto seq = random_sequence(rng, 16);
      for (double e : {0.2, 0.05}) {
        const double J = return_integral_J(seq, e);
        const double I = autocorrelation_integral_I(seq, {e, 4096}).value;
        CHECK(J <= I + 1e-10);
        CHECK(I >= -std::expm1(-2 * e) - 1e-12);
        CHECK(std::abs(J - (-std::expm1(-2 * e) / 2 + I / 2)) <= 1e-9);
      }
    }
  }

  TEST_CASE("parseval") {
    const auto free = parseval_check(VerblunskySequence::zero(), 1, 5.0, {1.0, 4096});
    CHECK(free.lhs == doctest::Approx(0.2209910819184177093).epsilon(1e-14));
    CHECK(free.rhs == doctest::Approx(0.2209910819184177093).epsilon(1e-12));
    Rng rng(107);
    const auto seq = random_sequence(rng, 16);
    const auto p = parseval_check(seq, 3, 10.0, {1.0, 4096});
    CHECK(p.discrepancy <= 1e-8);
    const auto tiny = parseval_check(seq, 30, 0.05, {1.0, 4096});
    CHECK(tiny.lhs <= 1e-12);
    CHECK(tiny.rhs <= 1e-12);
  }

  TEST_CASE("truncated resolvents converge") {
    const auto seq = verblunsky(default_sparse_spec());
    const cplx z = std::polar(std::exp(0.05), 0.9);
    const auto r3 = solve_resolvent(truncate(seq, 3), z);
    double prev = INFINITY;
    for (std::size_t N = 1; N <= 2; ++N) {
      const double d = resolvent_difference_norm(solve_resolvent(truncate(seq, N), z), r3);
      CHECK(d < prev);
      prev = d;
    }
    CHECK(resolvent_difference_norm(r3, r3) == 0.0);
  }
}
