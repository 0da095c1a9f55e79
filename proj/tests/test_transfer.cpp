#include <doctest.h>

#include <algorithm>

#include <cmath>
#include <numbers>

#include "cmvwalk/errors.hpp"
#include "cmvwalk/reference.hpp"
#include "cmvwalk/sampling.hpp"
#include "cmvwalk/transfer.hpp"

using namespace cmvwalk;
namespace ref = cmvwalk::reference;

TEST_SUITE("transfer") {
  TEST_CASE("GZ matrices at alpha = 0") {
    const DiskCoefficient zero;
    const cplx z{0.3, 1.1};
    const Mat2 q = gz_q(zero, z), p = gz_p(zero, z);
    CHECK(q.a == cplx{});
    CHECK(q.b == cplx{1.0});
    CHECK(q.c == cplx{1.0});
    CHECK(q.d == cplx{});
    CHECK(std::abs(p.b - 1.0 / z) <= 1e-16);
    CHECK(p.c == z);
    CHECK(operator_norm(gz_p(zero, std::polar(1.0, 0.8))) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(gz_p(zero, 0.0), DomainError);
    CHECK_THROWS_AS(gz_q(zero, 0.0), DomainError);
  }

  TEST_CASE("GZ determinants") {
    Rng rng(109);
    for (int k = 0; k < 100; ++k) {
      const auto c = DiskCoefficient::from_alpha(random_alpha(rng, 0.95));
      const cplx z = random_on_circle(rng, 0.2 + 2.0 * k / 100.0);
      CHECK(std::abs(gz_p(c, z).det() + 1.0) <= 1e-13);
      CHECK(std::abs(gz_q(c, z).det() + 1.0) <= 1e-13);
    }
  }

  TEST_CASE("cocycle laws") {
    Rng rng(113);
    for (int trial = 0; trial < 10; ++trial) {
      const auto seq = random_sequence(rng, 30);
      const cplx z = random_on_circle(rng, 1.1);
      const Mat2 z80 = gz_cocycle(seq, 8, 0, z);
      const Mat2 prod = gz_cocycle(seq, 8, 4, z) * gz_cocycle(seq, 4, 0, z);
      CHECK(max_abs_diff(z80, prod) <= 1e-11 * frobenius_norm(z80));
      CHECK(max_abs_diff(gz_cocycle(seq, 5, 5, z), Mat2::identity()) == 0.0);
      for (std::int64_t n = 0; n <= 20; ++n) {
        const Mat2 zn = gz_cocycle(seq, n, 0, z);
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        CHECK(std::abs(zn.det() - sign) <= 1e-11 * std::max(1.0, frobenius_norm_sq(zn)));
        const Mat2 inv = gz_cocycle(seq, 0, n, z);
        CHECK(max_abs_diff(inv * zn, Mat2::identity()) <= 1e-13 * frobenius_norm(inv) * frobenius_norm(zn));
      }
      for (std::int64_t n = 0; n <= 12; n += 3) {
        for (std::int64_t k = 0; k <= 12; k += 2) {
          for (std::int64_t m = 0; m <= 12; m += 5) {
            const Mat2 a = gz_cocycle(seq, n, k, z), b = gz_cocycle(seq, k, m, z);
            const Mat2 rhs = gz_cocycle(seq, n, m, z);
            // Backward factors are products of inverses; rounding grows with the step norms.
            double chain = 1.0;
            for (std::int64_t j = std::min({n, k, m}); j < std::max({n, k, m}); ++j) {
              chain *= frobenius_norm(gz_step(seq, j, z));
            }
            CHECK(max_abs_diff(a * b, rhs) <= 1e-13 * chain * chain);
          }
        }
      }
    }
  }

  TEST_CASE("formal eigenfunction from the GZ recursion") {
    Rng rng(127);
    const std::size_t n = 24;
    const auto seq = random_sequence(rng, n + 4);
    const cplx z = random_on_circle(rng, 0.9);
    std::vector<cplx> u(n);
    for (std::size_t k = 0; k < n; ++k) {
      u[k] = (gz_cocycle(seq, static_cast<std::int64_t>(k), 0, z) * Vec2{1.0, 1.0})[0];
    }
    const auto c = ref::dense_cmv(seq, n);
    const auto cu = ref::matvec(c, u);
    for (std::size_t k = 1; k + 3 < n; ++k) {
      CHECK(std::abs(cu[k] - z * u[k]) <= 1e-10 * std::max(1.0, std::abs(u[k])));
    }
  }

  TEST_CASE("norm profile") {
    const double eps = 0.05;
    const cplx z = std::polar(std::exp(eps), 0.4);
    const auto free = gz_norm_profile(VerblunskySequence::zero(), z, 60);
    for (std::size_t n = 0; n <= 60; ++n) CHECK(free.log_norm[n] <= n * eps + 1e-12);
    Rng rng(131);
    const auto p = gz_norm_profile(random_sequence(rng, 80), z, 80);
    for (std::size_t n = 0; n <= 80; ++n) CHECK(p.log_norm[n] <= p.log_bound[n] + 1e-12);
  }

  TEST_CASE("scaled products avoid overflow") {
    std::vector<Barrier> bars;
    for (std::int64_t k = 0; k < 200; ++k) bars.push_back({2 * k + 1, DiskCoefficient::from_rho(1e-3)});
    const auto seq = VerblunskySequence::sparse(bars);
    const auto s = gz_cocycle_scaled(seq, 402, 0, 1.0);
    CHECK(std::isfinite(s.log_norm()));
    CHECK(s.log_norm() > 300.0);
    const auto t = szego_t_scaled(seq, 402, std::polar(1.0, 0.3));
    CHECK(std::isfinite(t.log_norm()));
  }

  TEST_CASE("Szego matrices") {
    const cplx z = std::polar(1.0, 0.77);
    const Mat2 s0 = szego_step(DiskCoefficient{}, z);
    CHECK(s0.a == z);
    CHECK(s0.b == cplx{});
    CHECK(s0.c == cplx{});
    CHECK(s0.d == cplx{1.0});
    Rng rng(137);
    for (int k = 0; k < 50; ++k) {
      const auto c = DiskCoefficient::from_alpha(random_alpha(rng));
      const cplx w = random_on_circle(rng, 0.5 + k / 25.0);
      CHECK(std::abs(szego_step(c, w).det() - w) <= 1e-13 * std::max(1.0, std::abs(w)));
      CHECK(operator_norm(szego_step(c, z)) ==
            doctest::Approx((1.0 + std::abs(c.alpha())) / c.rho()).epsilon(1e-13));
    }
    const Mat2 t = szego_t(VerblunskySequence::zero(), 37, z);
    CHECK(std::abs(t.a - std::pow(z, 37)) <= 1e-13);
    CHECK(t.d == cplx{1.0});
    CHECK(max_abs_diff(szego_t(VerblunskySequence::zero(), 0, z), Mat2::identity()) == 0.0);
  }

  TEST_CASE("free-run skipping agrees with the step-by-step product") {
    Rng rng(139);
    const auto seq = random_sparse_sequence(rng, 12, 3);
    for (const cplx z : {std::polar(1.0, 2.1), std::polar(1.2, -0.3), std::polar(0.8, 1.0)}) {
      Mat2 step = Mat2::identity();
      for (std::int64_t k = 0; k < 90; ++k) step = szego_step(seq.entry(k), z) * step;
      const Mat2 fast = szego_t(seq, 90, z);
      CHECK(max_abs_diff(step, fast) <= 1e-11 * frobenius_norm(step));
    }
  }

  TEST_CASE("polynomial pairs") {
    const cplx z = std::polar(1.0, 0.5);
    const auto p0 = opuc_pair(VerblunskySequence::zero(), 0, z);
    CHECK(p0.phi == cplx{1.0});
    CHECK(p0.phi_star == cplx{1.0});
    CHECK(p0.psi == cplx{1.0});
    CHECK(p0.psi_star == cplx{-1.0});
    const auto pf = opuc_pair(VerblunskySequence::zero(), 9, z);
    CHECK(std::abs(pf.phi - std::pow(z, 9)) <= 1e-14);
    CHECK(pf.phi_star == cplx{1.0});
    CHECK(std::abs(pf.psi - std::pow(z, 9)) <= 1e-14);
    CHECK(pf.psi_star == cplx{-1.0});

    Rng rng(149);
    const auto seq = random_sequence(rng, 60);
    const auto pairs = opuc_pairs(seq, 50, z);
    for (std::int64_t n = 0; n <= 50; ++n) {
      const auto& q = pairs[static_cast<std::size_t>(n)];
      CHECK(std::abs(std::abs(q.phi_star) - std::abs(q.phi)) <= 1e-12 * std::max(1.0, std::abs(q.phi)));
      CHECK(std::abs(std::abs(q.psi_star) - std::abs(q.psi)) <= 1e-12 * std::max(1.0, std::abs(q.psi)));
      const auto direct = opuc_pair(seq, n, z);
      CHECK(std::abs(direct.phi - q.phi) <= 1e-12 * std::max(1.0, std::abs(q.phi)));
    }
  }

  TEST_CASE("local norm") {
    const std::vector<double> ones(10, 1.0);
    CHECK(local_norm(ones, 3.0).value == 4.0);
    CHECK(local_norm(ones, 2.5).value == 3.5);
    Rng rng(151);
    std::vector<double> a(20);
    for (auto& x : a) x = std::uniform_real_distribution<double>(0, 2)(rng);
    for (int k = 0; k < 15; ++k) {
      const double mid = local_norm(a, k + 0.5).value;
      CHECK(std::abs(mid - 0.5 * (local_norm(a, k).value + local_norm(a, k + 1).value)) <= 1e-14);
      CHECK(local_norm(a, k + 0.25).value <= local_norm(a, k + 0.75).value);
    }
    CHECK_THROWS_AS(local_norm(ones, 9.5), RangeError);
    CHECK_NOTHROW(local_norm(ones, 9.0));
    CHECK_THROWS_AS(local_norm(ones, -1.0), PreconditionError);
  }

  TEST_CASE("subordinacy ratio") {
    SparseSpec free;
    free.eta = 0.5;
    const double delta = 0.1;
    const double m_grid[] = {1.0, 4.0, 16.0, 64.0};
    const auto r = subordinacy_ratio(free, std::polar(1.0, 0.3), delta, m_grid);
    const double e = r.beta - delta;
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(r.ratios[k] == doctest::Approx(std::pow(m_grid[k] + 1.0, 1.0 - e)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(subordinacy_ratio(free, 1.1, delta, m_grid), PreconditionError);
    CHECK_THROWS_AS(subordinacy_ratio(free, 1.0, r.beta, m_grid), PreconditionError);
    // delta close to beta: the ratio tends to ||phi||_m^2 >= 1
    const auto near = subordinacy_ratio(default_sparse_spec(), std::polar(1.0, 1.3), r.beta * (1 - 1e-9), m_grid);
    for (double x : near.ratios) CHECK(x >= 1.0 - 1e-6);
  }
}
