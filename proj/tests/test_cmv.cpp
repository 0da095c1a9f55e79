#include <doctest.h>

#include <cmath>

#include "cmvwalk/cmv.hpp"
#include "cmvwalk/errors.hpp"
#include "cmvwalk/reference.hpp"
#include "cmvwalk/sampling.hpp"
#include "cmvwalk/sparse_model.hpp"

using namespace cmvwalk;
namespace ref = cmvwalk::reference;

namespace {

ref::DenseMatrix dense_of(const CmvOperator& op, std::size_t n) {
  ref::DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = op.entry(i, j);
  }
  return m;
}

double max_diff(const StateVector& a, const std::vector<cplx>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  for (std::size_t i = b.size(); i < a.capacity(); ++i) d = std::max(d, std::abs(a[i]));
  return d;
}

}  // namespace

TEST_SUITE("cmv") {
  TEST_CASE("theta block examples") {
    const Mat2 z = theta_block(cplx{0.0});
    CHECK(z.a == cplx{0.0});
    CHECK(z.b == cplx{1.0});
    CHECK(z.c == cplx{1.0});
    CHECK(z.d == cplx{0.0});

    const auto c = DiskCoefficient::from_alpha(0.6);
    CHECK(c.rho() == doctest::Approx(0.8).epsilon(1e-15));
    const Mat2 t = theta_block(c);
    CHECK(std::abs(t.a - 0.6) < 1e-15);
    CHECK(std::abs(t.b - 0.8) < 1e-15);
    CHECK(std::abs(t.d + 0.6) < 1e-15);

    CHECK_THROWS_AS(theta_block(cplx{1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(theta_block(cplx{0.8, 0.7}), DomainError);
  }

  TEST_CASE("theta block is unitary with inverse theta(conj alpha)") {
    Rng rng(7);
    for (int k = 0; k < 100; ++k) {
      const cplx a = random_alpha(rng, 0.999);
      const Mat2 t = theta_block(a);
      CHECK(max_abs_diff(t * t.adjoint(), Mat2::identity()) <= 1e-14);
      CHECK(max_abs_diff(t * theta_block(std::conj(a)), Mat2::identity()) <= 1e-14);
    }
  }

  TEST_CASE("disk coefficient invariants") {
    Rng rng(11);
    for (int k = 0; k < 200; ++k) {
      const auto c = DiskCoefficient::from_alpha(random_alpha(rng, 0.9999));
      CHECK(std::abs(std::norm(c.alpha()) + c.rho() * c.rho() - 1.0) <= 1e-14);
      CHECK(c.rho() > 0.0);
      CHECK(c.rho() <= 1.0);
    }
    // rho supplied directly survives where 1 - |alpha|^2 would cancel
    const auto tiny = DiskCoefficient::from_rho(1e-12);
    CHECK(tiny.rho() == 1e-12);
    CHECK(tiny.alpha() == cplx{std::sqrt((1.0 - 1e-12) * (1.0 + 1e-12))});
    CHECK_THROWS_AS(DiskCoefficient::from_rho(0.0), DomainError);
    CHECK_THROWS_AS(DiskCoefficient::from_rho(1.5), DomainError);
  }

  TEST_CASE("free operator rows") {
    const CmvOperator op = build_cmv(VerblunskySequence::zero(), 8);
    CHECK(op.entry(0, 0) == cplx{0.0});
    CHECK(op.entry(0, 1) == cplx{0.0});
    CHECK(op.entry(0, 2) == cplx{1.0});
    CHECK(op.entry(1, 0) == cplx{1.0});
    CHECK(op.entry(1, 1) == cplx{0.0});
    CHECK(op.entry(1, 2) == cplx{0.0});
    CHECK_THROWS_AS(build_cmv(VerblunskySequence::zero(), 1), PreconditionError);
  }

  TEST_CASE("row 0 pattern") {
    Rng rng(3);
    const auto seq = random_sequence(rng, 6);
    const CmvOperator op(seq, 8);
    const auto a0 = seq[0], a1 = seq[1];
    CHECK(std::abs(op.entry(0, 0) - std::conj(a0.alpha())) == 0.0);
    CHECK(std::abs(op.entry(0, 1) - std::conj(a1.alpha()) * a0.rho()) == 0.0);
    CHECK(std::abs(op.entry(0, 2) - a1.rho() * a0.rho()) == 0.0);
    CHECK(op.entry(0, 3) == cplx{});
  }

  TEST_CASE("entries match the factor product and are pentadiagonal") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
      const auto seq = random_sequence(rng, 20);
      const std::size_t n = 16;
      const CmvOperator op(seq, n);
      const auto dense = dense_of(op, n);
      CHECK(ref::max_abs_diff(dense, ref::dense_cmv(seq, n)) <= 1e-14);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i > j + 2 || j > i + 2) CHECK(dense(i, j) == cplx{});
        }
      }
    }
  }

  TEST_CASE("apply matches dense product and preserves norm") {
    Rng rng(13);
    const std::size_t n = 32;
    for (int trial = 0; trial < 20; ++trial) {
      const auto seq = random_sequence(rng, n);
      const CmvOperator op(seq, n);
      const auto dense = ref::dense_cmv(seq, n);
      const auto v = random_state(rng, n - 3, n);
      const auto w = op.apply(v);
      CHECK(max_diff(w, ref::matvec(dense, v.amplitudes)) <= 1e-13);
      CHECK(std::abs(w.norm_sq() - 1.0) <= 1e-12);
      CHECK(w.frontier <= v.frontier + 2);
    }
  }

  TEST_CASE("apply examples") {
    const CmvOperator free_op(VerblunskySequence::zero(), 8);
    const auto w = free_op.apply(StateVector::delta(0, 8));
    CHECK(w[1] == cplx{1.0});
    CHECK(w.norm_sq() == 1.0);

    Rng rng(1);
    const CmvOperator op(random_sequence(rng, 10), 10);
    const auto z = op.apply(StateVector(10));
    CHECK(z.norm_sq() == 0.0);

    auto edge = StateVector::delta(8, 10);
    CHECK_THROWS_AS(op.apply(edge), TruncationOverflow);
  }

  TEST_CASE("free operator shifts ballistically") {
    const std::size_t n = 64;
    const CmvOperator op(VerblunskySequence::zero(), n);
    auto v = StateVector::delta(0, n);
    for (std::size_t t = 1; t <= 30; ++t) {
      v = op.apply(v);
      CHECK(v[2 * t - 1] == cplx{1.0});
      CHECK(v.norm_sq() == 1.0);
    }
  }

  TEST_CASE("adjoint") {
    const CmvOperator free_op(VerblunskySequence::zero(), 8);
    const auto w = free_op.apply_adjoint(StateVector::delta(1, 8));
    CHECK(w[0] == cplx{1.0});
    CHECK(free_op.apply_adjoint(StateVector(8)).norm_sq() == 0.0);

    Rng rng(17);
    const std::size_t n = 32;
    for (int trial = 0; trial < 20; ++trial) {
      const auto seq = random_sequence(rng, n);
      const CmvOperator op(seq, n);
      const auto u = random_state(rng, 20, n);
      const auto v = random_state(rng, 20, n);
      const auto cu = op.apply(u);
      const auto csv = op.apply_adjoint(v);
      cplx lhs{}, rhs{};
      for (std::size_t i = 0; i < n; ++i) {
        lhs += std::conj(cu[i]) * v[i];
        rhs += std::conj(u[i]) * csv[i];
      }
      CHECK(std::abs(lhs - rhs) <= 1e-13);
      // C C^* = I on interior states
      const auto back = op.apply(op.apply_adjoint(u));
      CHECK(max_diff(back, u.amplitudes) <= 1e-12);
      // against the dense adjoint
      const auto dense_adj = ref::adjoint(ref::dense_cmv(seq, n));
      CHECK(max_diff(csv, ref::matvec(dense_adj, v.amplitudes)) <= 1e-13);
    }
  }

  TEST_CASE("boundary phase rotates alpha and keeps rho") {
    Rng rng(23);
    const auto seq = random_sequence(rng, 12);
    const cplx lambda = std::polar(1.0, 1.1);
    const auto rot = seq.with_phase(lambda);
    for (int n = 0; n < 14; ++n) {
      CHECK(std::abs(rot[n].alpha() - lambda * seq[n].alpha()) <= 1e-15);
      CHECK(rot[n].rho() == seq[n].rho());
    }
    // |entries| are unchanged
    const CmvOperator a(seq, 12), b(rot, 12);
    for (std::size_t i = 0; i < 12; ++i) {
      for (std::size_t j = 0; j < 12; ++j) CHECK(std::abs(std::abs(a.entry(i, j)) - std::abs(b.entry(i, j))) <= 1e-15);
    }
    CHECK_THROWS_AS(seq.with_phase(cplx{2.0}), DomainError);
  }

  TEST_CASE("sequence entries beyond the explicit list are zero") {
    Rng rng(2);
    const auto seq = random_sequence(rng, 5);
    CHECK(seq[5].is_zero());
    CHECK(seq[1000].is_zero());
    CHECK(seq.support_end() == 4);
    CHECK(VerblunskySequence::zero().support_end() == -1);
  }

  TEST_CASE("truncate") {
    SparseSpec spec;
    spec.eta = 0.5;
    spec.lengths = {4, 64, 1024};
    const auto seq = verblunsky(spec);
    const auto t1 = truncate(seq, 1);
    CHECK(t1.support_end() == 4);
    CHECK(t1[4] == seq[4]);
    CHECK(t1[64].is_zero());
    const auto t3 = truncate(seq, 3);
    for (int n = 0; n < 2000; ++n) CHECK(t3[n] == seq[n]);
    CHECK(truncate(VerblunskySequence::zero(), 5).is_zero());
    CHECK_THROWS_AS(truncate(seq, 4), RangeError);
    CHECK_THROWS_AS(truncate(seq, 0), RangeError);
  }

  TEST_CASE("operator difference closed form") {
    Rng rng(29);
    const std::size_t n = 256;
    for (int trial = 0; trial < 20; ++trial) {
      const auto seq = random_sparse_sequence(rng, 30, 1);
      const std::size_t N = 1 + static_cast<std::size_t>(trial % 10);
      const auto seqN = truncate(seq, N);
      const auto diff = ref::subtract(ref::dense_cmv(seq, n), ref::dense_cmv(seqN, n));
      const auto phi = random_state(rng, n - 4, n);
      const auto out = operator_difference_apply(seq, N, phi);
      CHECK(max_diff(out, ref::matvec(diff, phi.amplitudes)) <= 1e-13);
    }
  }

  TEST_CASE("operator difference examples") {
    Rng rng(31);
    const auto seq = random_sparse_sequence(rng, 10, 3);
    const std::size_t N = 4;
    const auto L_next = seq.barriers()[N].index;
    const auto phi = random_state(rng, static_cast<std::size_t>(L_next) - 3, 200);
    const auto out = operator_difference_apply(seq, N, phi);
    CHECK(out.norm_sq() == 0.0);

    std::vector<Barrier> zeros = {{3, {}}, {6, {}}, {9, {}}};
    const auto zseq = VerblunskySequence::sparse(zeros);
    const auto out0 = operator_difference_apply(zseq, 1, random_state(rng, 20, 32));
    CHECK(out0.norm_sq() == 0.0);

    std::vector<Barrier> tight = {{3, DiskCoefficient::from_alpha(0.5)},
                                  {4, DiskCoefficient::from_alpha(0.5)},
                                  {10, DiskCoefficient::from_alpha(0.5)}};
    CHECK_THROWS_AS(operator_difference_apply(VerblunskySequence::sparse(tight), 1, random_state(rng, 5, 16)),
                    PreconditionError);
  }
}
