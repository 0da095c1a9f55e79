#include <doctest.h>

#include <cmath>

#include "cmvwalk/errors.hpp"
#include "cmvwalk/qwalk.hpp"
#include "cmvwalk/sparse_model.hpp"

using namespace cmvwalk;

TEST_SUITE("sparse_model") {
  TEST_CASE("default lengths") {
    const auto L = log_factorial_lengths(2);
    REQUIRE(L.size() == 4);
    CHECK(L[0] == 2);
    CHECK(L[1] == 4);
    CHECK(L[2] == 64);
    CHECK(L[3] == (std::int64_t{1} << 24));
    CHECK(log_factorial_lengths(2, 2).size() == 2);
    CHECK(log_factorial_lengths(3).size() == 4);  // 3, 9, 729, 3^24; 3^120 does not fit
  }

  TEST_CASE("nu") {
    SparseSpec s;
    s.eta = 0.5;
    s.lengths = {2, 4};
    CHECK(nu(s, 1) == 0.0);
    CHECK(nu(s, 2) == doctest::Approx(0.5).epsilon(1e-15));
    const auto d = default_sparse_spec();
    CHECK(nu(d, 3) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(nu(d, 4) == doctest::Approx((1.0 + 2.0 + 6.0) / 24.0).epsilon(1e-15));
    CHECK_THROWS_AS(nu(s, 3), RangeError);
    CHECK_THROWS_AS(nu(s, 0), RangeError);
    SparseSpec one;
    one.lengths = {1, 1};  // not a valid spec, but nu itself must reject log L_N = 0
    CHECK_THROWS_AS(nu(one, 2), DomainError);
  }

  TEST_CASE("nu is non-increasing along the default tail") {
    const auto d = default_sparse_spec();
    CHECK(nu(d, 4) <= nu(d, 3));
    CHECK(nu(d, 3) <= nu(d, 2));
  }

  TEST_CASE("barrier coefficient") {
    const auto c = barrier_coefficient(4, 0.5);
    CHECK(c.rho() == 0.5);
    CHECK(std::abs(c.alpha() - std::sqrt(3.0) / 2.0) <= 1e-15);
    CHECK(c.alpha().imag() == 0.0);
    CHECK(barrier_coefficient(1, 0.3).is_zero());
    CHECK(std::abs(std::norm(barrier_coefficient(100, 0.5).alpha()) - 0.99) <= 1e-15);
    // a barrier whose alpha is within 1e-16 of 1 still has exact rho
    const auto deep = barrier_coefficient(std::int64_t{1} << 24, 0.2);
    CHECK(deep.rho() == std::pow(16777216.0, -2.0));
  }

  TEST_CASE("verblunsky sequence") {
    SparseSpec s;
    s.eta = 0.5;
    s.lengths = {4, 9, 30};
    const auto seq = verblunsky(s);
    CHECK(seq[5].is_zero());
    CHECK(seq[0].is_zero());
    CHECK(seq[9] == barrier_coefficient(9, 0.5));
    s.lambda_phase = -1.0;
    const auto neg = verblunsky(s);
    CHECK(neg[9].alpha() == -seq[9].alpha());
    CHECK(neg[9].rho() == seq[9].rho());
  }

  TEST_CASE("spec validation") {
    SparseSpec s;
    s.eta = 1.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s.eta = 0.5;
    s.lengths = {4, 4};
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s.lengths = {0, 4};
    CHECK_THROWS_AS(s.validate(), ValidationError);
  }

  TEST_CASE("coin sequence") {
    SparseSpec s;
    s.eta = 0.5;
    s.lengths = {5};
    const auto cs = coin_sequence(s);
    REQUIRE(cs.reflectivities.size() == 1);
    CHECK(cs.reflectivities[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    const Coin c = cs.coins.at(5);
    CHECK(c.c11 == cplx{cs.reflectivities[0]});
    CHECK(c.c22 == c.c11);
    CHECK(c.c12 == -c.c21);
    CHECK(std::abs(c.matrix().det() - 1.0) <= 1e-15);
    CHECK(c.unitarity_defect() <= 1e-15);
    CHECK(cs.coins.at(4).is_identity());
    CHECK(cs.coins.at(6).is_identity());
    CHECK(Coin::rotation(0.0) == Coin::reflector());
  }

  TEST_CASE("coins and barriers agree at 2L - 1") {
    const auto spec = default_sparse_spec();
    const auto seq = coins_to_cmv(coin_sequence(spec).coins);
    REQUIRE(seq.barriers().size() == spec.lengths.size());
    for (std::size_t j = 0; j < spec.lengths.size(); ++j) {
      const auto& b = seq.barriers()[j];
      CHECK(b.index == 2 * spec.lengths[j] - 1);
      CHECK(b.coeff == barrier_coefficient(2 * spec.lengths[j] - 1, spec.eta));
    }
    for (std::int64_t n = 0; n < 200; n += 2) CHECK(seq[n].is_zero());
  }
}
