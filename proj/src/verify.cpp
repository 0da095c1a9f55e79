#include "cmvwalk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <string_view>

#include <json.hpp>

#include "cmvwalk/errors.hpp"
#include "cmvwalk/qwalk.hpp"
#include "cmvwalk/reference.hpp"
#include "cmvwalk/resolvent.hpp"
#include "cmvwalk/sampling.hpp"
#include "cmvwalk/sparse_model.hpp"
#include "cmvwalk/transfer.hpp"

namespace cmvwalk {

namespace ref = reference;

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerifyReport::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["threads"] = threads;
  j["passed"] = all_passed();
  auto& arr = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    arr.push_back({{"suite", c.suite},
                   {"name", c.name},
                   {"passed", c.passed},
                   {"measured", c.measured},
                   {"tolerance", c.tolerance}});
  }
  return j.dump(2);
}

namespace {

struct Suite {
  std::string name;
  Rng& rng;
  unsigned threads;
  std::vector<CheckResult>& out;

  // measured <= tol
  void at_most(std::string check, double measured, double tol) {
    out.push_back({name, std::move(check), measured <= tol, measured, tol});
  }
  // measured >= bound
  void at_least(std::string check, double measured, double bound) {
    out.push_back({name, std::move(check), measured >= bound, measured, bound});
  }
};

double state_diff(const StateVector& a, const std::vector<cplx>& b, std::size_t n) {
  double d = 0.0;
  for (std::size_t k = 0; k < n; ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

ref::DenseMatrix operator_window(const CmvOperator& op, std::size_t n) {
  ref::DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = op.entry(i, j);
  }
  return m;
}

ref::DenseMatrix walk_window(const WalkOperator& w, std::size_t n) {
  ref::DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = w.entry(i, j);
  }
  return m;
}

std::vector<VerblunskySequence> battery(Rng& rng) {
  std::vector<VerblunskySequence> b;
  b.push_back(VerblunskySequence::zero());
  for (int k = 0; k < 3; ++k) b.push_back(random_sequence(rng, 16));
  b.push_back(random_sparse_sequence(rng, 8, 1));
  b.push_back(truncate(verblunsky(default_sparse_spec()), 3));
  return b;
}

void identities(Suite s) {
  const auto models = battery(s.rng);

  double theta = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Mat2 t = theta_block(DiskCoefficient::from_alpha(random_alpha(s.rng, 0.999)));
    theta = std::max(theta, max_abs_diff(t.adjoint() * t, Mat2::identity()));
  }
  s.at_most("theta_unitarity", theta, 1e-14);

  const std::size_t n = 64;
  double fact = 0.0, app = 0.0, adj = 0.0, evo = 0.0, cone = 0.0;
  for (const auto& seq : models) {
    const auto dense = ref::dense_cmv(seq, n);
    const CmvOperator op(seq, n + 2);
    fact = std::max(fact, ref::max_abs_diff(operator_window(op, n), dense));
    const auto dense_adj = ref::adjoint(dense);
    for (int k = 0; k < 5; ++k) {
      const auto phi = random_state(s.rng, n - 4, n + 2);
      std::vector<cplx> x(phi.amplitudes.begin(), phi.amplitudes.begin() + n);
      app = std::max(app, state_diff(op.apply(phi), ref::matvec(dense, x), n - 4));
      adj = std::max(adj, state_diff(op.apply_adjoint(phi), ref::matvec(dense_adj, x), n - 4));
    }
    const auto rec = evolve(seq, 30);
    const auto de = ref::dense_evolution(seq, n, 30);
    for (std::int64_t t = 0; t <= 30; ++t) {
      for (std::size_t k = 0; k < n; ++k) {
        evo = std::max(evo, std::abs(rec.amplitude(static_cast<std::int64_t>(k), t) - de[t][k]));
        if (static_cast<std::int64_t>(k) > 2 * t) cone = std::max(cone, std::abs(de[t][k]));
      }
    }
  }
  s.at_most("factorization_vs_dense", fact, 1e-15);
  s.at_most("apply_vs_dense", app, 1e-14);
  s.at_most("adjoint_vs_dense", adj, 1e-14);
  s.at_most("evolution_vs_dense", evo, 1e-12);
  s.at_most("light_cone", cone, 0.0);

  // Caratheodory mean, norm identity and GZ reconstruction.
  double carath = 0.0, norm_id = 0.0, gz = 0.0, res = 0.0;
  for (const auto& seq : models) {
    for (double eps : {0.1, 0.02}) {
      const auto q = caratheodory_mean(seq, {eps, 4096}, s.threads);
      carath = std::max(carath, std::abs(q.value + 1.0));
    }
    for (int k = 0; k < 10; ++k) {
      const cplx z = random_on_circle(s.rng, std::exp(0.02 + 0.5 * k / 10.0));
      const auto sol = solve_resolvent(seq, z);
      const cplx F = caratheodory(sol);
      const double nu2 = sol.norm_sq();
      norm_id = std::max(norm_id, std::abs(nu2 - F.real() / (1.0 - std::norm(z))) / nu2);
      const Vec2 start{F + 1.0, F - 1.0};
      const double in = std::sqrt(std::norm(start[0]) + std::norm(start[1])) / std::abs(2.0 * z);
      for (std::int64_t m = 1; m <= 24; ++m) {
        const Mat2 zm = gz_cocycle(seq, m, 0, z);
        const Vec2 w = zm * start;
        const double err = std::max(std::abs(w[0] / (2.0 * z) - sol.u_at(m)), std::abs(w[1] / (2.0 * z) - sol.v_at(m)));
        gz = std::max(gz, err / (frobenius_norm(zm) * in));
      }
      const auto w = solve_resolvent_windowed(seq, z, n);
      auto a = ref::dense_cmv(seq, n);
      for (std::size_t i = 0; i < n; ++i) a(i, i) -= z;
      std::vector<cplx> e0(n);
      e0[0] = 1.0;
      const auto x = ref::solve(a, e0);
      for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::abs(w.u[i] - x[i]));
    }
  }
  s.at_most("caratheodory_mean", carath, 1e-8);
  s.at_most("norm_identity_rel", norm_id, 1e-9);
  s.at_most("gz_reconstruction_rel", gz, 1e-9);
  s.at_most("windowed_resolvent_vs_dense", res, 1e-12);

  double parseval = 0.0;
  for (int k = 0; k < 3; ++k) {
    const auto seq = random_sequence(s.rng, 16);
    for (std::int64_t site : {0, 3, 7}) {
      for (double T : {5.0, 20.0}) {
        parseval = std::max(parseval, parseval_check(seq, site, T, {1.0, 4096}, s.threads).discrepancy);
      }
    }
  }
  s.at_most("parseval", parseval, 1e-8);

  double j_minus_i = -INFINITY, ji = 0.0;
  for (const auto& seq : models) {
    for (double eps : {0.2, 0.05}) {
      const double J = return_integral_J(seq, eps);
      const double I = autocorrelation_integral_I(seq, {eps, 4096}, s.threads).value;
      j_minus_i = std::max(j_minus_i, J - I);
      ji = std::max(ji, std::abs(J - (-std::expm1(-2.0 * eps) / 2.0 + I / 2.0)));
    }
  }
  s.at_most("J_le_I", j_minus_i, 1e-10);
  s.at_most("J_I_identity", ji, 1e-9);

  // P(n < M, T) <= sqrt(2 J(1/T) ceil(M)): the count of sites below M is ceil(M),
  // which is what the Cauchy-Schwarz step actually bounds.
  double inside_excess = -INFINITY;
  const double Ts[] = {10.0, 100.0, 1000.0};
  for (const auto& seq : {models[0], models[1], models[4], verblunsky(default_sparse_spec())}) {
    for (const auto& ta : time_averages(seq, Ts)) {
      const double J = ta.atilde[0];
      const double M = 1.0 / (8.0 * J);
      inside_excess = std::max(inside_excess, inside_prob(ta, M) - std::sqrt(2.0 * J * std::ceil(M)));
    }
  }
  s.at_most("inside_probability_bound", inside_excess, 1e-9);

  double det = 0.0, cocycle = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto seq = random_sequence(s.rng, 30);
    const cplx z = random_on_circle(s.rng, 1.1);
    for (std::int64_t m = 0; m <= 20; ++m) {
      const Mat2 zm = gz_cocycle(seq, m, 0, z);
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      det = std::max(det, std::abs(zm.det() - sign) / std::max(1.0, frobenius_norm_sq(zm)));
    }
    const Mat2 a = gz_cocycle(seq, 12, 5, z), b = gz_cocycle(seq, 5, 0, z);
    cocycle = std::max(cocycle, max_abs_diff(a * b, gz_cocycle(seq, 12, 0, z)) /
                                    (frobenius_norm(a) * frobenius_norm(b)));
  }
  s.at_most("gz_determinant", det, 1e-12);
  s.at_most("gz_cocycle", cocycle, 1e-13);

  double star = 0.0, wronskian = 0.0;
  for (int k = 0; k < 5; ++k) {
    const auto seq = random_sequence(s.rng, 60);
    const cplx z = random_on_circle(s.rng, 1.0);
    const auto pairs = opuc_pairs(seq, 50, z);
    cplx zn = 1.0;
    for (const auto& q : pairs) {
      const double scale = std::max(1.0, std::abs(q.phi) * std::abs(q.psi));
      star = std::max(star, std::abs(std::abs(q.phi_star) - std::abs(q.phi)) / std::max(1.0, std::abs(q.phi)));
      wronskian = std::max(wronskian, std::abs(q.phi * q.psi_star - q.psi * q.phi_star + 2.0 * zn) / scale);
      zn *= z;
    }
  }
  s.at_most("szego_star_modulus", star, 1e-12);
  s.at_most("szego_wronskian", wronskian, 1e-12);

  double diff = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto seq = random_sparse_sequence(s.rng, 20, 1);
    const std::size_t N = 1 + static_cast<std::size_t>(k % 6);
    const auto d = ref::subtract(ref::dense_cmv(seq, n), ref::dense_cmv(truncate(seq, N), n));
    const auto phi = random_state(s.rng, n - 4, n);
    diff = std::max(diff, state_diff(operator_difference_apply(seq, N, phi), ref::matvec(d, phi.amplitudes), n));
  }
  s.at_most("operator_difference_vs_dense", diff, 1e-13);
}

void tails(Suite s) {
  SparseSpec spec;
  spec.eta = 0.5;
  double parity = 0.0, ratio = 0.0, closure = 0.0;
  for (std::int64_t LN : {std::int64_t{12}, std::int64_t{13}, std::int64_t{40}, std::int64_t{41}}) {
    spec.lengths = {3, 6, LN, 4 * LN};
    const auto seqN = truncate(verblunsky(spec), 3);
    for (int k = 0; k < 4; ++k) {
      const cplx z = random_on_circle(s.rng, std::exp(0.05 + 0.1 * k));
      const auto sol = solve_resolvent(seqN, z, LN);
      const auto wide = solve_resolvent_windowed(seqN, z, 1600);
      for (std::int64_t m = LN + 2 - LN % 2; m < LN + 200; m += 2) {
        parity = std::max(parity, std::abs(sol.u_at(m)) + std::abs(sol.v_at(m + 1)));
      }
      for (std::int64_t m = LN + 1 + (LN % 2); m < LN + 40; m += 2) {
        ratio = std::max(ratio, std::abs(wide.u_at(m + 2) / wide.u_at(m) - 1.0 / z));
      }
      closure = std::max(closure, std::abs(LN % 2 == 0 ? sol.v_at(LN + 1) : sol.u_at(LN + 1)));
    }
  }
  s.at_most("tail_vanishing_parity", parity, 0.0);
  s.at_most("tail_two_step_ratio", ratio, 1e-12);
  s.at_most("tail_closure", closure, 1e-12);

  double excess = -INFINITY, gap = 0.0;
  for (int k = 0; k < 6; ++k) {
    const auto seq = random_sparse_sequence(s.rng, 10, 1);
    const cplx z = random_on_circle(s.rng, std::exp(0.02 + 0.05 * k));
    const auto exact = solve_resolvent(seq, z);
    const auto windowed = solve_resolvent_windowed(seq, z, 2000);
    const double d = resolvent_difference_norm(exact, windowed);
    excess = std::max(excess, d - windowed.error_bound - exact.error_bound);
    gap = std::max(gap, exact.residual);
  }
  s.at_most("windowed_error_bound_holds", excess, 1e-14);
  s.at_most("exact_tail_residual", gap, 1e-12);

  const auto seq = verblunsky(default_sparse_spec());
  double increase = -INFINITY;
  for (int k = 0; k < 4; ++k) {
    const cplx z = random_on_circle(s.rng, std::exp(0.05));
    const auto r3 = solve_resolvent(truncate(seq, 3), z);
    double prev = INFINITY;
    for (std::size_t N = 1; N <= 2; ++N) {
      const double d = resolvent_difference_norm(solve_resolvent(truncate(seq, N), z), r3);
      increase = std::max(increase, d - prev);
      prev = d;
    }
  }
  s.at_most("truncated_resolvent_monotone", increase, 0.0);
}

CoinSequence coin_list(Rng& rng, std::size_t sites, bool rotations) {
  std::vector<Coin> coins(sites);
  for (auto& c : coins) c = rotations ? random_rotation_coin(rng) : random_coin(rng);
  return CoinSequence::explicit_list(std::move(coins));
}

void walk(Suite s) {
  const std::size_t n = 64;
  double shift = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto coins = coin_list(s.rng, 40, false);
    shift = std::max(shift, ref::max_abs_diff(walk_window(build_walk(coins), n), ref::dense_walk(coins, n)));
  }
  s.at_most("walk_entries_vs_shift_coin", shift, 0.0);

  double so2 = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto coins = coin_list(s.rng, 40, true);
    so2 = std::max(so2, ref::max_abs_diff(walk_window(build_walk(coins), n), ref::dense_cmv(coins_to_cmv(coins), n)));
  }
  SparseSpec spec;
  spec.eta = 0.5;
  spec.lengths = {2, 5, 11, 30};
  const auto thm = coin_sequence(spec).coins;
  so2 = std::max(so2, ref::max_abs_diff(walk_window(build_walk(thm), n), ref::dense_cmv(coins_to_cmv(thm), n)));
  s.at_most("rotation_coins_equal_cmv", so2, 0.0);

  double gauge = 0.0, modulus = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto coins = coin_list(s.rng, 40, false);
    const auto g = gauge_transform(coins);
    const auto u = walk_window(build_walk(coins), n);
    const CmvOperator op(g.seq, n + 2);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        gauge = std::max(gauge, std::abs(std::conj(g.phase(i)) * u(i, j) * g.phase(j) - op.entry(i, j)));
      }
    }
  }
  s.at_most("gauge_equivalence", gauge, 1e-12);
  {
    const auto coins = coin_list(s.rng, 40, false);
    const auto w = build_walk(coins);
    const auto rec = evolve(gauge_transform(coins).seq, 30);
    auto psi = StateVector::delta(0, 8);
    for (std::int64_t t = 0; t <= 30; ++t) {
      for (std::int64_t k = 0; k <= 2 * t; ++k) {
        modulus = std::max(modulus, std::abs(std::abs(psi[static_cast<std::size_t>(k)]) - std::abs(rec.amplitude(k, t))));
      }
      psi = w.apply(psi);
    }
  }
  s.at_most("amplitude_moduli", modulus, 1e-12);

  {
    const auto w = build_walk(thm);
    const double T = 20.0;
    double direct = 0.0;
    auto psi = StateVector::delta(0, 8);
    for (std::int64_t t = 0; t <= required_t_max(T); ++t) {
      double m = 0.0;
      for (std::size_t k = 0; k <= psi.frontier; ++k) m += (static_cast<double>(walk_site(k)) + 1.0) * std::norm(psi[k]);
      direct += -std::expm1(-2.0 / T) * std::exp(-2.0 * static_cast<double>(t) / T) * m;
      psi = w.apply(psi);
    }
    const double times[] = {T};
    const auto c = exponent_curve(coins_to_cmv(thm), 1.0, times, Observable::WalkSite);
    s.at_most("walk_site_moment_two_ways", std::abs(c.moments[0] - direct) / direct, 1e-10);
  }

  {
    std::vector<Coin> j(80, Coin::reflector());
    const auto coins = CoinSequence::explicit_list(j);
    const auto w = build_walk(coins);
    const auto d = ref::dense_walk(coins, 40);
    auto psi = StateVector::delta(0, 8);
    std::vector<cplx> dense_psi(40);
    dense_psi[0] = 1.0;
    double worst = 0.0, max_moment = 0.0;
    for (int t = 0; t <= 60; ++t) {
      double m = 0.0;
      for (std::size_t k = 0; k <= psi.frontier; ++k) m += (static_cast<double>(walk_site(k)) + 1.0) * std::norm(psi[k]);
      max_moment = std::max(max_moment, m);
      worst = std::max(worst, state_diff(psi, dense_psi, 30));
      psi = w.apply(psi);
      dense_psi = ref::matvec(d, dense_psi);
    }
    s.at_most("reflector_walk_vs_dense", worst, 1e-14);
    s.at_most("reflector_walk_trapped_moment", max_moment, 3.0);
  }
}

}  // namespace

void verify_model(const VerblunskySequence& seq, VerifyReport& report) {
  const std::size_t n = 64;
  const std::int64_t t_max = 30;
  const auto dense = ref::dense_cmv(seq, n);
  const double fact = ref::max_abs_diff(operator_window(CmvOperator(seq, n + 2), n), dense);
  const auto rec = evolve(seq, t_max);
  const auto de = ref::dense_evolution(seq, n, t_max);
  double evo = 0.0, cone = 0.0;
  for (std::int64_t t = 0; t <= t_max; ++t) {
    for (std::size_t k = 0; k < n; ++k) {
      evo = std::max(evo, std::abs(rec.amplitude(static_cast<std::int64_t>(k), t) - de[t][k]));
      if (static_cast<std::int64_t>(k) > 2 * t) cone = std::max(cone, std::abs(de[t][k]));
    }
  }
  report.checks.push_back({"model", "factorization_vs_dense", fact <= 1e-15, fact, 1e-15});
  report.checks.push_back({"model", "evolution_vs_dense", evo <= 1e-12, evo, 1e-12});
  report.checks.push_back({"model", "light_cone", cone <= 0.0, cone, 0.0});
}

VerifyReport run_verify(const std::string& suite, std::uint64_t seed, unsigned threads) {
  if (suite != "identities" && suite != "tails" && suite != "walk" && suite != "all") {
    throw ValidationError("unknown suite '" + suite + "' (expected identities, tails, walk or all)");
  }
  VerifyReport report;
  report.seed = seed;
  report.threads = threads;
  // Each suite draws from its own stream so that running one suite alone
  // reproduces the same numbers as running all of them.
  const auto run = [&](std::string_view name, void (*fn)(Suite), std::uint64_t offset) {
    if (suite != "all" && suite != name) return;
    Rng rng(seed + offset);
    fn(Suite{std::string(name), rng, threads, report.checks});
  };
  run("identities", identities, 0);
  run("tails", tails, 1);
  run("walk", walk, 2);
  return report;
}

}  // namespace cmvwalk
