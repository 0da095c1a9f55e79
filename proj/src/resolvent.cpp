#include "cmvwalk/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cmvwalk/banded.hpp"
#include "cmvwalk/errors.hpp"
#include "cmvwalk/parallel.hpp"
#include "cmvwalk/summation.hpp"

namespace cmvwalk {

namespace {

void check_outside(cplx z) {
  if (!(std::abs(z) > 1.0)) throw DomainError("resolvent needs |z| > 1");
}

void check_window_size(std::size_t w) {
  if (w > kMaxResolventWindow) {
    throw ResourceError("resolvent window of " + std::to_string(w) + " sites exceeds the limit of " +
                            std::to_string(kMaxResolventWindow) + "; truncate the sequence first",
                        static_cast<std::int64_t>(kMaxResolventWindow));
  }
}

// Solves the leading w x w block of (C - z) x = delta_0; the result has w + 1
// entries with a trailing zero.
std::vector<cplx> solve_block(const CmvOperator& op, cplx z, std::size_t w) {
  BandedMatrix a(w, 2, 2);
  for (std::size_t i = 0; i < w; ++i) {
    const std::size_t lo = i >= 2 ? i - 2 : 0;
    const std::size_t hi = std::min(w - 1, i + 2);
    for (std::size_t j = lo; j <= hi; ++j) a.at(i, j) = op.entry(i, j) - (i == j ? z : cplx{});
  }
  BandedLU lu(std::move(a));
  std::vector<cplx> u(w + 1);
  u[0] = 1.0;
  lu.solve(std::span<cplx>(u.data(), w));
  return u;
}

// v = M u over the stored range, reading u through the solution's tail rule.
void fill_v(ResolventSolution& s, const CmvOperator& op) {
  const std::size_t w = s.window();
  s.v.assign(w + 1, cplx{});
  s.v[0] = s.u[0];
  for (std::size_t k = 1; k <= w; k += 2) {
    const auto& c = op.coeff(k);
    const cplx x = s.u_at(static_cast<std::int64_t>(k));
    const cplx y = s.u_at(static_cast<std::int64_t>(k + 1));
    s.v[k] = std::conj(c.alpha()) * x + c.rho() * y;
    if (k + 1 <= w) s.v[k + 1] = c.rho() * x - c.alpha() * y;
  }
}

// ||(C - z) u - delta_0|| over rows 0 .. w + 1.
double residual_norm(const ResolventSolution& s, const CmvOperator& op) {
  CompensatedSum acc;
  const std::size_t rows = s.window() + 2;
  for (std::size_t i = 0; i < rows; ++i) {
    cplx r = (i == 0) ? cplx{-1.0} : cplx{};
    const std::size_t lo = i >= 2 ? i - 2 : 0;
    for (std::size_t j = lo; j <= i + 2; ++j) {
      const cplx uj = s.u_at(static_cast<std::int64_t>(j));
      if (uj == cplx{}) continue;
      r += (op.entry(i, j) - (i == j ? s.z : cplx{})) * uj;
    }
    acc.add(std::norm(r));
  }
  return std::sqrt(acc.value());
}

}  // namespace

cplx ResolventSolution::u_at(std::int64_t n) const {
  if (n < 0) return {};
  const auto w = static_cast<std::int64_t>(window());
  if (n <= w) return u[static_cast<std::size_t>(n)];
  if (method == ResolventMethod::Windowed) return {};
  const std::int64_t d = n - (w - 1);
  if (d % 2 != 0) return {};
  return u[static_cast<std::size_t>(w - 1)] * std::pow(z, -static_cast<int>(d / 2));
}

cplx ResolventSolution::v_at(std::int64_t n) const {
  if (n < 0) return {};
  const auto w = static_cast<std::int64_t>(window());
  if (n <= w) return v[static_cast<std::size_t>(n)];
  if (method == ResolventMethod::Windowed) return {};
  const std::int64_t d = n - w;
  if (d % 2 != 0) return {};
  return v[static_cast<std::size_t>(w)] * std::pow(z, -static_cast<int>(d / 2));
}

double ResolventSolution::norm_sq() const {
  CompensatedSum s;
  const std::size_t w = window();
  for (std::size_t n = w + 1; n-- > 0;) s.add(std::norm(u[n]));
  if (method == ResolventMethod::ExactTail) s.add(std::norm(u[w - 1]) / (std::norm(z) - 1.0));
  return s.value();
}

ResolventSolution solve_resolvent(const VerblunskySequence& seq, cplx z, std::int64_t support_end) {
  check_outside(z);
  if (seq.support_end() > support_end) {
    throw PreconditionError("sequence has nonzero coefficients beyond support_end = " +
                            std::to_string(support_end));
  }
  std::int64_t w = std::max<std::int64_t>(support_end + 2, 2);
  if (w % 2 != 0) ++w;
  check_window_size(static_cast<std::size_t>(w));
  const auto W = static_cast<std::size_t>(w);
  const CmvOperator op(seq, W + 2);
  ResolventSolution s;
  s.z = z;
  s.method = ResolventMethod::ExactTail;
  s.u = solve_block(op, z, W);
  fill_v(s, op);
  s.residual = residual_norm(s, op);
  s.error_bound = s.residual / (std::abs(z) - 1.0);
  return s;
}

ResolventSolution solve_resolvent(const VerblunskySequence& seq, cplx z) {
  return solve_resolvent(seq, z, std::max<std::int64_t>(seq.support_end(), 0));
}

ResolventSolution solve_resolvent_windowed(const VerblunskySequence& seq, cplx z, std::size_t window) {
  check_outside(z);
  if (window < 2) throw PreconditionError("resolvent window must have at least 2 sites");
  check_window_size(window);
  const CmvOperator op(seq, window + 4);
  ResolventSolution s;
  s.z = z;
  s.method = ResolventMethod::Windowed;
  s.u = solve_block(op, z, window);
  fill_v(s, op);
  s.residual = residual_norm(s, op);
  s.error_bound = s.residual / (std::abs(z) - 1.0);
  return s;
}

VerblunskySequence truncate_at_horizon(const VerblunskySequence& seq, std::int64_t horizon) {
  return seq.truncated_after(horizon);
}

double resolvent_difference_norm(const ResolventSolution& a, const ResolventSolution& b) {
  if (a.z != b.z) throw PreconditionError("resolvent difference needs a common z");
  const std::size_t w = std::max(a.window(), b.window());
  CompensatedSum s;
  for (std::size_t n = w + 1; n-- > 0;) {
    s.add(std::norm(a.u_at(static_cast<std::int64_t>(n)) - b.u_at(static_cast<std::int64_t>(n))));
  }
  if (a.method == ResolventMethod::ExactTail || b.method == ResolventMethod::ExactTail) {
    // Both tails live on odd sites and shrink by 1/z per two sites past w - 1
    // (w is even for exact-tail solutions; windowed ones contribute zero there).
    const std::size_t odd = (w % 2 == 0) ? w + 1 : w + 2;
    const cplx d = a.u_at(static_cast<std::int64_t>(odd)) - b.u_at(static_cast<std::int64_t>(odd));
    s.add(std::norm(d) * std::norm(a.z) / (std::norm(a.z) - 1.0));
  }
  return std::sqrt(s.value());
}

double poisson_kernel(double r, cplx tau) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("Poisson kernel needs 0 <= r < 1");
  if (std::abs(std::abs(tau) - 1.0) > 1e-12) throw DomainError("Poisson kernel needs |tau| = 1");
  return (1.0 - r * r) / (1.0 - 2.0 * r * tau.real() + r * r);
}

void CircleGrid::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ValidationError("circle grid needs epsilon > 0");
  if (n_theta == 0 || (n_theta & (n_theta - 1)) != 0) {
    throw ValidationError("circle grid needs a power-of-two node count");
  }
}

double CircleGrid::theta(std::size_t m) const {
  return 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n_theta);
}

cplx CircleGrid::node(std::size_t m) const { return std::polar(std::exp(epsilon), theta(m)); }

namespace {

// Sum of f over nodes start, start + stride, ... of a grid with `count` nodes.
double strided_sum(const CircleGrid& g, const std::function<double(cplx)>& f, std::size_t start,
                   std::size_t stride, unsigned threads) {
  const std::size_t k = (g.n_theta - start + stride - 1) / stride;
  std::vector<double> vals(k);
  parallel_for(k, threads, [&](std::size_t i) { vals[i] = f(g.node(start + i * stride)); });
  CompensatedSum s;
  for (double v : vals) s.add(v);
  return s.value();
}

}  // namespace

double circle_mean(const CircleGrid& grid, const std::function<double(cplx)>& f, unsigned threads) {
  grid.validate();
  return strided_sum(grid, f, 0, 1, threads) / static_cast<double>(grid.n_theta);
}

QuadratureResult circle_mean_adaptive(CircleGrid grid, const std::function<double(cplx)>& f, double tol,
                                      std::size_t n_max, unsigned threads) {
  grid.validate();
  double sum = strided_sum(grid, f, 0, 1, threads);
  QuadratureResult r{sum / static_cast<double>(grid.n_theta), grid.n_theta, 0.0};
  while (grid.n_theta < n_max) {
    grid.n_theta *= 2;
    // The refined grid reuses every old node; only the odd ones are new.
    sum += strided_sum(grid, f, 1, 2, threads);
    const double next = sum / static_cast<double>(grid.n_theta);
    r.change = std::abs(next - r.value);
    r.value = next;
    r.n_theta = grid.n_theta;
    if (r.change < tol) break;
  }
  return r;
}

QuadratureResult caratheodory_mean(const VerblunskySequence& seq, const CircleGrid& grid, unsigned threads) {
  return circle_mean_adaptive(
      grid, [&](cplx z) { return caratheodory(solve_resolvent(seq, z)).real(); }, 1e-10,
      std::size_t{1} << 20, threads);
}

double return_integral_J(const EvolutionRecord& rec, double epsilon) {
  if (!(epsilon > 0.0)) throw PreconditionError("J needs epsilon > 0");
  const double T = 1.0 / epsilon;
  const std::int64_t need = required_t_max(T);
  if (rec.t_max() < need) {
    throw PreconditionError("J at epsilon = " + std::to_string(epsilon) + " needs t_max >= " +
                            std::to_string(need) + ", record has " + std::to_string(rec.t_max()));
  }
  const double c = -std::expm1(-2.0 * epsilon);
  CompensatedSum s;
  for (std::int64_t t = 0; t <= rec.t_max(); ++t) {
    s.add(c * std::exp(-2.0 * epsilon * static_cast<double>(t)) * rec.probability(0, t));
  }
  return s.value();
}

double return_integral_J(const VerblunskySequence& seq, double epsilon) {
  if (!(epsilon > 0.0)) throw PreconditionError("J needs epsilon > 0");
  const std::int64_t t_max = required_t_max(1.0 / epsilon);
  const double c = -std::expm1(-2.0 * epsilon);
  CompensatedSum s;
  Evolver ev(seq, 64);
  for (std::int64_t t = 0;; ++t) {
    s.add(c * std::exp(-2.0 * epsilon * static_cast<double>(t)) * std::norm(ev.state().amplitudes[0]));
    if (t == t_max) break;
    ev.step();
  }
  return s.value();
}

QuadratureResult autocorrelation_integral_I(const VerblunskySequence& seq, const CircleGrid& grid,
                                            unsigned threads) {
  auto r = circle_mean_adaptive(
      grid,
      [&](cplx z) {
        const double re = caratheodory(solve_resolvent(seq, z)).real();
        return re * re;
      },
      1e-10, std::size_t{1} << 20, threads);
  const double c = -std::expm1(-2.0 * grid.epsilon);
  r.value *= c;
  r.change *= c;
  return r;
}

ParsevalCheck parseval_check(const VerblunskySequence& seq, std::int64_t n, double T, const CircleGrid& grid,
                             unsigned threads) {
  if (n < 0) throw PreconditionError("site index must be nonnegative");
  const std::int64_t t_max = required_t_max(T);
  const double c = -std::expm1(-2.0 / T);
  CompensatedSum lhs;
  Evolver ev(seq, 64);
  for (std::int64_t t = 0;; ++t) {
    const auto& a = ev.state().amplitudes;
    if (static_cast<std::size_t>(n) < a.size()) {
      lhs.add(c * std::exp(-2.0 * static_cast<double>(t) / T) * std::norm(a[static_cast<std::size_t>(n)]));
    }
    if (t == t_max) break;
    ev.step();
  }
  CircleGrid g = grid;
  g.epsilon = 1.0 / T;
  const auto q = circle_mean_adaptive(
      g, [&](cplx z) { return std::norm(solve_resolvent(seq, z).u_at(n)); }, 1e-10, std::size_t{1} << 20,
      threads);
  ParsevalCheck out;
  out.lhs = lhs.value();
  out.rhs = std::expm1(2.0 / T) * q.value;
  out.discrepancy = std::abs(out.lhs - out.rhs);
  out.n_theta = q.n_theta;
  return out;
}

}  // namespace cmvwalk
