#include "cmvwalk/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cmvwalk/errors.hpp"
#include "cmvwalk/summation.hpp"

namespace cmvwalk {

namespace {

void check_T(double T) {
  if (!(T > 0.0) || !std::isfinite(T)) throw PreconditionError("time scale T must be positive and finite");
}

// (1 - e^{-2/T}) and the per-step decay e^{-2/T}.
double abel_norm(double T) { return -std::expm1(-2.0 / T); }

double position(std::size_t n, Observable obs) {
  return static_cast<double>(obs == Observable::WalkSite ? (n + 1) / 2 : n);
}

// Abel weight of step t at scale T, computed directly to avoid drift from repeated products.
double abel_weight(double T, std::int64_t t) {
  return abel_norm(T) * std::exp(-2.0 * static_cast<double>(t) / T);
}

}  // namespace

std::int64_t required_t_max(double T) {
  check_T(T);
  return static_cast<std::int64_t>(std::ceil(T * std::log(1.0 / kTailTolerance) / 2.0));
}

Evolver::Evolver(const VerblunskySequence& seq, std::size_t initial_size)
    : seq_(seq),
      op_(seq, std::max<std::size_t>(initial_size, 8)),
      state_(StateVector::delta(0, op_.size())),
      next_(op_.size()),
      scratch_(op_.size()) {}

void Evolver::step() {
  if (state_.frontier + 4 >= op_.size()) {
    const std::size_t n = 2 * op_.size();
    op_ = CmvOperator(seq_, n);
    state_.grow(n);
    next_.grow(n);
    scratch_.grow(n);
  }
  op_.apply_into(state_, next_, scratch_);
  std::swap(state_, next_);
  ++t_;
}

std::size_t EvolutionRecord::row_end(std::int64_t t) const {
  if (t < 0 || t > t_max()) throw RangeError("time outside the evolution record");
  return offsets_[t + 1] - offsets_[t] - 1;
}

std::span<const cplx> EvolutionRecord::row(std::int64_t t) const {
  if (t < 0 || t > t_max()) throw RangeError("time outside the evolution record");
  return {data_.data() + offsets_[t], offsets_[t + 1] - offsets_[t]};
}

cplx EvolutionRecord::amplitude(std::int64_t n, std::int64_t t) const {
  if (t < 0 || t > t_max()) throw RangeError("time outside the evolution record");
  if (n < 0) return {};
  const auto r = row(t);
  return static_cast<std::size_t>(n) < r.size() ? r[static_cast<std::size_t>(n)] : cplx{};
}

std::size_t record_bytes(std::int64_t t_max) {
  const auto t = static_cast<std::size_t>(t_max);
  // rows of length 1, 2, 4, ..., 2 t_max plus the offset table
  return sizeof(cplx) * (1 + t * (t + 1)) + sizeof(std::size_t) * (t + 2);
}

EvolutionRecord evolve(const VerblunskySequence& seq, std::int64_t t_max, std::size_t budget_bytes) {
  if (t_max < 0) throw PreconditionError("t_max must be nonnegative");
  if (t_max > (std::int64_t{1} << 31) || record_bytes(t_max) > budget_bytes) {
    std::int64_t feasible = static_cast<std::int64_t>(std::sqrt(static_cast<double>(budget_bytes) / sizeof(cplx)));
    while (feasible > 0 && record_bytes(feasible) > budget_bytes) --feasible;
    while (record_bytes(feasible + 1) <= budget_bytes) ++feasible;
    throw ResourceError("evolution record for t_max = " + std::to_string(t_max) +
                            " exceeds the memory budget; largest feasible t_max is " +
                            std::to_string(feasible),
                        feasible);
  }
  EvolutionRecord rec;
  const auto T = static_cast<std::size_t>(t_max);
  rec.data_.reserve(1 + T * (T + 1));
  rec.offsets_.reserve(T + 2);
  Evolver ev(seq, 2 * T + 8);
  for (std::int64_t t = 0;; ++t) {
    const std::size_t len = (t == 0) ? 1 : 2 * static_cast<std::size_t>(t);
    rec.offsets_.push_back(rec.data_.size());
    const auto& a = ev.state().amplitudes;
    rec.data_.insert(rec.data_.end(), a.begin(), a.begin() + static_cast<std::ptrdiff_t>(len));
    if (t == t_max) break;
    ev.step();
  }
  rec.offsets_.push_back(rec.data_.size());
  return rec;
}

TimeAverage time_averaged_prob(const EvolutionRecord& rec, double T) {
  check_T(T);
  const std::int64_t need = required_t_max(T);
  if (rec.t_max() < need) {
    throw PreconditionError("time average at T = " + std::to_string(T) + " needs t_max >= " +
                            std::to_string(need) + ", record has " + std::to_string(rec.t_max()));
  }
  const std::size_t sites = rec.row_end(rec.t_max()) + 1;
  std::vector<CompensatedSum> acc(sites);
  for (std::int64_t t = 0; t <= rec.t_max(); ++t) {
    const double w = abel_weight(T, t);
    const auto r = rec.row(t);
    for (std::size_t n = 0; n < r.size(); ++n) acc[n].add(w * std::norm(r[n]));
  }
  TimeAverage ta;
  ta.T = T;
  ta.atilde.resize(sites);
  for (std::size_t n = 0; n < sites; ++n) ta.atilde[n] = acc[n].value();
  ta.tail_bound = std::exp(-2.0 * static_cast<double>(rec.t_max()) / T);
  return ta;
}

std::vector<TimeAverage> time_averages(const VerblunskySequence& seq, std::span<const double> Ts) {
  std::int64_t t_max = 0;
  for (double T : Ts) t_max = std::max(t_max, required_t_max(T));
  std::vector<std::vector<CompensatedSum>> acc(Ts.size());
  Evolver ev(seq, 64);
  for (std::int64_t t = 0;; ++t) {
    const auto& a = ev.state().amplitudes;
    const std::size_t len = ev.state().frontier + 1;
    for (std::size_t k = 0; k < Ts.size(); ++k) {
      if (acc[k].size() < len) acc[k].resize(len);
      const double w = abel_weight(Ts[k], t);
      for (std::size_t n = 0; n < len; ++n) acc[k][n].add(w * std::norm(a[n]));
    }
    if (t == t_max) break;
    ev.step();
  }
  std::vector<TimeAverage> out(Ts.size());
  for (std::size_t k = 0; k < Ts.size(); ++k) {
    out[k].T = Ts[k];
    out[k].tail_bound = std::exp(-2.0 * static_cast<double>(t_max) / Ts[k]);
    out[k].atilde.resize(acc[k].size());
    for (std::size_t n = 0; n < acc[k].size(); ++n) out[k].atilde[n] = acc[k][n].value();
  }
  return out;
}

double outside_prob(const TimeAverage& ta, double M) {
  if (!(M > 0.0)) throw PreconditionError("outside_prob needs M > 0");
  const double first = std::ceil(M);
  CompensatedSum s;
  if (first < static_cast<double>(ta.atilde.size())) {
    for (std::size_t n = ta.atilde.size(); n-- > static_cast<std::size_t>(first);) s.add(ta.atilde[n]);
  }
  return s.value();
}

double inside_prob(const TimeAverage& ta, double M) {
  if (!(M > 0.0)) throw PreconditionError("inside_prob needs M > 0");
  const double lim = std::min(std::ceil(M), static_cast<double>(ta.atilde.size()));
  const auto end = static_cast<std::size_t>(lim);
  CompensatedSum s;
  for (std::size_t n = end; n-- > 0;) s.add(ta.atilde[n]);
  return s.value();
}

double moment(const TimeAverage& ta, double p, Observable obs) {
  if (!(p > 0.0)) throw PreconditionError("moment order p must be positive");
  CompensatedSum s;
  for (std::size_t n = ta.atilde.size(); n-- > 0;) {
    if (ta.atilde[n] == 0.0) continue;
    const double w = std::pow(position(n, obs), p) + 1.0;
    if (!std::isfinite(w)) throw RangeError("moment weight overflows binary64 for p = " + std::to_string(p));
    s.add(w * ta.atilde[n]);
  }
  const double v = s.value();
  if (!std::isfinite(v)) throw RangeError("moment overflows binary64");
  return v;
}

double normalized_slope(double moment_value, double p, double T) {
  if (T == 1.0) return std::numeric_limits<double>::quiet_NaN();
  return std::log(moment_value) / (p * std::log(T));
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) throw PreconditionError("invalid geometric grid");
  if (count == 1) return {lo};
  std::vector<double> g(count);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t k = 0; k < count; ++k) {
    g[k] = std::exp(a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

namespace {

void fill_proxies(MomentCurve& c) {
  const double lo = std::log(c.times.front()), hi = std::log(c.times.back());
  const double cut = 0.5 * (lo + hi);
  c.window_lo = std::exp(cut);
  c.window_hi = c.times.back();
  double mn = std::numeric_limits<double>::infinity(), mx = -mn;
  bool any = false;
  for (std::size_t k = 0; k < c.times.size(); ++k) {
    if (std::log(c.times[k]) < cut || std::isnan(c.slopes[k])) continue;
    if (!any) c.window_lo = c.times[k];
    any = true;
    mn = std::min(mn, c.slopes[k]);
    mx = std::max(mx, c.slopes[k]);
  }
  c.beta_minus_proxy = any ? mn : std::numeric_limits<double>::quiet_NaN();
  c.beta_plus_proxy = any ? mx : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::vector<MomentCurve> moment_curves(const VerblunskySequence& seq, std::span<const double> ps,
                                       std::span<const double> times, Observable obs) {
  if (ps.empty()) throw PreconditionError("moment_curves needs at least one p");
  if (times.empty()) throw PreconditionError("moment_curves needs a nonempty time grid");
  for (double p : ps) {
    if (!(p > 0.0)) throw PreconditionError("moment order p must be positive");
  }
  for (std::size_t k = 0; k < times.size(); ++k) {
    check_T(times[k]);
    if (k > 0 && !(times[k] > times[k - 1])) throw PreconditionError("time grid must be increasing");
  }
  const std::int64_t t_max = required_t_max(times.back());
  const std::size_t np = ps.size(), nt = times.size();
  std::vector<std::vector<double>> weight(np);  // x(n)^p + 1
  std::vector<CompensatedSum> abel(np * nt);

  Evolver ev(seq, 2 * static_cast<std::size_t>(std::min<std::int64_t>(t_max, 1 << 24)) + 8);
  for (std::int64_t t = 0;; ++t) {
    const auto& a = ev.state().amplitudes;
    const std::size_t len = ev.state().frontier + 1;
    for (std::size_t i = 0; i < np; ++i) {
      auto& tab = weight[i];
      while (tab.size() < len) {
        const double x = std::pow(position(tab.size(), obs), ps[i]) + 1.0;
        if (!std::isfinite(x)) throw RangeError("moment weight overflows binary64 for p = " + std::to_string(ps[i]));
        tab.push_back(x);
      }
      CompensatedSum m;
      for (std::size_t n = len; n-- > 0;) m.add(tab[n] * std::norm(a[n]));
      const double mt = m.value();
      for (std::size_t k = 0; k < nt; ++k) {
        // Terms past a curve's own cutoff are below 1e-16 relative and harmless; keep
        // summing so every T uses the same t range.
        abel[i * nt + k].add(abel_weight(times[k], t) * mt);
      }
    }
    if (t == t_max) break;
    ev.step();
  }

  std::vector<MomentCurve> out(np);
  for (std::size_t i = 0; i < np; ++i) {
    auto& c = out[i];
    c.p = ps[i];
    c.observable = obs;
    c.times.assign(times.begin(), times.end());
    for (std::size_t k = 0; k < nt; ++k) {
      const double m = abel[i * nt + k].value();
      if (!std::isfinite(m)) throw RangeError("moment overflows binary64");
      c.moments.push_back(m);
      c.slopes.push_back(normalized_slope(m, ps[i], times[k]));
    }
    fill_proxies(c);
  }
  return out;
}

MomentCurve exponent_curve(const VerblunskySequence& seq, double p, std::span<const double> times,
                           Observable obs) {
  const double ps[] = {p};
  return std::move(moment_curves(seq, ps, times, obs).front());
}

}  // namespace cmvwalk
