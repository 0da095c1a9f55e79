// cmvwalk: command-line front end.
//
// Exit codes: 0 success, 1 verification failure, 2 input or validation error,
// 3 resource or feasibility error.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmvwalk/dynamics.hpp"
#include "cmvwalk/errors.hpp"
#include "cmvwalk/format.hpp"
#include "cmvwalk/model_file.hpp"
#include "cmvwalk/parallel.hpp"
#include "cmvwalk/verify.hpp"

using namespace cmvwalk;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kInvalid = 2;
constexpr int kResource = 3;

// Writes to the named file, or stdout when the name is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw ValidationError("cannot open output file '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

double parse_number(const std::string& s, const std::string& what) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc{} || p != s.data() + s.size()) throw ValidationError("bad " + what + ": '" + s + "'");
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

// "geometric:lo:hi:count" or a comma-separated list of times.
std::vector<double> parse_times(const std::string& spec) {
  if (spec.rfind("geometric:", 0) == 0) {
    const auto parts = split(spec.substr(10), ':');
    if (parts.size() != 3) throw ValidationError("--times expects geometric:lo:hi:count");
    const double lo = parse_number(parts[0], "time"), hi = parse_number(parts[1], "time");
    const double count = parse_number(parts[2], "count");
    if (!(count >= 1.0) || count != std::floor(count)) throw ValidationError("--times count must be a positive integer");
    if (!(lo > 0.0) || !(hi >= lo)) throw ValidationError("--times needs 0 < lo <= hi");
    return geometric_grid(lo, hi, static_cast<std::size_t>(count));
  }
  std::vector<double> out;
  for (const auto& part : split(spec, ',')) out.push_back(parse_number(part, "time"));
  return out;
}

std::vector<double> parse_ps(const std::string& spec) {
  std::vector<double> ps;
  if (!spec.empty()) {
    for (const auto& part : split(spec, ',')) ps.push_back(parse_number(part, "moment order"));
  }
  if (ps.empty()) throw ValidationError("--p needs at least one moment order");
  for (double p : ps) {
    if (!(p > 0.0)) throw ValidationError("moment orders must be positive");
  }
  return ps;
}

const char* observable_name(Observable obs) { return obs == Observable::WalkSite ? "walk_site" : "cmv_site"; }

int cmd_model(const std::string& path, const std::string& emit, long long n, const std::string& out_path) {
  const auto spec = load_model_file(path);
  if (n < 0) throw ValidationError("--n must be non-negative");
  Output out(out_path);
  if (emit == "alphas") {
    const auto seq = spec.sequence();
    CsvWriter csv(out.stream(), {"n", "alpha_re", "alpha_im", "rho"});
    for (long long k = 0; k < n; ++k) {
      const auto c = seq[k];
      csv.field(k).field(c.alpha().real()).field(c.alpha().imag()).field(c.rho()).end_row();
    }
    return kOk;
  }
  if (!spec.is_walk()) throw ValidationError("--emit coins needs a walk model");
  const auto coins = spec.walk_coins();
  CsvWriter csv(out.stream(), {"site", "r", "c11_re", "c11_im", "c12_re", "c12_im", "c21_re", "c21_im",
                               "c22_re", "c22_im"});
  for (long long site = 1; site <= n; ++site) {
    const Coin c = coins.at(site);
    csv.field(site).field(std::abs(c.c11));
    for (const cplx x : {c.c11, c.c12, c.c21, c.c22}) csv.field(x.real()).field(x.imag());
    csv.end_row();
  }
  return kOk;
}

int cmd_evolve(const std::string& path, long long t_max, double budget_mb, const std::string& out_path) {
  const auto spec = load_model_file(path);
  if (t_max < 0) throw ValidationError("--tmax must be non-negative");
  if (!(budget_mb > 0.0)) throw ValidationError("--budget-mb must be positive");
  const auto rec = evolve(spec.sequence(), t_max, static_cast<std::size_t>(budget_mb * 1024.0 * 1024.0));
  Output out(out_path);
  CsvWriter csv(out.stream(), {"n", "t", "re", "im", "prob"});
  for (std::int64_t t = 0; t <= rec.t_max(); ++t) {
    const auto row = rec.row(t);
    for (std::size_t n = 0; n < row.size(); ++n) {
      csv.field(static_cast<long long>(n)).field(static_cast<long long>(t));
      csv.field(row[n].real()).field(row[n].imag()).field(std::norm(row[n])).end_row();
    }
  }
  return kOk;
}

int cmd_moments(const std::string& path, const std::string& p_spec, const std::string& times_spec,
                const std::string& out_path, const std::string& summary_path) {
  const auto spec = load_model_file(path);
  const auto ps = parse_ps(p_spec);
  const auto times = parse_times(times_spec);
  const auto obs = spec.observable();
  const auto curves = moment_curves(spec.sequence(), ps, times, obs);
  const auto eta = spec.eta();

  {
    Output out(out_path);
    CsvWriter csv(out.stream(), {"T", "p", "moment", "slope"});
    for (const auto& c : curves) {
      for (std::size_t k = 0; k < c.times.size(); ++k) {
        csv.field(c.times[k]).field(c.p).field(c.moments[k]).field(c.slopes[k]).end_row();
      }
    }
  }

  nlohmann::ordered_json j;
  j["observable"] = observable_name(obs);
  j["times"] = times;
  auto& arr = j["curves"] = nlohmann::ordered_json::array();
  for (const auto& c : curves) {
    nlohmann::ordered_json e;
    e["p"] = c.p;
    e["beta_minus_proxy"] = c.beta_minus_proxy;
    e["beta_plus_proxy"] = c.beta_plus_proxy;
    e["window"] = {c.window_lo, c.window_hi};
    if (eta) {
      e["theory_beta_minus"] = theory_beta_minus(c.p, *eta);
    } else {
      e["theory_beta_minus"] = nullptr;
    }
    arr.push_back(std::move(e));
  }
  Output summary(summary_path);
  summary.stream() << j.dump(2) << '\n';
  return kOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, unsigned threads, const std::string& model_path,
               const std::string& out_path) {
  std::optional<ModelSpec> model;
  if (!model_path.empty()) model = load_model_file(model_path);
  auto report = run_verify(suite, seed, threads);
  if (model) verify_model(model->sequence(), report);
  Output out(out_path);
  out.stream() << report.to_json() << '\n';
  for (const auto& c : report.checks) {
    if (!c.passed) std::cerr << "FAIL " << c.suite << '.' << c.name << ": " << format_double(c.measured) << '\n';
  }
  return report.all_passed() ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamics of half-line CMV matrices and coined quantum walks"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (default: CMVWALK_THREADS, else 1)");

  std::string model_path, out_path, emit = "alphas", p_spec, times_spec, summary_path, suite = "all";
  long long n = 10, t_max = 0;
  double budget_mb = static_cast<double>(kDefaultRecordBudgetBytes) / (1024.0 * 1024.0);
  std::uint64_t seed = 42;

  auto* model = app.add_subcommand("model", "emit the coefficients or coins of a model as CSV");
  model->add_option("spec", model_path, "model JSON file")->required();
  model->add_option("--emit", emit, "alphas or coins")->check(CLI::IsMember({"alphas", "coins"}));
  model->add_option("--n", n, "number of rows");
  model->add_option("--out", out_path, "output CSV (default stdout)");

  auto* ev = app.add_subcommand("evolve", "amplitudes of C^t delta_0 as CSV");
  ev->add_option("spec", model_path, "model JSON file")->required();
  ev->add_option("--tmax", t_max, "last time step")->required();
  ev->add_option("--budget-mb", budget_mb, "memory budget for the stored record");
  ev->add_option("--out", out_path, "output CSV (default stdout)");

  std::vector<CLI::App*> moment_cmds;
  for (const char* name : {"moments", "exponents"}) {
    auto* m = app.add_subcommand(name, "time-averaged moments and slope proxies");
    m->add_option("spec", model_path, "model JSON file")->required();
    m->add_option("--p", p_spec, "comma-separated moment orders")->required();
    m->add_option("--times", times_spec, "geometric:lo:hi:count or a comma-separated list")->required();
    m->add_option("--out", out_path, "output CSV (default stdout)");
    m->add_option("--summary", summary_path, "JSON summary (default stdout)");
    moment_cmds.push_back(m);
  }

  auto* ver = app.add_subcommand("verify", "run the invariant suites");
  ver->add_option("--suite", suite, "identities, tails, walk or all")
      ->check(CLI::IsMember({"identities", "tails", "walk", "all"}));
  ver->add_option("--seed", seed, "random seed");
  ver->add_option("--model", model_path, "also check this model against the dense oracle");
  ver->add_option("--out", out_path, "JSON report (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }
  if (threads == 0) threads = default_thread_count();

  try {
    if (model->parsed()) return cmd_model(model_path, emit, n, out_path);
    if (ev->parsed()) return cmd_evolve(model_path, t_max, budget_mb, out_path);
    for (auto* m : moment_cmds) {
      if (m->parsed()) return cmd_moments(model_path, p_spec, times_spec, out_path, summary_path);
    }
    if (ver->parsed()) return cmd_verify(suite, seed, threads, model_path, out_path);
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << " (feasible: " << e.feasible() << ")\n";
    return kResource;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const UnsupportedError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kResource;
  }
  return kOk;
}
