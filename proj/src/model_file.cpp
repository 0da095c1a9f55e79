#include "cmvwalk/model_file.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cmvwalk/errors.hpp"
#include "cmvwalk/qwalk.hpp"

namespace cmvwalk {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw ValidationError("field '" + field + "': " + msg);
}

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) fail(where.empty() ? it.key() : where + "." + it.key(), "unknown field");
  }
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(field, "expected a finite number");
  return v;
}

cplx complex_pair(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) fail(field, "expected [re, im]");
  return {number(j[0], field + "[0]"), number(j[1], field + "[1]")};
}

std::int64_t integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  return j.get<std::int64_t>();
}

SparseSpec parse_sparse(const json& obj, const std::string& where) {
  auto name = [&](const std::string& k) { return where.empty() ? k : where + "." + k; };
  SparseSpec s;
  if (!obj.contains("eta")) fail(name("eta"), "missing");
  s.eta = number(obj["eta"], name("eta"));
  if (!(s.eta > 0.0 && s.eta < 1.0)) fail(name("eta"), "must lie in (0, 1)");
  if (!obj.contains("lengths")) fail(name("lengths"), "missing");
  const json& L = obj["lengths"];
  const std::string lf = name("lengths");
  if (L.is_array()) {
    for (std::size_t i = 0; i < L.size(); ++i) {
      const std::string f = lf + "[" + std::to_string(i) + "]";
      const auto v = integer(L[i], f);
      if (v < 1) fail(f, "lengths must be positive");
      if (!s.lengths.empty() && v <= s.lengths.back()) fail(f, "lengths must be strictly increasing");
      s.lengths.push_back(v);
    }
  } else if (L.is_object()) {
    check_keys(L, lf, {"log2_factorial", "count"});
    if (!L.contains("log2_factorial")) fail(lf + ".log2_factorial", "missing");
    const auto base = integer(L["log2_factorial"], lf + ".log2_factorial");
    if (base < 2) fail(lf + ".log2_factorial", "base must be at least 2");
    std::size_t count = std::numeric_limits<std::size_t>::max();
    if (L.contains("count")) {
      const auto c = integer(L["count"], lf + ".count");
      if (c < 1) fail(lf + ".count", "must be at least 1");
      count = static_cast<std::size_t>(c);
    }
    s.lengths = log_factorial_lengths(base, count);
    if (count != std::numeric_limits<std::size_t>::max() && s.lengths.size() < count) {
      fail(lf + ".count", "only " + std::to_string(s.lengths.size()) + " lengths fit in 64-bit integers");
    }
  } else {
    fail(lf, "expected a list of integers or {\"log2_factorial\": base}");
  }
  return s;
}

}  // namespace

std::optional<double> ModelSpec::eta() const {
  if (sparse) return sparse->eta;
  return std::nullopt;
}

VerblunskySequence ModelSpec::sequence() const {
  VerblunskySequence seq;
  switch (kind) {
    case ModelKind::Zero: break;
    case ModelKind::Explicit: seq = VerblunskySequence::explicit_list(alphas); break;
    case ModelKind::Sparse: seq = verblunsky(*sparse); break;
    case ModelKind::Walk:
      seq = sparse ? coins_to_cmv(coin_sequence(*sparse).coins) : gauge_transform(coins).seq;
      break;
  }
  if (lambda_phase_radians != 0.0) seq = seq.with_phase(std::polar(1.0, lambda_phase_radians));
  return seq;
}

CoinSequence ModelSpec::walk_coins() const {
  if (kind != ModelKind::Walk) throw UnsupportedError("model is not a walk");
  return sparse ? coin_sequence(*sparse).coins : coins;
}

ModelSpec parse_model(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ValidationError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                          ": malformed JSON");
  }
  if (!root.is_object()) throw ValidationError("model file must hold a JSON object");
  if (!root.contains("model") || !root["model"].is_string()) fail("model", "missing or not a string");
  const std::string kind = root["model"].get<std::string>();

  ModelSpec m;
  if (root.contains("lambda_phase_radians")) {
    m.lambda_phase_radians = number(root["lambda_phase_radians"], "lambda_phase_radians");
  }
  if (kind == "zero") {
    m.kind = ModelKind::Zero;
    check_keys(root, "", {"model", "lambda_phase_radians"});
  } else if (kind == "explicit") {
    m.kind = ModelKind::Explicit;
    check_keys(root, "", {"model", "lambda_phase_radians", "alphas"});
    if (!root.contains("alphas") || !root["alphas"].is_array()) fail("alphas", "expected a list of [re, im]");
    const json& a = root["alphas"];
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string f = "alphas[" + std::to_string(i) + "]";
      const cplx alpha = complex_pair(a[i], f);
      if (!(std::abs(alpha) < 1.0)) fail(f, "|alpha| must be < 1");
      m.alphas.push_back(DiskCoefficient::from_alpha(alpha));
    }
  } else if (kind == "sparse") {
    m.kind = ModelKind::Sparse;
    check_keys(root, "", {"model", "lambda_phase_radians", "eta", "lengths"});
    m.sparse = parse_sparse(root, "");
  } else if (kind == "walk") {
    m.kind = ModelKind::Walk;
    check_keys(root, "", {"model", "lambda_phase_radians", "coins", "sparse"});
    if (root.contains("coins") == root.contains("sparse")) {
      fail("coins", "a walk model needs exactly one of 'coins' or 'sparse'");
    }
    if (root.contains("sparse")) {
      const json& s = root["sparse"];
      if (!s.is_object()) fail("sparse", "expected an object");
      check_keys(s, "sparse", {"eta", "lengths"});
      m.sparse = parse_sparse(s, "sparse");
    } else {
      const json& c = root["coins"];
      if (!c.is_array()) fail("coins", "expected a list of coins");
      std::vector<Coin> coins;
      for (std::size_t i = 0; i < c.size(); ++i) {
        const std::string f = "coins[" + std::to_string(i) + "]";
        if (!c[i].is_array() || c[i].size() != 4) fail(f, "expected [c11, c12, c21, c22]");
        Coin coin{complex_pair(c[i][0], f + "[0]"), complex_pair(c[i][1], f + "[1]"),
                  complex_pair(c[i][2], f + "[2]"), complex_pair(c[i][3], f + "[3]")};
        if (coin.unitarity_defect() > 1e-14) fail(f, "coin is not unitary");
        if (coin.c22 == cplx{}) fail(f, "perfect reflectors (c22 = 0) have no CMV form");
        coins.push_back(coin);
      }
      m.coins = CoinSequence::explicit_list(std::move(coins));
    }
  } else {
    fail("model", "unknown model '" + kind + "' (expected zero, explicit, sparse or walk)");
  }
  return m;
}

ModelSpec load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read model file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

}  // namespace cmvwalk
