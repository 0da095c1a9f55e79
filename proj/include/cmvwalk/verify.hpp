#pragma once

// Invariant suites run by `cmvwalk verify`.

#include <cstdint>
#include <string>
#include <vector>

#include "cmvwalk/cmv.hpp"

namespace cmvwalk {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  double measured = 0.0;   // discrepancy or the measured quantity
  double tolerance = 0.0;
};

struct VerifyReport {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::vector<CheckResult> checks;

  bool all_passed() const;
  std::string to_json() const;
};

/// Suites: "identities", "tails", "walk", "all". Throws ValidationError for other names.
VerifyReport run_verify(const std::string& suite, std::uint64_t seed, unsigned threads = 1);

/// Appends suite "model" checks for a user-supplied sequence: factorization and
/// evolution against the dense oracle on a 64-site window, and the light cone.
void verify_model(const VerblunskySequence& seq, VerifyReport& report);

}  // namespace cmvwalk
