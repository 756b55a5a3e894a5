#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mmse_kl {

/// One named validation check. `measured` is the observed error or z-score
/// and `threshold` the acceptance limit it is compared against.
struct CheckResult {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// Runs one of the built-in validation suites:
///   "kl"     closed-form divergences against numeric quadrature,
///   "mc"     seeded Monte-Carlo moment / reproducibility / sandwich checks,
///   "oracle" grid-integration MMSE oracles and special-function identities,
///   "all"    the three above concatenated.
/// Throws DomainError for an unknown suite name.
std::vector<CheckResult> run_suite(const std::string& suite, std::uint64_t seed);

}  // namespace mmse_kl
