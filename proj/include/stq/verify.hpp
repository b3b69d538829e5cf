#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stq/mappings.hpp"

namespace stq {

/// Result of one seeded cross-formalism verification suite: named maximum
/// absolute deviations between two independent routes to the same numbers.
struct SuiteResult {
  std::string suite;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> deviations;

  double max_deviation() const;
  bool pass(double tol) const { return max_deviation() <= tol; }
};

/// Closed-form recursion vs exact tomographic assembly, plus the single-time
/// marginal property, over random states and CPTP chains
/// (n=1 m=2, n=1 m=3, n=2 m=2 cycling).
SuiteResult verify_pdm_oracle(int trials, std::uint64_t seed);

/// Three-time PDM conditional table vs the ABL rule for basis pre/post
/// selections, including coarse-grained (multi-Kraus) outcomes.
SuiteResult verify_abl(int trials, std::uint64_t seed);

/// Ancilla-realization conditional table vs the pure two-time probability
/// rule for random unnormalized coefficient tensors.
SuiteResult verify_pure(int trials, std::uint64_t seed);

/// Ensemble realization vs the two-time ensemble rule.
SuiteResult verify_ensemble(int trials, std::uint64_t seed);

/// Generalized Born rule vs the two-time ensemble of the process matrix and
/// vs the full process->PDM pipeline, on random causally separable processes;
/// includes the maximally mixed worked example with projective instruments.
SuiteResult verify_bridge(int trials, std::uint64_t seed);

std::vector<SuiteResult> verify_suites(const std::string& name, int trials,
                                       std::uint64_t seed);

}  // namespace stq
