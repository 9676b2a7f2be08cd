#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qsocount {

// Randomized oracle comparisons. Trial t of a run with seed s draws its
// instance from Rng(derive_seed(s, t)), so any failing trial can be replayed
// from its trial seed alone.

struct TrialFailure {
  std::uint64_t trial = 0;
  std::uint64_t trial_seed = 0;
  std::string message;
  std::string instance;  // serialized inputs
  std::string replay;    // command line that reruns the trial
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  std::vector<TrialFailure> failed_trials;
  std::vector<std::pair<std::string, double>> metrics;  // suite-specific, fixed order
};

const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

// Throws check.suite for an unknown suite name.
SuiteReport run_suite(const std::string& name, std::uint64_t trials, std::uint64_t seed);

// Reruns the single trial drawn from `trial_seed`.
SuiteReport replay_trial(const std::string& name, std::uint64_t trial_seed);

}  // namespace qsocount
