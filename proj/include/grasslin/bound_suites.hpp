#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grasslin/perturbation_bounds.hpp"

namespace grasslin {

// One seeded dominance run: constructed instances within the bound's
// hypotheses, measured deviation compared against the evaluated bound.
// First-order bounds run at perturbation scale <= 1e-6 sigma_1 and are
// allowed 1e-3 relative slack; the others must dominate outright.
struct SuiteResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  // max measured / bound
  double mean_ratio = 0.0;
  std::size_t resamples = 0;  // constructions discarded before hypotheses held
};

const std::vector<std::string>& bound_suite_names();

SuiteResult run_bound_suite(const std::string& name, std::uint64_t seed,
                            std::size_t trials);

std::vector<SuiteResult> run_all_bound_suites(std::uint64_t seed,
                                              std::size_t trials);

}  // namespace grasslin
