#pragma once

// Per-set testing with Benjamini-Hochberg control of the false discovery rate.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdd/bootstrap.hpp"
#include "mdd/io.hpp"
#include "mdd/test_result.hpp"

namespace mdd {

struct StepUpResult {
  std::size_t threshold_index = 0;    // k; 0 when nothing is rejected
  std::vector<std::size_t> rejected;  // input positions, ascending
};

/// Largest k with P_(k) <= k alpha / m; rejects every p-value <= P_(k).
/// Throws InvalidInput for an empty list, p-values outside [0,1] or alpha
/// outside (0,1).
StepUpResult bh_step_up(std::span<const double> p_values, double alpha);

enum class ScreenMethod { mean, quantile };

struct ScreeningOptions {
  ScreenMethod method = ScreenMethod::mean;
  double tau = 0.5;                 // quantile method only
  std::size_t bootstrap_draws = 0;  // 0: normal calibration
  Multiplier multiplier = Multiplier::gaussian;
  std::uint64_t seed = 1;
  double alpha = 0.05;
  std::size_t threads = 1;

  void validate() const;
};

/// Bootstrap seed for the i-th unit (gene set, CLI call) of a run seeded with
/// `seed`. A single-set screen therefore matches the direct test exactly.
std::uint64_t unit_bootstrap_seed(std::uint64_t seed, std::size_t index);

/// Test of y on the listed covariates under `options` for unit `index`.
TestResult run_set_test(const Dataset& data, std::span<const std::size_t> columns, const ScreeningOptions& options,
                        std::size_t index);

struct SetOutcome {
  std::string set_id;
  std::size_t size = 0;
  std::optional<TestResult> result;  // empty when the set failed
  std::string error;                 // failure message; the set is left out of BH
  bool rejected = false;
};

struct ScreeningReport {
  std::vector<SetOutcome> sets;  // input order
  std::size_t tested = 0;        // m used in the step-up rule
  std::size_t bh_threshold_index = 0;
  std::vector<std::string> rejected_set_ids;
  double alpha = 0.05;
};

ScreeningReport screen_gene_sets(const Dataset& data, const GeneSetCollection& sets, const ScreeningOptions& options);

}  // namespace mdd
