#include "mdd/screening.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>

#include "mdd/error.hpp"
#include "mdd/mean_test.hpp"
#include "mdd/quantile_test.hpp"

namespace mdd {

StepUpResult bh_step_up(std::span<const double> p_values, double alpha) {
  if (p_values.empty()) fail(ErrorKind::InvalidInput, "no p-values to adjust");
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorKind::InvalidInput, "alpha must lie in (0, 1)");
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::InvalidInput, "p-values must lie in [0, 1]");
  }
  const std::size_t m = p_values.size();
  std::vector<double> sorted(p_values.begin(), p_values.end());
  std::sort(sorted.begin(), sorted.end());

  StepUpResult out;
  double cutoff = -1.0;
  for (std::size_t k = m; k >= 1; --k) {
    if (sorted[k - 1] <= static_cast<double>(k) * alpha / static_cast<double>(m)) {
      out.threshold_index = k;
      cutoff = sorted[k - 1];
      break;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (p_values[i] <= cutoff) out.rejected.push_back(i);
  }
  return out;
}

void ScreeningOptions::validate() const {
  if (method == ScreenMethod::quantile && !(tau > 0.0 && tau < 1.0)) {
    fail(ErrorKind::InvalidQuantile, "tau must lie in (0, 1)");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorKind::InvalidConfig, "FDR level must lie in (0, 1)");
  if (bootstrap_draws > 0) BootstrapPlan{bootstrap_draws, multiplier, seed}.validate();
}

std::uint64_t unit_bootstrap_seed(std::uint64_t seed, std::size_t index) {
  return derive_seed(seed, StreamTag::screening, index);
}

TestResult run_set_test(const Dataset& data, std::span<const std::size_t> columns, const ScreeningOptions& options,
                        std::size_t index) {
  const Matrix x = data.x.select_columns(columns);
  if (options.bootstrap_draws > 0) {
    const BootstrapPlan plan{options.bootstrap_draws, options.multiplier, unit_bootstrap_seed(options.seed, index)};
    return options.method == ScreenMethod::quantile ? bootstrap_quantile_test(x, data.y, options.tau, plan)
                                                    : bootstrap_mean_test(x, data.y, plan);
  }
  return options.method == ScreenMethod::quantile ? quantile_independence_test(x, data.y, options.tau)
                                                  : mean_independence_test(x, data.y);
}

ScreeningReport screen_gene_sets(const Dataset& data, const GeneSetCollection& sets, const ScreeningOptions& options) {
  options.validate();
  data.validate();
  if (sets.sets.empty()) fail(ErrorKind::InvalidInput, "no gene sets to screen");

  ScreeningReport report;
  report.alpha = options.alpha;
  report.sets.resize(sets.sets.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < sets.sets.size(); i = next++) {
      const auto& set = sets.sets[i];
      auto& outcome = report.sets[i];
      outcome.set_id = set.id;
      outcome.size = set.columns.size();
      try {
        outcome.result = run_set_test(data, set.columns, options, i);
      } catch (const Error& e) {
        outcome.error = e.what();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(options.threads, 1, sets.sets.size());
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  }

  std::vector<double> p_values;
  std::vector<std::size_t> tested;
  for (std::size_t i = 0; i < report.sets.size(); ++i) {
    if (report.sets[i].result) {
      p_values.push_back(report.sets[i].result->p_value);
      tested.push_back(i);
    }
  }
  report.tested = tested.size();
  if (tested.empty()) return report;
  const auto bh = bh_step_up(p_values, options.alpha);
  report.bh_threshold_index = bh.threshold_index;
  for (std::size_t r : bh.rejected) report.sets[tested[r]].rejected = true;
  for (const auto& s : report.sets) {
    if (s.rejected) report.rejected_set_ids.push_back(s.set_id);
  }
  return report;
}

}  // namespace mdd
