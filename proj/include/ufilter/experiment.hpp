#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ufilter/config.hpp"
#include "ufilter/united_filter.hpp"

namespace ufilter {

/// One repeat's assimilation output aligned with its truth.
struct RepeatResult {
  AssimilationRecord record;
  std::vector<Eigen::VectorXd> truth_states;   ///< steps + 1
  std::vector<double> state_rmse;              ///< steps + 1
  std::vector<Eigen::VectorXd> param_abs_err;  ///< steps + 1
  std::string mask_manifest;  ///< info.* lines (experiments with masks)
  bool failed = false;
  std::string failure;
};

/// Runs one repeat in-process (twin experiment: simulate truth, run the
/// configured filter, score against truth). Exposed for tests and the
/// acceptance suite; run_experiment adds the file outputs around it.
RepeatResult run_repeat(const RunConfig& cfg, int repeat_index);

/// Executes the full run: n_repeats repeats (parallel unless run.threads=1),
/// per-repeat trajectory CSVs, the long-format metrics CSV, and the manifest.
/// Returns the CLI exit code: 0 success, 2 every repeat failed numerically,
/// 3 partial failure. Configuration errors throw ConfigError before any
/// output is written.
int run_experiment(const RunConfig& cfg, std::ostream& log);

}  // namespace ufilter
