#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ufilter {

/// Fully resolved experiment-run configuration. Parsed from flat key/value
/// text with dotted sections (experiment.*, filter.*, run.*, output.*);
/// unknown keys and keys that do not apply to the selected experiment are
/// rejected with the offending field path. All defaults are embedded here, so
/// a written manifest parses back to the identical configuration.
struct RunConfig {
  // experiment.*
  std::string experiment;  ///< sir | fokker_planck | lorenz96 | linear_gaussian_oracle
  int steps = 0;
  double dt = 0.0;
  double sigma = 0.0;       ///< model-noise scale
  double obs_noise = 0.0;   ///< observation-noise std
  double prior_sd = 0.0;    ///< filter prior spread around the true initial state
  std::vector<double> truth_params;  ///< canonical order per experiment

  // sir
  std::vector<double> sir_init = {1.0, 1e-6, 0.0};
  // fokker_planck
  double fp_dx = 0.25;
  double fp_x_min = 0.0;
  double fp_x_max = 30.0;
  double fp_cutoff = 0.1;
  // lorenz96
  int l96_dim = 200;
  int l96_n_obs = 100;
  int l96_n_arctan = 10;
  double l96_truth_init_sd = 0.1;
  // linear_gaussian_oracle
  double lg_init_mean = 0.0;
  double lg_init_sd = 1.0;

  // filter.*
  std::string filter;  ///< united | augenkf | ensf_fixed_param
  int ensemble_size = 200;
  int particle_count = 400;
  int iterations = 1;
  int minibatch = 0;
  int pseudo_steps = 100;
  double t_min = 1e-3;
  std::vector<double> exploration_std;
  double exploration_decay = 1.0;
  std::vector<double> param_init;
  std::vector<double> param_init_spread;
  std::string param_init_kind = "normal";  ///< normal | uniform
  bool fresh_prediction_noise = true;
  int augenkf_size = 1000;
  double inflation = 1.0;
  std::vector<double> fixed_params;  ///< ensf_fixed_param only; empty = truth

  // run.*
  int n_repeats = 20;
  std::uint64_t master_seed = 0;
  int threads = 0;  ///< parallel repeats; 0 = hardware, 1 = serial reference

  // output.*
  std::string output_dir = "out";

  int param_dim() const;  ///< parameter dimension of the experiment
  int state_dim() const;
};

/// Paper-default configuration for an experiment/filter pair.
RunConfig default_config(const std::string& experiment_kind,
                         const std::string& filter_kind);

/// Parses and validates; throws ConfigError with the field path on error.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Full resolved configuration as re-parseable manifest text.
std::string manifest_text(const RunConfig& cfg);

/// Consistency checks beyond parsing; throws ConfigError.
void validate_config(const RunConfig& cfg);

}  // namespace ufilter
