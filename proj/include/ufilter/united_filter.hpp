#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "ufilter/direct_filter.hpp"
#include "ufilter/ensemble.hpp"
#include "ufilter/ensf.hpp"
#include "ufilter/model.hpp"
#include "ufilter/schedule.hpp"

namespace ufilter {

struct UnitedFilterConfig {
  int ensemble_size = 200;   ///< J
  int particle_count = 400;  ///< K
  int iterations = 2;        ///< L, calibration rounds per assimilation step
  int minibatch = 0;         ///< score mini-batch M; 0 = full ensemble
  NoiseSchedule schedule;
  ExplorationNoise exploration;
  std::uint64_t seed = 0;
  bool fresh_prediction_noise = true;  ///< fresh draw in the parameter likelihood
  bool strict_score_regen = false;  ///< re-sample the stored posterior score each iteration
  bool store_ensembles = false;     ///< keep per-step ensembles/clouds in the record
};

struct IterationTrace {
  Eigen::VectorXd x_bar;      ///< state estimate of calibration round l
  Eigen::VectorXd gamma_bar;  ///< parameter estimate produced by that round
};

struct StepDiagnostics {
  std::vector<IterationTrace> iterations;  ///< exactly L entries
  bool particle_degeneracy = false;
  double wall_seconds = 0.0;
};

struct StepResult {
  StateEnsemble posterior;
  Eigen::VectorXd x_bar;
  ParameterCloud cloud;
  Eigen::VectorXd gamma_bar;
  StepDiagnostics diagnostics;
};

/// Record of a full assimilation run. x_bar/gamma_bar have one entry per
/// assimilated observation plus the initial condition at index 0.
struct AssimilationRecord {
  std::vector<Eigen::VectorXd> x_bar;
  std::vector<Eigen::VectorXd> gamma_bar;
  std::vector<StepDiagnostics> diagnostics;  ///< per assimilated observation
  std::vector<StateEnsemble> ensembles;      ///< only when store_ensembles
  std::vector<ParameterCloud> clouds;        ///< only when store_ensembles
};

/// One assimilation step of the united filter: L alternations of
/// (I) EnSF state estimation under the current parameter estimate and
/// (II) direct-filter parameter estimation under the current state estimate,
/// then a closing stage-I pass with the final parameter estimate.
/// step_index selects the named RNG sub-streams; stage-II particle
/// degeneracy is recorded in the diagnostics, never raised.
StepResult assimilate_step(const StateEnsemble& posterior_n,
                           const Eigen::VectorXd& x_bar_n,
                           const ParameterCloud& cloud_n,
                           const Eigen::VectorXd& y,
                           const DynamicsModel& model,
                           const ObservationModel& obs,
                           const UnitedFilterConfig& cfg, int step_index);

/// Folds assimilate_step over the observation sequence.
AssimilationRecord run(const DynamicsModel& model,
                       const ObservationProvider& obs_provider,
                       const std::vector<Eigen::VectorXd>& observations,
                       const StateEnsemble& init_ensemble,
                       const ParameterCloud& init_cloud,
                       const UnitedFilterConfig& cfg);

/// Pure EnSF with the parameter frozen: one prediction + analysis per step,
/// drawing from the same final-pass sub-streams as the united filter's
/// closing pass. With a zero-spread point cloud at `params`, run() reproduces
/// this trajectory bit-for-bit.
AssimilationRecord run_fixed_param(const DynamicsModel& model,
                                   const ObservationProvider& obs_provider,
                                   const std::vector<Eigen::VectorXd>& observations,
                                   const StateEnsemble& init_ensemble,
                                   const Eigen::VectorXd& params,
                                   const UnitedFilterConfig& cfg);

}  // namespace ufilter
