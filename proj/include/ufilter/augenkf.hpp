#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "ufilter/direct_filter.hpp"
#include "ufilter/model.hpp"
#include "ufilter/rng.hpp"
#include "ufilter/united_filter.hpp"

namespace ufilter {

/// Ensemble over the augmented vector [x; gamma], one member per column
/// ((dim_state + dim_param) x count).
struct AugmentedEnsemble {
  Eigen::MatrixXd samples;
  Eigen::Index dim_state = 0;
  Eigen::Index dim_param = 0;

  Eigen::Index count() const { return samples.cols(); }
  auto state_block() { return samples.topRows(dim_state); }
  auto state_block() const { return samples.topRows(dim_state); }
  auto param_block() { return samples.bottomRows(dim_param); }
  auto param_block() const { return samples.bottomRows(dim_param); }
};

/// Forecast: each member's state block is propagated through the dynamics
/// with that member's own parameter block and an i.i.d. process-noise draw;
/// the parameter block takes a random-walk step xi ~ N(0, Gamma).
/// Throws NumericalError (with member index) on non-finite output.
AugmentedEnsemble augenkf_forecast(const AugmentedEnsemble& ens,
                                   const DynamicsModel& model,
                                   const ExplorationNoise& param_noise,
                                   RngStream& rng);

/// Stochastic (perturbed-observation) EnKF update of the augmented ensemble:
///   G = C_zy (C_yy + Sigma)^{-1},  z_i += G (y + eps_i - g(x_i)),
/// with raw ensemble cross/observation covariances (g applied member-wise, no
/// linearization) and eps_i ~ N(0, Sigma). An optional multiplicative
/// inflation factor scales the member anomalies before the update.
AugmentedEnsemble augenkf_analysis(const AugmentedEnsemble& ens,
                                   const Eigen::VectorXd& y,
                                   const ObservationModel& obs, RngStream& rng,
                                   double inflation = 1.0);

/// Deterministic core of the analysis with caller-supplied observation
/// perturbations (dim_obs x count); augenkf_analysis draws them from rng.
AugmentedEnsemble augenkf_analysis_with_perturbations(
    const AugmentedEnsemble& ens, const Eigen::VectorXd& y,
    const ObservationModel& obs, const Eigen::MatrixXd& perturbations,
    double inflation = 1.0);

struct AugEnKFConfig {
  ExplorationNoise exploration;
  double inflation = 1.0;
  std::uint64_t seed = 0;
};

/// Runs the augmented filter over an observation sequence; the record's state
/// and parameter estimates are the block means.
AssimilationRecord run_augenkf(const DynamicsModel& model,
                               const ObservationProvider& obs_provider,
                               const std::vector<Eigen::VectorXd>& observations,
                               const AugmentedEnsemble& init,
                               const AugEnKFConfig& cfg);

}  // namespace ufilter
