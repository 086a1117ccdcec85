#pragma once

#include <Eigen/Core>

#include "ufilter/ensemble.hpp"
#include "ufilter/model.hpp"
#include "ufilter/rng.hpp"
#include "ufilter/schedule.hpp"

namespace ufilter {

/// Propagates each sample independently through the dynamics with an i.i.d.
/// process-noise draw. Throws NumericalError (with sample index) on
/// non-finite output.
StateEnsemble predict_ensemble(const StateEnsemble& posterior,
                               const Eigen::VectorXd& params,
                               const DynamicsModel& model, RngStream& rng);

struct AnalysisConfig {
  NoiseSchedule schedule;
  int minibatch = 0;  ///< score mini-batch M; 0 selects the full ensemble
  int n_out = 0;      ///< posterior ensemble size; 0 keeps the prior size
};

struct AnalysisResult {
  StateEnsemble posterior;
  Eigen::VectorXd estimate;  ///< arithmetic mean of the posterior ensemble
};

/// Fuses one observation into the predicted ensemble: builds the score field
/// from the predicted samples with the damped likelihood gradient
/// h(t) = 1 - t attached, reverse-samples the posterior ensemble, and returns
/// it with its mean as the state estimate.
AnalysisResult analysis_step(const StateEnsemble& predicted,
                             const Eigen::VectorXd& y,
                             const ObservationModel& obs,
                             const AnalysisConfig& cfg, RngStream& rng);

}  // namespace ufilter
