#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Core>

#include "ufilter/model.hpp"

namespace ufilter::models {

/// Stochastic SIR epidemic system on population fractions (S, I, R):
///   S' = S - B S I dt + w1
///   I' = I + (B S I - K I) dt + w2
///   R' = R + K I dt + w3
/// with additive N(0, sigma^2) noise per component. Fractions are not
/// clamped; the noise may push them slightly outside [0, 1].
struct SirConfig {
  double contact_rate = 0.5;   ///< B, truth value for simulation
  double recovery_rate = 2.0;  ///< K
  double dt = 0.2;
  double sigma = 0.005 * std::sqrt(0.2);
  double obs_noise_std = 0.01;  ///< delta; direct observation of (S, I, R)
  int steps = 100;
  Eigen::Vector3d init{1.0, 1e-6, 0.0};
};

/// One SIR update; noise is the additive draw (pass zero for the
/// deterministic map).
Eigen::Vector3d sir_step(const Eigen::Vector3d& state, double contact_rate,
                         double recovery_rate, double dt,
                         const Eigen::Vector3d& noise);

/// Dynamics with params = (B, K).
DynamicsModel sir_dynamics(const SirConfig& cfg);

/// Identity observation with Sigma = obs_noise_std^2 I_3.
ObservationModel sir_observation(const SirConfig& cfg);

TruthRun simulate_sir_truth(const SirConfig& cfg, std::uint64_t master_seed);

}  // namespace ufilter::models
