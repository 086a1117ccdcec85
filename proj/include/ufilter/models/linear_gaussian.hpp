#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "ufilter/model.hpp"

namespace ufilter::models {

/// Scalar linear-Gaussian system x' = a x + w, y = x + e. Its exact posterior
/// is computable in closed form, which makes it the oracle problem for the
/// ensemble filters.
struct LinearGaussianConfig {
  double coefficient = 0.9;  ///< a, truth value for simulation
  double process_std = 0.1;  ///< sqrt(Omega)
  double obs_noise_std = 0.2;  ///< sqrt(Sigma)
  int steps = 50;
  double init_mean = 0.0;
  double init_sd = 1.0;
};

/// Dynamics with params = (a).
DynamicsModel linear_gaussian_dynamics(const LinearGaussianConfig& cfg);

ObservationModel linear_gaussian_observation(const LinearGaussianConfig& cfg);

TruthRun simulate_linear_gaussian_truth(const LinearGaussianConfig& cfg,
                                        std::uint64_t master_seed);

}  // namespace ufilter::models
