#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "ufilter/model.hpp"

namespace ufilter::models {

/// Parameterized Lorenz-96 system with cyclic indexing:
///   X_i' = X_i + [a (X_{i+1} - X_{i-2}) X_{i-1} - c X_i + F] dt + w_i
/// (a = advection weight, c = damping, F = forcing).
struct Lorenz96Config {
  double advection = 2.0;  ///< truth values for simulation
  double damping = 5.0;
  double forcing = 8.0;
  int dim = 200;
  double dt = 0.02;
  int steps = 50;
  double sigma = 0.1 * 0.1414213562373095;  ///< 0.1 sqrt(dt)
  int n_obs = 100;     ///< observed coordinates per observation time
  int n_arctan = 10;   ///< of those, observed through arctan
  double obs_noise_std = 0.05;
  double truth_init_sd = 0.1;  ///< spread around the F/c equilibrium
};

Eigen::VectorXd lorenz96_step(const Eigen::VectorXd& state, double advection,
                              double damping, double forcing, double dt,
                              const Eigen::VectorXd& noise);

/// Observed coordinate set for one observation time; arctan[j] marks whether
/// slot j is read through arctan. Indices are sorted ascending and unique.
struct ObservationMask {
  std::vector<int> indices;
  std::vector<std::uint8_t> arctan;
};

/// Uniform draw of n_obs coordinates without replacement, with an n_arctan
/// subset flagged for the arctan read-out. Throws std::invalid_argument when
/// the sizes are inconsistent with dim.
ObservationMask sample_observation_mask(int dim, int n_obs, int n_arctan,
                                        RngStream& rng);

/// y_j = arctan(x_{idx_j}) or x_{idx_j}, plus the additive noise draw.
Eigen::VectorXd lorenz96_observe(const Eigen::VectorXd& state,
                                 const ObservationMask& mask,
                                 const Eigen::VectorXd& noise);

/// Dynamics with params = (advection, damping, forcing).
DynamicsModel lorenz96_dynamics(const Lorenz96Config& cfg);

/// Masked partial observation for one observation time. Throws
/// std::invalid_argument when a mask index is out of range.
ObservationModel lorenz96_observation(const ObservationMask& mask,
                                      double obs_noise_std,
                                      Eigen::Index dim_state);

struct Lorenz96Truth {
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> observations;
  std::vector<ObservationMask> masks;  ///< resampled at every observation time
};

Lorenz96Truth simulate_lorenz96_truth(const Lorenz96Config& cfg,
                                      std::uint64_t master_seed);

}  // namespace ufilter::models
