#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "ufilter/model.hpp"

namespace ufilter::models {

/// Finite-difference discretization of the 1-d Fokker-Planck equation
///   du = (-b du/dx + (delta^2/2) d2u/dx2) dt
/// on [x_min, x_max] with forward first difference for the advection term and
/// centered second difference for the diffusion term:
///   X_i' = X_i - b (X_{i+1} - X_i)/dx dt
///              + (delta^2/2) (X_{i+1} - 2 X_i + X_{i-1})/dx^2 dt + w_i.
/// Ghost values beyond both ends are held at zero (the Gaussian-bump initial
/// profile decays to ~0 there). Grid nodes are x_i = x_min + i dx,
/// i = 1..dim. Stability ratio (delta^2/2) dt/dx^2 = 0.32 at the default
/// constants.
struct FokkerPlanckConfig {
  double drift = 10.0;     ///< b, truth value for simulation
  double diffusion = 2.0;  ///< delta
  double x_min = 0.0;
  double x_max = 30.0;
  double dx = 0.25;  ///< => dim = 120
  double dt = 0.01;
  int steps = 100;  ///< horizon [0, 1]
  double sigma = 0.5 * 0.01;
  double obs_noise_std = 0.02;
  double cutoff = 0.1;  ///< lambda, detector threshold

  int dim() const;
  Eigen::VectorXd grid() const;
  /// u(x, 0) = 10 exp(-(x - 10)^2) on the grid.
  Eigen::VectorXd initial_profile() const;
};

Eigen::VectorXd fp_step(const Eigen::VectorXd& state, double drift,
                        double diffusion, double dx, double dt,
                        const Eigen::VectorXd& noise);

/// Detector observation y_i = max(x_i, cutoff) + noise_i.
Eigen::VectorXd fp_observe(const Eigen::VectorXd& state, double cutoff,
                           const Eigen::VectorXd& noise);

/// Dynamics with params = (b, delta).
DynamicsModel fp_dynamics(const FokkerPlanckConfig& cfg);

/// Cut-off observation of every coordinate; the log-likelihood gradient uses
/// the subgradient d max(x, lambda)/dx = 1 for x > lambda, 0 for x <= lambda,
/// so coordinates below the detector threshold are ignored.
ObservationModel fp_observation(const FokkerPlanckConfig& cfg);

TruthRun simulate_fp_truth(const FokkerPlanckConfig& cfg,
                           std::uint64_t master_seed);

}  // namespace ufilter::models
