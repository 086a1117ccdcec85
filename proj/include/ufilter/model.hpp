#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "ufilter/rng.hpp"

namespace ufilter {

/// State-transition model x' = f(x, params) + w, w ~ N(0, Omega).
struct DynamicsModel {
  Eigen::Index dim_state = 0;
  Eigen::Index dim_param = 0;

  /// Deterministic given (state, params, noise draw). The noise argument is
  /// the additive draw w itself, already scaled by the model's noise law.
  std::function<Eigen::VectorXd(const Eigen::VectorXd& state,
                                const Eigen::VectorXd& params,
                                const Eigen::VectorXd& noise)>
      step;

  Eigen::MatrixXd noise_cov;  ///< Omega, dim_state x dim_state, symmetric PSD
  std::function<Eigen::VectorXd(RngStream&)> noise_sampler;  ///< w ~ N(0, Omega)
};

/// Observation process y = g(x) + e, e ~ N(0, Sigma), with the Gaussian
/// log-likelihood and its state gradient supplied analytically.
struct ObservationModel {
  Eigen::Index dim_obs = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> observe;  ///< g
  Eigen::MatrixXd noise_cov;  ///< Sigma, dim_obs x dim_obs, SPD
  std::function<Eigen::VectorXd(RngStream&)> noise_sampler;  ///< e ~ N(0, Sigma)

  /// log p(y | z) up to an additive constant.
  std::function<double(const Eigen::VectorXd& z, const Eigen::VectorXd& y)>
      log_likelihood;

  /// Gradient of log p(y | z) in z, one column per state in Z.
  std::function<Eigen::MatrixXd(const Eigen::MatrixXd& Z,
                                const Eigen::VectorXd& y)>
      log_likelihood_grad;
};

/// Observation model provider for runs whose observation operator changes
/// between steps (e.g. resampled observation masks).
using ObservationProvider = std::function<ObservationModel(int step)>;

/// Wraps a fixed observation model as a provider.
ObservationProvider fixed_observation(ObservationModel obs);

/// Zero-mean Gaussian sampler with diagonal covariance diag(stddev^2).
std::function<Eigen::VectorXd(RngStream&)> diag_gaussian_sampler(
    Eigen::VectorXd stddev);

/// Identity observation operator with Sigma = obs_std^2 I.
ObservationModel identity_observation(Eigen::Index dim, double obs_std);

/// One simulated truth trajectory plus its observation sequence.
/// states has steps + 1 entries (initial condition first); observations has
/// one entry per assimilation step, observing states[n + 1].
struct TruthRun {
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> observations;
};

}  // namespace ufilter
