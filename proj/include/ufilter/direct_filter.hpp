#pragma once

#include <utility>

#include <Eigen/Core>

#include "ufilter/model.hpp"
#include "ufilter/rng.hpp"

namespace ufilter {

/// Equally weighted particle cloud in parameter space, one particle per
/// column (dim_param x count).
struct ParameterCloud {
  Eigen::MatrixXd particles;

  ParameterCloud() = default;
  explicit ParameterCloud(Eigen::MatrixXd p) : particles(std::move(p)) {}

  Eigen::Index dim() const { return particles.rows(); }
  Eigen::Index count() const { return particles.cols(); }
};

/// Random-walk exploration noise for the pseudo parameter process
/// gamma_{n+1} = gamma_n + xi_n, xi ~ N(0, Gamma).
struct ExplorationNoise {
  Eigen::MatrixXd cov;  ///< Gamma, dim_param x dim_param, symmetric PSD
  double decay = 1.0;   ///< per-assimilation-step multiplier on Gamma, in (0, 1]

  /// Gamma scaled for assimilation step n (Gamma * decay^n).
  ExplorationNoise at_step(int n) const;
};

/// Offsets every particle by an i.i.d. N(0, Gamma) draw.
ParameterCloud perturb(const ParameterCloud& cloud,
                       const ExplorationNoise& noise, RngStream& rng);

struct WeighOptions {
  /// Include a fresh process-noise draw in each particle's one-step
  /// prediction; disabling compares deterministic predictions.
  bool fresh_noise = true;
};

struct WeighResult {
  Eigen::VectorXd weights;  ///< non-negative, sums to 1
  bool degenerate = false;  ///< uniform fallback was taken
};

/// Weights each particle by the consistency of its one-step prediction
/// x_hat_k = f(x_prev, gamma_k) (+ noise) with the estimated state x_est:
///   w_k ∝ exp[-1/2 (x_hat_k - x_est)' Omega_reg^{-1} (x_hat_k - x_est)],
/// computed in log-space and normalized to sum to 1. Omega_reg = Omega + rho I
/// with rho = max(1e-8, 1e-4 trace(Omega)/d) guards a near-deterministic
/// model. Falls back to uniform weights (degenerate flag set) only when no
/// finite log-weight exists.
WeighResult weigh(const ParameterCloud& cloud, const Eigen::VectorXd& x_prev,
                  const Eigen::VectorXd& x_est, const DynamicsModel& model,
                  RngStream& rng, const WeighOptions& options = {});

/// Systematic resampling: u ~ (0, 1/K], particles selected at cumulative
/// weight crossings of u + k/K. A crossing exactly at a boundary selects the
/// lower-indexed particle. Output is equally weighted with the same count.
ParameterCloud resample(const ParameterCloud& cloud,
                        const Eigen::VectorXd& weights, RngStream& rng);

/// Arithmetic mean over the (equally weighted) particles.
Eigen::VectorXd estimate(const ParameterCloud& cloud);

/// Effective sample size 1 / sum(w^2) of a normalized weight vector.
double effective_sample_size(const Eigen::VectorXd& weights);

}  // namespace ufilter
