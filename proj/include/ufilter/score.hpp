#pragma once

#include <functional>
#include <utility>

#include <Eigen/Core>

#include "ufilter/ensemble.hpp"
#include "ufilter/rng.hpp"

namespace ufilter {

/// Gradient of log p(Y | z), evaluated column-wise on a batch of states.
using LikelihoodGrad = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>;

/// Pseudo-time damping weight for the likelihood correction.
using DampingFn = std::function<double(double)>;

/// Training-free score approximation built from an ensemble.
///
/// The prior field is
///   S(z, t) = sum_m w_m(z, t) * -(z - alpha_t x_m) / beta_t^2,
/// with self-normalized Gaussian kernel weights
///   w_m(z, t) = N(z; alpha_t x_m, beta_t^2 I) / sum_m' N(z; alpha_t x_m', beta_t^2 I)
/// over a mini-batch of the ensemble (full batch by default). With a
/// likelihood gradient attached, the posterior field adds h(t) grad log p(Y|z).
class ScoreField {
 public:
  /// minibatch = 0 (or >= ensemble size) selects the full ensemble.
  explicit ScoreField(StateEnsemble ensemble, int minibatch = 0,
                      LikelihoodGrad likelihood_grad = nullptr,
                      DampingFn damping = nullptr, double t_min = 1e-3);

  /// Default damping h(t) = 1 - t; h(0) = 1, h(1) = 0.
  static double default_damping(double t) { return 1.0 - t; }

  Eigen::Index dim() const { return ensemble_.dim(); }
  Eigen::Index ensemble_size() const { return ensemble_.count(); }
  int minibatch_size() const { return minibatch_; }
  bool has_likelihood() const { return static_cast<bool>(likelihood_grad_); }
  double t_min() const { return t_min_; }
  double damping(double t) const { return damping_(t); }
  const StateEnsemble& ensemble() const { return ensemble_; }

  /// Prior score at a single point; rng is consumed only when the mini-batch
  /// subsamples the ensemble.
  Eigen::VectorXd prior_score(const Eigen::VectorXd& z, double t,
                              RngStream* rng = nullptr) const;

  /// Prior score plus damped likelihood gradient; requires a likelihood.
  Eigen::VectorXd posterior_score(const Eigen::VectorXd& z, double t,
                                  RngStream* rng = nullptr) const;

  /// Batched evaluation over the columns of Z (dim x n); the reverse-SDE
  /// sampler calls these.
  Eigen::MatrixXd prior_score_batch(const Eigen::MatrixXd& Z, double t,
                                    RngStream* rng = nullptr) const;
  Eigen::MatrixXd posterior_score_batch(const Eigen::MatrixXd& Z, double t,
                                        RngStream* rng = nullptr) const;

  /// Normalized kernel weights over the full ensemble for one query point;
  /// exposed so the normalization invariant can be checked directly.
  Eigen::VectorXd kernel_weights(const Eigen::VectorXd& z, double t) const;

 private:
  void check_time(double t) const;
  Eigen::MatrixXd full_batch_score(const Eigen::MatrixXd& Z, double t) const;
  Eigen::VectorXd subsampled_score(const Eigen::VectorXd& z, double t,
                                   RngStream& rng) const;

  StateEnsemble ensemble_;
  Eigen::RowVectorXd sq_norms_;  // columnwise squared norms of the ensemble
  int minibatch_;
  LikelihoodGrad likelihood_grad_;
  DampingFn damping_;
  double t_min_;
};

}  // namespace ufilter
