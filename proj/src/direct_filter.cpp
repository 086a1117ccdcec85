#include "ufilter/direct_filter.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace ufilter {
namespace {

// Square root factor of a symmetric PSD matrix: cheap diagonal path when the
// off-diagonal part vanishes, eigendecomposition otherwise (handles
// semidefinite Gamma, including Gamma = 0).
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& cov) {
  const Eigen::Index n = cov.rows();
  if (cov.isDiagonal(0.0))
    return cov.diagonal().array().max(0.0).sqrt().matrix().asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  return es.eigenvectors() *
         es.eigenvalues().array().max(0.0).sqrt().matrix().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace

ExplorationNoise ExplorationNoise::at_step(int n) const {
  if (decay == 1.0 || n == 0) return *this;
  return ExplorationNoise{cov * std::pow(decay, n), decay};
}

ParameterCloud perturb(const ParameterCloud& cloud,
                       const ExplorationNoise& noise, RngStream& rng) {
  if (cloud.count() < 1)
    throw std::invalid_argument("perturb: empty parameter cloud");
  if (noise.cov.rows() != cloud.dim() || noise.cov.cols() != cloud.dim())
    throw std::invalid_argument("perturb: covariance dimension mismatch");

  const Eigen::MatrixXd root = psd_sqrt(noise.cov);
  Eigen::MatrixXd out = cloud.particles;
  for (Eigen::Index k = 0; k < out.cols(); ++k)
    out.col(k) += root * rng.normal_vector(cloud.dim());
  return ParameterCloud{std::move(out)};
}

WeighResult weigh(const ParameterCloud& cloud, const Eigen::VectorXd& x_prev,
                  const Eigen::VectorXd& x_est, const DynamicsModel& model,
                  RngStream& rng, const WeighOptions& options) {
  const Eigen::Index K = cloud.count();
  const Eigen::Index d = model.dim_state;
  if (K < 1) throw std::invalid_argument("weigh: empty parameter cloud");

  // Regularized likelihood covariance; Omega itself may be tiny or singular.
  const double rho =
      std::max(1e-8, 1e-4 * model.noise_cov.trace() / static_cast<double>(d));
  Eigen::MatrixXd omega_reg = model.noise_cov;
  omega_reg.diagonal().array() += rho;
  Eigen::LLT<Eigen::MatrixXd> llt(omega_reg);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("weigh: likelihood covariance not SPD");

  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd logw(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const Eigen::VectorXd noise =
        options.fresh_noise ? model.noise_sampler(rng) : zero;
    const Eigen::VectorXd pred = model.step(x_prev, cloud.particles.col(k), noise);
    const Eigen::VectorXd r = pred - x_est;
    logw[k] = -0.5 * r.dot(llt.solve(r));
  }

  double maxlog = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < K; ++k)
    if (logw[k] == logw[k] && logw[k] > maxlog) maxlog = logw[k];

  WeighResult res;
  if (!std::isfinite(maxlog)) {
    res.weights = Eigen::VectorXd::Constant(K, 1.0 / static_cast<double>(K));
    res.degenerate = true;
    return res;
  }
  res.weights = (logw.array() - maxlog).exp();
  const double total = res.weights.sum();
  res.weights /= total;
  return res;
}

ParameterCloud resample(const ParameterCloud& cloud,
                        const Eigen::VectorXd& weights, RngStream& rng) {
  const Eigen::Index K = cloud.count();
  if (weights.size() != K)
    throw std::invalid_argument("resample: weight count mismatch");

  Eigen::VectorXd cum(K);
  double acc = 0.0;
  for (Eigen::Index k = 0; k < K; ++k) {
    acc += weights[k];
    cum[k] = acc;
  }

  // u in (0, 1/K]; a crossing exactly at a cumulative boundary selects the
  // lower-indexed particle.
  const double u = (1.0 - rng.uniform()) / static_cast<double>(K);
  Eigen::MatrixXd out(cloud.dim(), K);
  Eigen::Index j = 0;
  for (Eigen::Index k = 0; k < K; ++k) {
    const double p = u + static_cast<double>(k) / static_cast<double>(K);
    while (j < K - 1 && cum[j] < p) ++j;
    out.col(k) = cloud.particles.col(j);
  }
  return ParameterCloud{std::move(out)};
}

Eigen::VectorXd estimate(const ParameterCloud& cloud) {
  if (cloud.count() < 1)
    throw std::invalid_argument("estimate: empty parameter cloud");
  return cloud.particles.rowwise().mean();
}

double effective_sample_size(const Eigen::VectorXd& weights) {
  const double s = weights.squaredNorm();
  return s > 0.0 ? 1.0 / s : 0.0;
}

}  // namespace ufilter
