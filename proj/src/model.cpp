#include "ufilter/model.hpp"

#include <cmath>
#include <utility>

namespace ufilter {

ObservationProvider fixed_observation(ObservationModel obs) {
  return [obs = std::move(obs)](int) { return obs; };
}

std::function<Eigen::VectorXd(RngStream&)> diag_gaussian_sampler(
    Eigen::VectorXd stddev) {
  return [stddev = std::move(stddev)](RngStream& rng) {
    Eigen::VectorXd v = rng.normal_vector(stddev.size());
    return (v.array() * stddev.array()).matrix().eval();
  };
}

ObservationModel identity_observation(Eigen::Index dim, double obs_std) {
  ObservationModel obs;
  obs.dim_obs = dim;
  obs.observe = [](const Eigen::VectorXd& x) { return x; };
  obs.noise_cov = obs_std * obs_std *
                  Eigen::MatrixXd::Identity(dim, dim);
  obs.noise_sampler =
      diag_gaussian_sampler(Eigen::VectorXd::Constant(dim, obs_std));
  const double inv_var = 1.0 / (obs_std * obs_std);
  obs.log_likelihood = [inv_var](const Eigen::VectorXd& z,
                                 const Eigen::VectorXd& y) {
    return -0.5 * inv_var * (z - y).squaredNorm();
  };
  obs.log_likelihood_grad = [inv_var](const Eigen::MatrixXd& Z,
                                      const Eigen::VectorXd& y) {
    Eigen::MatrixXd grad = (-Z).colwise() + y;  // y - z, column-wise
    grad *= inv_var;
    return grad;
  };
  return obs;
}

}  // namespace ufilter
