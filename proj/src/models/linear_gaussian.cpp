#include "ufilter/models/linear_gaussian.hpp"

namespace ufilter::models {

DynamicsModel linear_gaussian_dynamics(const LinearGaussianConfig& cfg) {
  DynamicsModel model;
  model.dim_state = 1;
  model.dim_param = 1;
  model.noise_cov =
      cfg.process_std * cfg.process_std * Eigen::MatrixXd::Identity(1, 1);
  model.noise_sampler =
      diag_gaussian_sampler(Eigen::VectorXd::Constant(1, cfg.process_std));
  model.step = [](const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                  const Eigen::VectorXd& w) -> Eigen::VectorXd {
    return p[0] * x + w;
  };
  return model;
}

ObservationModel linear_gaussian_observation(const LinearGaussianConfig& cfg) {
  return identity_observation(1, cfg.obs_noise_std);
}

TruthRun simulate_linear_gaussian_truth(const LinearGaussianConfig& cfg,
                                        std::uint64_t master_seed) {
  RngStream model_rng = make_stream(master_seed, StreamId::kTruthModel);
  RngStream obs_rng = make_stream(master_seed, StreamId::kTruthObs);

  TruthRun out;
  Eigen::VectorXd x(1);
  x[0] = cfg.init_mean + cfg.init_sd * model_rng.normal();
  out.states.push_back(x);
  for (int n = 0; n < cfg.steps; ++n) {
    x[0] = cfg.coefficient * x[0] + cfg.process_std * model_rng.normal();
    out.states.push_back(x);
    Eigen::VectorXd y(1);
    y[0] = x[0] + cfg.obs_noise_std * obs_rng.normal();
    out.observations.push_back(y);
  }
  return out;
}

}  // namespace ufilter::models
