#include "ufilter/models/sir.hpp"

#include <utility>

namespace ufilter::models {

Eigen::Vector3d sir_step(const Eigen::Vector3d& state, double contact_rate,
                         double recovery_rate, double dt,
                         const Eigen::Vector3d& noise) {
  const double s = state[0], i = state[1], r = state[2];
  const double infections = contact_rate * s * i * dt;
  const double recoveries = recovery_rate * i * dt;
  Eigen::Vector3d out;
  out[0] = s - infections + noise[0];
  out[1] = i + infections - recoveries + noise[1];
  out[2] = r + recoveries + noise[2];
  return out;
}

DynamicsModel sir_dynamics(const SirConfig& cfg) {
  DynamicsModel model;
  model.dim_state = 3;
  model.dim_param = 2;
  model.noise_cov = cfg.sigma * cfg.sigma * Eigen::MatrixXd::Identity(3, 3);
  model.noise_sampler =
      diag_gaussian_sampler(Eigen::VectorXd::Constant(3, cfg.sigma));
  const double dt = cfg.dt;
  model.step = [dt](const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                    const Eigen::VectorXd& w) -> Eigen::VectorXd {
    return sir_step(x, p[0], p[1], dt, w);
  };
  return model;
}

ObservationModel sir_observation(const SirConfig& cfg) {
  return identity_observation(3, cfg.obs_noise_std);
}

TruthRun simulate_sir_truth(const SirConfig& cfg, std::uint64_t master_seed) {
  RngStream model_rng = make_stream(master_seed, StreamId::kTruthModel);
  RngStream obs_rng = make_stream(master_seed, StreamId::kTruthObs);

  TruthRun out;
  Eigen::Vector3d x = cfg.init;
  out.states.push_back(x);
  for (int n = 0; n < cfg.steps; ++n) {
    const Eigen::Vector3d noise = cfg.sigma * model_rng.normal_vector(3);
    x = sir_step(x, cfg.contact_rate, cfg.recovery_rate, cfg.dt, noise);
    out.states.push_back(x);
    out.observations.push_back(x + cfg.obs_noise_std * obs_rng.normal_vector(3));
  }
  return out;
}

}  // namespace ufilter::models
