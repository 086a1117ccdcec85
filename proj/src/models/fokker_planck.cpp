#include "ufilter/models/fokker_planck.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace ufilter::models {

int FokkerPlanckConfig::dim() const {
  return static_cast<int>(std::lround((x_max - x_min) / dx));
}

Eigen::VectorXd FokkerPlanckConfig::grid() const {
  const int d = dim();
  Eigen::VectorXd x(d);
  for (int i = 0; i < d; ++i) x[i] = x_min + (i + 1) * dx;
  return x;
}

Eigen::VectorXd FokkerPlanckConfig::initial_profile() const {
  const Eigen::VectorXd x = grid();
  return 10.0 * (-(x.array() - 10.0).square()).exp();
}

Eigen::VectorXd fp_step(const Eigen::VectorXd& state, double drift,
                        double diffusion, double dx, double dt,
                        const Eigen::VectorXd& noise) {
  const Eigen::Index d = state.size();
  if (d < 3) throw std::invalid_argument("fp_step: need at least 3 nodes");

  const double adv = drift * dt / dx;
  const double dif = 0.5 * diffusion * diffusion * dt / (dx * dx);

  Eigen::VectorXd out(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double left = i > 0 ? state[i - 1] : 0.0;       // Dirichlet-zero ghosts
    const double right = i < d - 1 ? state[i + 1] : 0.0;
    const double x = state[i];
    out[i] = x - adv * (right - x) + dif * (right - 2.0 * x + left) + noise[i];
  }
  return out;
}

Eigen::VectorXd fp_observe(const Eigen::VectorXd& state, double cutoff,
                           const Eigen::VectorXd& noise) {
  return state.array().max(cutoff).matrix() + noise;
}

DynamicsModel fp_dynamics(const FokkerPlanckConfig& cfg) {
  const int d = cfg.dim();
  DynamicsModel model;
  model.dim_state = d;
  model.dim_param = 2;
  model.noise_cov = cfg.sigma * cfg.sigma * Eigen::MatrixXd::Identity(d, d);
  model.noise_sampler =
      diag_gaussian_sampler(Eigen::VectorXd::Constant(d, cfg.sigma));
  const double dx = cfg.dx, dt = cfg.dt;
  model.step = [dx, dt](const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                        const Eigen::VectorXd& w) {
    return fp_step(x, p[0], p[1], dx, dt, w);
  };
  return model;
}

ObservationModel fp_observation(const FokkerPlanckConfig& cfg) {
  const int d = cfg.dim();
  const double cutoff = cfg.cutoff;
  const double inv_var = 1.0 / (cfg.obs_noise_std * cfg.obs_noise_std);

  ObservationModel obs;
  obs.dim_obs = d;
  obs.noise_cov =
      cfg.obs_noise_std * cfg.obs_noise_std * Eigen::MatrixXd::Identity(d, d);
  obs.noise_sampler =
      diag_gaussian_sampler(Eigen::VectorXd::Constant(d, cfg.obs_noise_std));
  obs.observe = [cutoff](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return x.array().max(cutoff).matrix();
  };
  obs.log_likelihood = [cutoff, inv_var](const Eigen::VectorXd& z,
                                         const Eigen::VectorXd& y) {
    return -0.5 * inv_var *
           (z.array().max(cutoff).matrix() - y).squaredNorm();
  };
  // Subgradient of max(z, cutoff): 1 above the threshold, 0 at and below it,
  // so unseen coordinates contribute nothing.
  obs.log_likelihood_grad = [cutoff, inv_var](const Eigen::MatrixXd& Z,
                                              const Eigen::VectorXd& y) {
    Eigen::ArrayXXd clipped = Z.array().max(cutoff);
    Eigen::ArrayXXd residual = (-clipped).colwise() + y.array();
    Eigen::ArrayXXd active = (Z.array() > cutoff).cast<double>();
    return (inv_var * residual * active).matrix().eval();
  };
  return obs;
}

TruthRun simulate_fp_truth(const FokkerPlanckConfig& cfg,
                           std::uint64_t master_seed) {
  RngStream model_rng = make_stream(master_seed, StreamId::kTruthModel);
  RngStream obs_rng = make_stream(master_seed, StreamId::kTruthObs);
  const int d = cfg.dim();

  TruthRun out;
  Eigen::VectorXd x = cfg.initial_profile();
  out.states.push_back(x);
  for (int n = 0; n < cfg.steps; ++n) {
    const Eigen::VectorXd noise = cfg.sigma * model_rng.normal_vector(d);
    x = fp_step(x, cfg.drift, cfg.diffusion, cfg.dx, cfg.dt, noise);
    out.states.push_back(x);
    out.observations.push_back(fp_observe(
        x, cfg.cutoff, cfg.obs_noise_std * obs_rng.normal_vector(d)));
  }
  return out;
}

}  // namespace ufilter::models
