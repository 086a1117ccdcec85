#include "ufilter/models/lorenz96.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace ufilter::models {

Eigen::VectorXd lorenz96_step(const Eigen::VectorXd& state, double advection,
                              double damping, double forcing, double dt,
                              const Eigen::VectorXd& noise) {
  const Eigen::Index d = state.size();
  if (d < 4) throw std::invalid_argument("lorenz96_step: need dim >= 4");

  Eigen::VectorXd out(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Eigen::Index ip1 = (i + 1) % d;
    const Eigen::Index im1 = (i + d - 1) % d;
    const Eigen::Index im2 = (i + d - 2) % d;
    const double tendency =
        advection * (state[ip1] - state[im2]) * state[im1] -
        damping * state[i] + forcing;
    out[i] = state[i] + tendency * dt + noise[i];
  }
  return out;
}

ObservationMask sample_observation_mask(int dim, int n_obs, int n_arctan,
                                        RngStream& rng) {
  if (n_obs < 1 || n_obs > dim || n_arctan < 0 || n_arctan > n_obs)
    throw std::invalid_argument(
        "sample_observation_mask: need 0 <= n_arctan <= n_obs <= dim");

  // Partial Fisher-Yates for the observed set, then again for the arctan
  // subset; indices are reported sorted.
  std::vector<int> pool(dim);
  std::iota(pool.begin(), pool.end(), 0);
  for (int k = 0; k < n_obs; ++k) {
    const int j = k + static_cast<int>(rng.uniform() * double(dim - k));
    std::swap(pool[k], pool[std::min(j, dim - 1)]);
  }
  ObservationMask mask;
  mask.indices.assign(pool.begin(), pool.begin() + n_obs);
  std::sort(mask.indices.begin(), mask.indices.end());

  std::vector<int> slots(n_obs);
  std::iota(slots.begin(), slots.end(), 0);
  for (int k = 0; k < n_arctan; ++k) {
    const int j = k + static_cast<int>(rng.uniform() * double(n_obs - k));
    std::swap(slots[k], slots[std::min(j, n_obs - 1)]);
  }
  mask.arctan.assign(n_obs, 0);
  for (int k = 0; k < n_arctan; ++k) mask.arctan[slots[k]] = 1;
  return mask;
}

Eigen::VectorXd lorenz96_observe(const Eigen::VectorXd& state,
                                 const ObservationMask& mask,
                                 const Eigen::VectorXd& noise) {
  const auto m = static_cast<Eigen::Index>(mask.indices.size());
  Eigen::VectorXd y(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double v = state[mask.indices[j]];
    y[j] = (mask.arctan[j] ? std::atan(v) : v) + noise[j];
  }
  return y;
}

DynamicsModel lorenz96_dynamics(const Lorenz96Config& cfg) {
  DynamicsModel model;
  model.dim_state = cfg.dim;
  model.dim_param = 3;
  model.noise_cov =
      cfg.sigma * cfg.sigma * Eigen::MatrixXd::Identity(cfg.dim, cfg.dim);
  model.noise_sampler =
      diag_gaussian_sampler(Eigen::VectorXd::Constant(cfg.dim, cfg.sigma));
  const double dt = cfg.dt;
  model.step = [dt](const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                    const Eigen::VectorXd& w) {
    return lorenz96_step(x, p[0], p[1], p[2], dt, w);
  };
  return model;
}

ObservationModel lorenz96_observation(const ObservationMask& mask,
                                      double obs_noise_std,
                                      Eigen::Index dim_state) {
  const auto m = static_cast<Eigen::Index>(mask.indices.size());
  for (int idx : mask.indices)
    if (idx < 0 || idx >= dim_state)
      throw std::invalid_argument(
          "lorenz96_observation: mask index out of range");

  const double inv_var = 1.0 / (obs_noise_std * obs_noise_std);
  ObservationModel obs;
  obs.dim_obs = m;
  obs.noise_cov =
      obs_noise_std * obs_noise_std * Eigen::MatrixXd::Identity(m, m);
  obs.noise_sampler =
      diag_gaussian_sampler(Eigen::VectorXd::Constant(m, obs_noise_std));
  obs.observe = [mask, m](const Eigen::VectorXd& x) {
    return lorenz96_observe(x, mask, Eigen::VectorXd::Zero(m));
  };
  obs.log_likelihood = [mask, m, inv_var](const Eigen::VectorXd& z,
                                          const Eigen::VectorXd& y) {
    const Eigen::VectorXd g = lorenz96_observe(z, mask, Eigen::VectorXd::Zero(m));
    return -0.5 * inv_var * (g - y).squaredNorm();
  };
  obs.log_likelihood_grad = [mask, m, inv_var, dim_state](
                                const Eigen::MatrixXd& Z,
                                const Eigen::VectorXd& y) {
    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(dim_state, Z.cols());
    for (Eigen::Index c = 0; c < Z.cols(); ++c) {
      for (Eigen::Index j = 0; j < m; ++j) {
        const int i = mask.indices[j];
        const double v = Z(i, c);
        if (mask.arctan[j]) {
          grad(i, c) =
              inv_var * (y[j] - std::atan(v)) / (1.0 + v * v);
        } else {
          grad(i, c) = inv_var * (y[j] - v);
        }
      }
    }
    return grad;
  };
  return obs;
}

Lorenz96Truth simulate_lorenz96_truth(const Lorenz96Config& cfg,
                                      std::uint64_t master_seed) {
  RngStream model_rng = make_stream(master_seed, StreamId::kTruthModel);
  RngStream obs_rng = make_stream(master_seed, StreamId::kTruthObs);

  Lorenz96Truth out;
  const double equilibrium = cfg.forcing / cfg.damping;
  Eigen::VectorXd x =
      Eigen::VectorXd::Constant(cfg.dim, equilibrium) +
      cfg.truth_init_sd * model_rng.normal_vector(cfg.dim);
  out.states.push_back(x);

  for (int n = 0; n < cfg.steps; ++n) {
    const Eigen::VectorXd noise = cfg.sigma * model_rng.normal_vector(cfg.dim);
    x = lorenz96_step(x, cfg.advection, cfg.damping, cfg.forcing, cfg.dt, noise);
    out.states.push_back(x);

    RngStream mask_rng = make_stream(master_seed, StreamId::kObsMask, n);
    ObservationMask mask =
        sample_observation_mask(cfg.dim, cfg.n_obs, cfg.n_arctan, mask_rng);
    const Eigen::VectorXd obs_noise =
        cfg.obs_noise_std * obs_rng.normal_vector(cfg.n_obs);
    out.observations.push_back(lorenz96_observe(x, mask, obs_noise));
    out.masks.push_back(std::move(mask));
  }
  return out;
}

}  // namespace ufilter::models
