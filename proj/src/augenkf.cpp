#include "ufilter/augenkf.hpp"

#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Cholesky>

#include "ufilter/errors.hpp"

namespace ufilter {

AugmentedEnsemble augenkf_forecast(const AugmentedEnsemble& ens,
                                   const DynamicsModel& model,
                                   const ExplorationNoise& param_noise,
                                   RngStream& rng) {
  const Eigen::Index N = ens.count();
  if (N < 2)
    throw std::invalid_argument("augenkf_forecast: need at least 2 members");

  AugmentedEnsemble out = ens;
  for (Eigen::Index i = 0; i < N; ++i) {
    const Eigen::VectorXd noise = model.noise_sampler(rng);
    out.samples.col(i).head(ens.dim_state) =
        model.step(ens.samples.col(i).head(ens.dim_state),
                   ens.samples.col(i).tail(ens.dim_param), noise);
    if (!out.samples.col(i).head(ens.dim_state).allFinite())
      throw NumericalError("augenkf_forecast: non-finite member " +
                           std::to_string(i));
  }
  // parameter random walk
  ParameterCloud walk{out.param_block()};
  out.param_block() = perturb(walk, param_noise, rng).particles;
  return out;
}

AugmentedEnsemble augenkf_analysis_with_perturbations(
    const AugmentedEnsemble& ens, const Eigen::VectorXd& y,
    const ObservationModel& obs, const Eigen::MatrixXd& perturbations,
    double inflation) {
  const Eigen::Index N = ens.count();
  const Eigen::Index m = obs.dim_obs;
  if (N < 2)
    throw std::invalid_argument("augenkf_analysis: need at least 2 members");
  if (perturbations.rows() != m || perturbations.cols() != N)
    throw std::invalid_argument(
        "augenkf_analysis: perturbation shape mismatch");

  AugmentedEnsemble out = ens;
  if (inflation != 1.0) {
    const Eigen::VectorXd mean = out.samples.rowwise().mean();
    out.samples = (inflation * (out.samples.colwise() - mean)).colwise() + mean;
  }

  Eigen::MatrixXd predicted(m, N);
  for (Eigen::Index i = 0; i < N; ++i)
    predicted.col(i) = obs.observe(out.samples.col(i).head(out.dim_state));

  const Eigen::VectorXd z_mean = out.samples.rowwise().mean();
  const Eigen::VectorXd h_mean = predicted.rowwise().mean();
  Eigen::MatrixXd Zc = out.samples.colwise() - z_mean;
  Eigen::MatrixXd Hc = predicted.colwise() - h_mean;
  const double scale = 1.0 / static_cast<double>(N - 1);

  Eigen::MatrixXd c_zy = scale * (Zc * Hc.transpose());
  Eigen::MatrixXd s = scale * (Hc * Hc.transpose()) + obs.noise_cov;

  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) {
    // Sigma is SPD, so a failure here means the ensemble statistics are
    // contaminated; retry once with a ridge.
    std::cerr << "augenkf_analysis: innovation covariance not SPD, "
                 "regularizing\n";
    s.diagonal().array() += 1e-8 * (1.0 + s.trace() / static_cast<double>(m));
    llt.compute(s);
    if (llt.info() != Eigen::Success)
      throw NumericalError(
          "augenkf_analysis: innovation covariance not factorizable");
  }

  // gain G = C_zy (C_yy + Sigma)^{-1}; update z_i += G (y + eps_i - g(x_i))
  Eigen::MatrixXd innovations =
      ((-predicted).colwise() + y) + perturbations;  // m x N
  out.samples.noalias() += c_zy * llt.solve(innovations);
  return out;
}

AugmentedEnsemble augenkf_analysis(const AugmentedEnsemble& ens,
                                   const Eigen::VectorXd& y,
                                   const ObservationModel& obs, RngStream& rng,
                                   double inflation) {
  Eigen::MatrixXd eps(obs.dim_obs, ens.count());
  for (Eigen::Index i = 0; i < ens.count(); ++i)
    eps.col(i) = obs.noise_sampler(rng);
  return augenkf_analysis_with_perturbations(ens, y, obs, eps, inflation);
}

AssimilationRecord run_augenkf(const DynamicsModel& model,
                               const ObservationProvider& obs_provider,
                               const std::vector<Eigen::VectorXd>& observations,
                               const AugmentedEnsemble& init,
                               const AugEnKFConfig& cfg) {
  if (observations.empty())
    throw std::invalid_argument("run_augenkf: empty observation sequence");

  AssimilationRecord rec;
  rec.x_bar.push_back(init.state_block().rowwise().mean());
  rec.gamma_bar.push_back(init.param_block().rowwise().mean());

  AugmentedEnsemble ens = init;
  for (int n = 0; n < static_cast<int>(observations.size()); ++n) {
    try {
      RngStream fc_rng = make_stream(cfg.seed, StreamId::kAugForecast, n);
      ens = augenkf_forecast(ens, model, cfg.exploration.at_step(n), fc_rng);

      ObservationModel obs = obs_provider(n);
      RngStream an_rng = make_stream(cfg.seed, StreamId::kAugAnalysis, n);
      ens = augenkf_analysis(ens, observations[n], obs, an_rng, cfg.inflation);
    } catch (const NumericalError& e) {
      throw NumericalError("run_augenkf: step " + std::to_string(n) + ": " +
                           e.what());
    }
    rec.x_bar.push_back(ens.state_block().rowwise().mean());
    rec.gamma_bar.push_back(ens.param_block().rowwise().mean());
    rec.diagnostics.push_back(StepDiagnostics{});
  }
  return rec;
}

}  // namespace ufilter
