#include "ufilter/united_filter.hpp"

#include <chrono>
#include <stdexcept>
#include <string>
#include <utility>

#include "ufilter/errors.hpp"
#include "ufilter/sampler.hpp"
#include "ufilter/score.hpp"

namespace ufilter {
namespace {

struct StagePass {
  StateEnsemble ensemble;
  Eigen::VectorXd x_bar;
};

// Stage I: predict the stored posterior with the given parameter estimate and
// fuse the observation. `iter` labels the RNG sub-streams.
StagePass stage_one(const StateEnsemble& base, const Eigen::VectorXd& gamma,
                    const Eigen::VectorXd& y, const DynamicsModel& model,
                    const ObservationModel& obs, const UnitedFilterConfig& cfg,
                    int step, std::uint32_t iter) {
  StateEnsemble source = base;
  if (cfg.strict_score_regen) {
    // Re-generate the step-n samples from the stored posterior score, as the
    // literal iteration reads.
    ScoreField stored{base, cfg.minibatch, nullptr, nullptr, cfg.schedule.t_min};
    RngStream regen = make_stream(cfg.seed, StreamId::kScoreRegen, step, iter);
    source = reverse_sde_sample(stored, cfg.schedule,
                                static_cast<int>(base.count()), regen);
  }

  RngStream pred_rng = make_stream(cfg.seed, StreamId::kPrediction, step, iter);
  StateEnsemble predicted = predict_ensemble(source, gamma, model, pred_rng);

  AnalysisConfig acfg{cfg.schedule, cfg.minibatch, cfg.ensemble_size};
  RngStream sde_rng = make_stream(cfg.seed, StreamId::kReverseSde, step, iter);
  AnalysisResult res = analysis_step(predicted, y, obs, acfg, sde_rng);
  return StagePass{std::move(res.posterior), std::move(res.estimate)};
}

}  // namespace

StepResult assimilate_step(const StateEnsemble& posterior_n,
                           const Eigen::VectorXd& x_bar_n,
                           const ParameterCloud& cloud_n,
                           const Eigen::VectorXd& y,
                           const DynamicsModel& model,
                           const ObservationModel& obs,
                           const UnitedFilterConfig& cfg, int step_index) {
  if (!y.allFinite())
    throw std::invalid_argument("assimilate_step: non-finite observation");
  if (cloud_n.dim() != model.dim_param)
    throw std::invalid_argument("assimilate_step: parameter dimension mismatch");
  if (posterior_n.dim() != model.dim_state)
    throw std::invalid_argument("assimilate_step: state dimension mismatch");

  const auto t0 = std::chrono::steady_clock::now();
  const ExplorationNoise step_noise = cfg.exploration.at_step(step_index);

  StepResult out;
  out.cloud = cloud_n;
  out.gamma_bar = estimate(cloud_n);
  out.diagnostics.iterations.reserve(cfg.iterations);

  for (int l = 0; l < cfg.iterations; ++l) {
    const auto iter = static_cast<std::uint32_t>(l);

    // (I) state estimation with the current parameter estimate
    StagePass pass = stage_one(posterior_n, out.gamma_bar, y, model, obs, cfg,
                               step_index, iter);

    // (II) parameter estimation against the freshly estimated state
    RngStream perturb_rng =
        make_stream(cfg.seed, StreamId::kPerturbation, step_index, iter);
    ParameterCloud proposed = perturb(out.cloud, step_noise, perturb_rng);

    RngStream weigh_rng =
        make_stream(cfg.seed, StreamId::kWeighing, step_index, iter);
    WeighResult w = weigh(proposed, x_bar_n, pass.x_bar, model, weigh_rng,
                          WeighOptions{cfg.fresh_prediction_noise});
    if (w.degenerate) out.diagnostics.particle_degeneracy = true;

    RngStream resample_rng =
        make_stream(cfg.seed, StreamId::kResampling, step_index, iter);
    out.cloud = resample(proposed, w.weights, resample_rng);
    out.gamma_bar = estimate(out.cloud);

    out.diagnostics.iterations.push_back(
        IterationTrace{pass.x_bar, out.gamma_bar});
  }

  // Closing stage-I pass with the final parameter estimate; refreshes the
  // stored posterior ensemble alongside the state estimate.
  StagePass final_pass = stage_one(posterior_n, out.gamma_bar, y, model, obs,
                                   cfg, step_index, kFinalPass);
  out.posterior = std::move(final_pass.ensemble);
  out.x_bar = std::move(final_pass.x_bar);

  out.diagnostics.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

AssimilationRecord run(const DynamicsModel& model,
                       const ObservationProvider& obs_provider,
                       const std::vector<Eigen::VectorXd>& observations,
                       const StateEnsemble& init_ensemble,
                       const ParameterCloud& init_cloud,
                       const UnitedFilterConfig& cfg) {
  if (observations.empty())
    throw std::invalid_argument("run: empty observation sequence");

  AssimilationRecord rec;
  rec.x_bar.push_back(init_ensemble.mean());
  rec.gamma_bar.push_back(estimate(init_cloud));
  if (cfg.store_ensembles) {
    rec.ensembles.push_back(init_ensemble);
    rec.clouds.push_back(init_cloud);
  }

  StateEnsemble posterior = init_ensemble;
  ParameterCloud cloud = init_cloud;
  Eigen::VectorXd x_bar = rec.x_bar.front();

  for (int n = 0; n < static_cast<int>(observations.size()); ++n) {
    StepResult step;
    try {
      ObservationModel obs = obs_provider(n);
      step = assimilate_step(posterior, x_bar, cloud, observations[n], model,
                             obs, cfg, n);
    } catch (const NumericalError& e) {
      throw NumericalError("run: step " + std::to_string(n) + ": " + e.what());
    }
    posterior = std::move(step.posterior);
    cloud = std::move(step.cloud);
    x_bar = step.x_bar;
    rec.x_bar.push_back(step.x_bar);
    rec.gamma_bar.push_back(step.gamma_bar);
    rec.diagnostics.push_back(std::move(step.diagnostics));
    if (cfg.store_ensembles) {
      rec.ensembles.push_back(posterior);
      rec.clouds.push_back(cloud);
    }
  }
  return rec;
}

AssimilationRecord run_fixed_param(const DynamicsModel& model,
                                   const ObservationProvider& obs_provider,
                                   const std::vector<Eigen::VectorXd>& observations,
                                   const StateEnsemble& init_ensemble,
                                   const Eigen::VectorXd& params,
                                   const UnitedFilterConfig& cfg) {
  if (observations.empty())
    throw std::invalid_argument("run_fixed_param: empty observation sequence");

  AssimilationRecord rec;
  rec.x_bar.push_back(init_ensemble.mean());
  rec.gamma_bar.push_back(params);
  if (cfg.store_ensembles) rec.ensembles.push_back(init_ensemble);

  StateEnsemble posterior = init_ensemble;
  for (int n = 0; n < static_cast<int>(observations.size()); ++n) {
    ObservationModel obs = obs_provider(n);
    RngStream pred_rng =
        make_stream(cfg.seed, StreamId::kPrediction, n, kFinalPass);
    StateEnsemble predicted =
        predict_ensemble(posterior, params, model, pred_rng);

    AnalysisConfig acfg{cfg.schedule, cfg.minibatch, cfg.ensemble_size};
    RngStream sde_rng =
        make_stream(cfg.seed, StreamId::kReverseSde, n, kFinalPass);
    AnalysisResult res;
    try {
      res = analysis_step(predicted, observations[n], obs, acfg, sde_rng);
    } catch (const NumericalError& e) {
      throw NumericalError("run_fixed_param: step " + std::to_string(n) +
                           ": " + e.what());
    }
    posterior = std::move(res.posterior);
    rec.x_bar.push_back(res.estimate);
    rec.gamma_bar.push_back(params);
    rec.diagnostics.push_back(StepDiagnostics{});
    if (cfg.store_ensembles) rec.ensembles.push_back(posterior);
  }
  return rec;
}

}  // namespace ufilter
