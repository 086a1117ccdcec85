#include "ufilter/ensf.hpp"

#include <string>
#include <utility>

#include "ufilter/errors.hpp"
#include "ufilter/sampler.hpp"
#include "ufilter/score.hpp"

namespace ufilter {

StateEnsemble predict_ensemble(const StateEnsemble& posterior,
                               const Eigen::VectorXd& params,
                               const DynamicsModel& model, RngStream& rng) {
  if (posterior.count() < 1)
    throw std::invalid_argument("predict_ensemble: empty ensemble");
  if (!params.allFinite())
    throw std::invalid_argument("predict_ensemble: non-finite parameters");

  Eigen::MatrixXd out(posterior.dim(), posterior.count());
  for (Eigen::Index j = 0; j < posterior.count(); ++j) {
    const Eigen::VectorXd noise = model.noise_sampler(rng);
    out.col(j) = model.step(posterior.samples.col(j), params, noise);
    if (!out.col(j).allFinite())
      throw NumericalError("predict_ensemble: non-finite sample at index " +
                           std::to_string(j));
  }
  return StateEnsemble{std::move(out)};
}

AnalysisResult analysis_step(const StateEnsemble& predicted,
                             const Eigen::VectorXd& y,
                             const ObservationModel& obs,
                             const AnalysisConfig& cfg, RngStream& rng) {
  if (predicted.count() < 1)
    throw std::invalid_argument("analysis_step: empty predicted ensemble");
  if (!y.allFinite())
    throw std::invalid_argument("analysis_step: non-finite observation");

  LikelihoodGrad grad = [&obs, y](const Eigen::MatrixXd& Z) {
    return obs.log_likelihood_grad(Z, y);
  };
  ScoreField field{predicted, cfg.minibatch, std::move(grad),
                   &ScoreField::default_damping, cfg.schedule.t_min};

  const int n_out =
      cfg.n_out > 0 ? cfg.n_out : static_cast<int>(predicted.count());
  AnalysisResult res;
  res.posterior = reverse_sde_sample(field, cfg.schedule, n_out, rng);
  res.estimate = res.posterior.mean();
  return res;
}

}  // namespace ufilter
