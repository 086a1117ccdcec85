#include "ufilter/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ufilter/errors.hpp"

namespace ufilter {

StateEnsemble reverse_sde_sample(const ScoreField& field,
                                 const NoiseSchedule& sched, int n_out,
                                 RngStream& rng) {
  sched.validate();
  if (n_out < 1)
    throw std::invalid_argument("reverse_sde_sample: n_out must be >= 1");

  const Eigen::Index d = field.dim();
  const double dt = (1.0 - sched.t_min) / sched.n_steps;

  Eigen::MatrixXd Z = rng.normal_matrix(d, n_out);  // t = 1 init: N(0, I_d)

  for (int i = 0; i < sched.n_steps; ++i) {
    const double t_hi = 1.0 - i * dt;
    const double t_lo = t_hi - dt;
    const double t_mid = std::max(0.5 * (t_hi + t_lo), sched.t_min);

    const double b = NoiseSchedule::drift(t_mid);
    const double s2 = NoiseSchedule::diffusion_sq(t_mid);

    Eigen::MatrixXd score = field.has_likelihood()
                                ? field.posterior_score_batch(Z, t_mid, &rng)
                                : field.prior_score_batch(Z, t_mid, &rng);

    Z.noalias() += dt * (s2 * score - b * Z);
    Z.noalias() += std::sqrt(s2 * dt) * rng.normal_matrix(d, n_out);

    if (!Z.allFinite()) {
      for (Eigen::Index j = 0; j < Z.cols(); ++j) {
        if (!Z.col(j).allFinite())
          throw NumericalError(
              "reverse_sde_sample: non-finite sample at pseudo-time t=" +
              std::to_string(t_lo) + ", sample index " + std::to_string(j));
      }
    }
  }
  return StateEnsemble{std::move(Z)};
}

}  // namespace ufilter
