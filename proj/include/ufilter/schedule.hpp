#pragma once

#include <utility>

namespace ufilter {

/// Linear forward-diffusion schedule alpha(t) = 1 - t, beta(t) = t on [0, 1].
///
/// The forward SDE's drift and diffusion are implied by the schedule and never
/// materialized separately:
///   b(t)       = d log(alpha_t)/dt        = -1/(1 - t)
///   sigma^2(t) = d(beta_t^2)/dt - 2 b(t) beta_t^2 = 2 t/(1 - t).
struct NoiseSchedule {
  double t_min = 1e-3;  ///< lower pseudo-time cutoff, in (0, 1)
  int n_steps = 100;    ///< uniform grid resolution for the reverse SDE

  static double alpha(double t) { return 1.0 - t; }
  static double beta(double t) { return t; }
  static double drift(double t) { return -1.0 / (1.0 - t); }
  static double diffusion_sq(double t) { return 2.0 * t / (1.0 - t); }

  /// Throws std::invalid_argument unless 0 < t_min < 1 and n_steps >= 1.
  void validate() const;
};

/// (alpha_t, beta_t) at pseudo-time t; throws std::domain_error outside [0, 1].
std::pair<double, double> schedule_eval(const NoiseSchedule& sched, double t);

}  // namespace ufilter
