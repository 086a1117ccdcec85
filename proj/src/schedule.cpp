#include "ufilter/schedule.hpp"

#include <stdexcept>
#include <string>

namespace ufilter {

void NoiseSchedule::validate() const {
  if (!(t_min > 0.0 && t_min < 1.0))
    throw std::invalid_argument("NoiseSchedule: t_min must lie in (0, 1), got " +
                                std::to_string(t_min));
  if (n_steps < 1)
    throw std::invalid_argument("NoiseSchedule: n_steps must be >= 1, got " +
                                std::to_string(n_steps));
}

std::pair<double, double> schedule_eval(const NoiseSchedule& sched, double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::domain_error("schedule_eval: t must lie in [0, 1], got " +
                            std::to_string(t));
  return {sched.alpha(t), sched.beta(t)};
}

}  // namespace ufilter
