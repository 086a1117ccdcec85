#pragma once

#include "ufilter/ensemble.hpp"
#include "ufilter/rng.hpp"
#include "ufilter/schedule.hpp"
#include "ufilter/score.hpp"

namespace ufilter {

/// Draws n_out samples from the distribution encoded by the score field.
///
/// Integrates the reverse-time SDE
///   dZ = [b(t) Z - sigma^2(t) S(Z, t)] dt + sigma(t) dW
/// backward from t = 1 (Z ~ N(0, I)) to t = t_min with explicit
/// Euler-Maruyama on a uniform grid of sched.n_steps intervals. Coefficients
/// and the score are evaluated at interval midpoints, so the degenerate
/// endpoints t = 1 (drift pole) and t = 0 (vanishing beta) are never touched.
/// Uses the posterior field when the score carries a likelihood, the prior
/// field otherwise. Single-threaded; the draw order defines the reference
/// output for a given seed.
///
/// Throws NumericalError (with pseudo-time and sample index) if a sample goes
/// non-finite during integration.
StateEnsemble reverse_sde_sample(const ScoreField& field,
                                 const NoiseSchedule& sched, int n_out,
                                 RngStream& rng);

}  // namespace ufilter
