#pragma once

#include <vector>

#include <Eigen/Core>

namespace ufilter {

/// Per-step root-mean-square error averaged over coordinates:
///   rmse_n = sqrt((1/d) sum_i (est_n_i - truth_n_i)^2).
/// Throws std::invalid_argument on length or dimension mismatch.
std::vector<double> compute_rmse(const std::vector<Eigen::VectorXd>& estimates,
                                 const std::vector<Eigen::VectorXd>& truth);

}  // namespace ufilter
