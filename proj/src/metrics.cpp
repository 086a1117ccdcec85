#include "ufilter/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ufilter {

std::vector<double> compute_rmse(const std::vector<Eigen::VectorXd>& estimates,
                                 const std::vector<Eigen::VectorXd>& truth) {
  if (estimates.size() != truth.size())
    throw std::invalid_argument(
        "compute_rmse: length mismatch (" + std::to_string(estimates.size()) +
        " estimates vs " + std::to_string(truth.size()) + " truth)");

  std::vector<double> out;
  out.reserve(estimates.size());
  for (std::size_t n = 0; n < estimates.size(); ++n) {
    if (estimates[n].size() != truth[n].size())
      throw std::invalid_argument("compute_rmse: dimension mismatch at step " +
                                  std::to_string(n));
    const double mse = (estimates[n] - truth[n]).squaredNorm() /
                       static_cast<double>(truth[n].size());
    out.push_back(std::sqrt(mse));
  }
  return out;
}

}  // namespace ufilter
