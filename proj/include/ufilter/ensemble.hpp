#pragma once

#include <utility>

#include <Eigen/Core>

namespace ufilter {

/// Ensemble of state samples representing a filtering density, one sample per
/// column (dim x count).
struct StateEnsemble {
  Eigen::MatrixXd samples;

  StateEnsemble() = default;
  explicit StateEnsemble(Eigen::MatrixXd s) : samples(std::move(s)) {}

  Eigen::Index dim() const { return samples.rows(); }
  Eigen::Index count() const { return samples.cols(); }
  Eigen::VectorXd mean() const { return samples.rowwise().mean(); }
  bool all_finite() const { return samples.allFinite(); }
};

}  // namespace ufilter
