#include "ufilter/score.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "ufilter/errors.hpp"
#include "ufilter/schedule.hpp"

namespace ufilter {
namespace {

constexpr double kUnderflowLog = -700.0;  // exp() underflows below this

// Index of the largest finite entry of a row; NaNs are treated as -inf.
Eigen::Index argmax_row(const Eigen::RowVectorXd& row) {
  Eigen::Index best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (Eigen::Index m = 0; m < row.size(); ++m) {
    const double v = row[m];
    if (v == v && v > best_val) {
      best_val = v;
      best = m;
    }
  }
  return best;
}

}  // namespace

ScoreField::ScoreField(StateEnsemble ensemble, int minibatch,
                       LikelihoodGrad likelihood_grad, DampingFn damping,
                       double t_min)
    : ensemble_(std::move(ensemble)),
      minibatch_(minibatch),
      likelihood_grad_(std::move(likelihood_grad)),
      damping_(damping ? std::move(damping) : DampingFn(&default_damping)),
      t_min_(t_min) {
  if (ensemble_.count() < 1 || ensemble_.dim() < 1)
    throw std::invalid_argument("ScoreField: ensemble must be non-empty");
  if (!(t_min_ > 0.0 && t_min_ < 1.0))
    throw std::invalid_argument("ScoreField: t_min must lie in (0, 1)");
  if (minibatch_ <= 0 || minibatch_ >= ensemble_.count())
    minibatch_ = static_cast<int>(ensemble_.count());
  sq_norms_ = ensemble_.samples.colwise().squaredNorm();
}

void ScoreField::check_time(double t) const {
  if (!(t >= t_min_ && t <= 1.0))
    throw std::domain_error("ScoreField: t must lie in [t_min, 1], got t=" +
                            std::to_string(t) +
                            " with t_min=" + std::to_string(t_min_));
}

Eigen::MatrixXd ScoreField::full_batch_score(const Eigen::MatrixXd& Z,
                                             double t) const {
  const double a = NoiseSchedule::alpha(t);
  const double b2 = NoiseSchedule::beta(t) * NoiseSchedule::beta(t);
  const Eigen::MatrixXd& X = ensemble_.samples;  // d x J
  const Eigen::Index n = Z.cols();

  // log kernel(i, m) = -|z_i - a x_m|^2 / (2 b2), expanded so the cross term
  // is a single GEMM.
  Eigen::MatrixXd logk = (2.0 * a) * (Z.transpose() * X);  // n x J
  logk.rowwise() -= (a * a) * sq_norms_;
  Eigen::VectorXd zsq = Z.colwise().squaredNorm().transpose();
  logk.colwise() -= zsq;
  logk *= 1.0 / (2.0 * b2);

  Eigen::VectorXd rowmax = logk.rowwise().maxCoeff();
  Eigen::MatrixXd W = (logk.colwise() - rowmax).array().exp();
  Eigen::VectorXd rowsum = W.rowwise().sum();
  W.array().colwise() /= rowsum.array();

  // Far-tail queries (or non-finite rows): all kernels underflow, so put the
  // whole weight on the nearest sample.
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(rowmax[i] > kUnderflowLog)) {
      W.row(i).setZero();
      W(i, argmax_row(logk.row(i))) = 1.0;
    }
  }

  return (a * (X * W.transpose()) - Z) / b2;
}

Eigen::VectorXd ScoreField::subsampled_score(const Eigen::VectorXd& z, double t,
                                             RngStream& rng) const {
  const Eigen::Index J = ensemble_.count();
  const int M = minibatch_;

  // Partial Fisher-Yates draw of M indices without replacement.
  std::vector<Eigen::Index> idx(J);
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  for (int m = 0; m < M; ++m) {
    const auto j = m + static_cast<Eigen::Index>(rng.uniform() * double(J - m));
    std::swap(idx[m], idx[std::min(j, J - 1)]);
  }

  Eigen::MatrixXd sub(ensemble_.dim(), M);
  for (int m = 0; m < M; ++m) sub.col(m) = ensemble_.samples.col(idx[m]);
  ScoreField subfield{StateEnsemble{std::move(sub)}, 0, nullptr, damping_, t_min_};
  return subfield.full_batch_score(z, t).col(0);
}

Eigen::VectorXd ScoreField::prior_score(const Eigen::VectorXd& z, double t,
                                        RngStream* rng) const {
  return prior_score_batch(z, t, rng).col(0);
}

Eigen::MatrixXd ScoreField::prior_score_batch(const Eigen::MatrixXd& Z,
                                              double t, RngStream* rng) const {
  check_time(t);
  if (Z.rows() != ensemble_.dim())
    throw std::invalid_argument("ScoreField: query dimension mismatch");
  if (minibatch_ == ensemble_.count()) return full_batch_score(Z, t);

  if (rng == nullptr)
    throw std::invalid_argument(
        "ScoreField: mini-batch subsampling requires an RNG stream");
  Eigen::MatrixXd out(Z.rows(), Z.cols());
  for (Eigen::Index i = 0; i < Z.cols(); ++i)
    out.col(i) = subsampled_score(Z.col(i), t, *rng);
  return out;
}

Eigen::VectorXd ScoreField::posterior_score(const Eigen::VectorXd& z, double t,
                                            RngStream* rng) const {
  return posterior_score_batch(z, t, rng).col(0);
}

Eigen::MatrixXd ScoreField::posterior_score_batch(const Eigen::MatrixXd& Z,
                                                  double t,
                                                  RngStream* rng) const {
  if (!likelihood_grad_)
    throw std::invalid_argument(
        "ScoreField: posterior score requires a likelihood gradient");
  Eigen::MatrixXd prior = prior_score_batch(Z, t, rng);
  const double h = damping_(t);
  if (h == 0.0) return prior;

  Eigen::MatrixXd grad = likelihood_grad_(Z);
  if (!grad.allFinite()) {
    Eigen::Index bad = 0;
    for (Eigen::Index i = 0; i < grad.cols(); ++i)
      if (!grad.col(i).allFinite()) {
        bad = i;
        break;
      }
    throw NumericalError(
        "posterior_score: non-finite likelihood gradient at t=" +
        std::to_string(t) + ", sample index " + std::to_string(bad));
  }
  prior.noalias() += h * grad;
  return prior;
}

Eigen::VectorXd ScoreField::kernel_weights(const Eigen::VectorXd& z,
                                           double t) const {
  check_time(t);
  const double a = NoiseSchedule::alpha(t);
  const double b2 = NoiseSchedule::beta(t) * NoiseSchedule::beta(t);
  // direct form: -|z - a x_m|^2 / (2 b2)
  Eigen::VectorXd logk =
      -((a * ensemble_.samples).colwise() - z).colwise().squaredNorm().transpose() /
      (2.0 * b2);
  const double m = logk.maxCoeff();
  if (!(m > kUnderflowLog)) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(logk.size());
    w[argmax_row(logk.transpose())] = 1.0;
    return w;
  }
  Eigen::VectorXd w = (logk.array() - m).exp();
  w /= w.sum();
  return w;
}

}  // namespace ufilter
