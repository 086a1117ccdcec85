#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace ufilter {

/// Named random-number sub-streams. Every consumer of randomness owns a
/// stream derived from (master seed, stream id, step, iteration) so that
/// toggling one component never shifts the draws of another.
enum class StreamId : std::uint32_t {
  kInitEnsemble = 1,
  kInitCloud = 2,
  kPrediction = 3,
  kReverseSde = 4,
  kScoreRegen = 5,
  kPerturbation = 6,
  kWeighing = 7,
  kResampling = 8,
  kTruthModel = 9,
  kTruthObs = 10,
  kObsMask = 11,
  kAugForecast = 12,
  kAugAnalysis = 13,
  kRepeat = 14,
  kMinibatch = 15,
};

/// Iteration label used by the closing state-estimation pass of an
/// assimilation step. A fixed-parameter EnSF run labels its single pass the
/// same way, so the two filters consume identical draws.
inline constexpr std::uint32_t kFinalPass = 0x7fffffffu;

/// SplitMix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

/// Derives a sub-stream seed from (master, id, step, iter).
std::uint64_t substream_seed(std::uint64_t master, StreamId id,
                             std::uint64_t step = 0, std::uint64_t iter = 0);

/// Deterministic random stream backed by mt19937_64.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  /// U[0, 1)
  double uniform() { return uniform_(gen_); }
  /// N(0, 1)
  double normal() { return normal_(gen_); }

  Eigen::VectorXd normal_vector(Eigen::Index n);
  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols);

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

inline RngStream make_stream(std::uint64_t master, StreamId id,
                             std::uint64_t step = 0, std::uint64_t iter = 0) {
  return RngStream(substream_seed(master, id, step, iter));
}

}  // namespace ufilter
