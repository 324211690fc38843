#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "streamtree/leaf_predictors.h"
#include "streamtree/rng.h"
#include "streamtree/schema.h"
#include "streamtree/sufficient_stats.h"

namespace streamtree {

struct OlboostConfig {
  bool enabled = false;
  PredictorKind core = PredictorKind::kAdaptiveNaiveBayes;
  double min_lambda = 1.0;
  double max_lambda = 12.0;

  // Throws ConfigError unless 0 <= min_lambda <= max_lambda (finite).
  void Validate() const;
};

// lambda = (min - max) * p_true + max. Throws std::invalid_argument if
// p_true is outside [0, 1] or the lambda range is invalid.
double ComputeLambda(double p_true, double min_lambda, double max_lambda);

// Lambda range, core tag and rng state, as charged by the model-size formula.
inline constexpr std::size_t kOlboostFixedBytes = 56;

inline std::uint64_t SampleWeight(double lambda, Rng& rng) {
  return rng.Poisson(lambda);
}

// Leaf-local boosted predictor. Owns a second set of class counts and
// observers that only ever see Poisson-reweighted copies of the instances
// reaching its leaf. Nothing here is visible to split evaluation.
class OlboostState {
 public:
  OlboostState(const Schema& schema, const OlboostConfig& config,
               std::uint64_t seed);

  // Predict, draw w ~ Poisson(lambda(P(y))), absorb the instance with
  // weight w. Returns the drawn weight.
  std::uint64_t Train(const Instance& instance);

  ProbabilityVector Predict(std::span<const double> x) const;

  // Fresh states for the children of a split: same config, child-specific
  // rng streams derived from `child_seeds`.
  std::vector<OlboostState> MigrateOnSplit(
      const Schema& schema, std::span<const std::uint64_t> child_seeds) const;

  const ClassDistribution& distribution() const { return dist_; }
  std::span<const AttributeObserver> observers() const { return observers_; }
  const AdaptiveState& adaptive() const { return adaptive_; }
  PredictorKind core() const { return core_; }
  double min_lambda() const { return min_lambda_; }
  double max_lambda() const { return max_lambda_; }
  const Rng& rng() const { return rng_; }

  std::size_t AccountedBytes() const;

 private:
  PredictorKind core_;
  double min_lambda_;
  double max_lambda_;
  ClassDistribution dist_;
  // Empty for an MC core: class counts are all it needs.
  std::vector<AttributeObserver> observers_;
  AdaptiveState adaptive_;
  Rng rng_;
};

}  // namespace streamtree
