#include "streamtree/olboost.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace streamtree {

void OlboostConfig::Validate() const {
  if (!std::isfinite(min_lambda) || !std::isfinite(max_lambda) || min_lambda < 0.0 ||
      max_lambda < min_lambda) {
    throw ConfigError("olboost: need 0 <= min_lambda <= max_lambda");
  }
}

double ComputeLambda(double p_true, double min_lambda, double max_lambda) {
  if (!(p_true >= 0.0 && p_true <= 1.0)) {
    throw std::invalid_argument("compute_lambda: probability outside [0, 1]");
  }
  if (!(min_lambda >= 0.0 && max_lambda >= min_lambda)) {
    throw std::invalid_argument("compute_lambda: need 0 <= min_lambda <= max_lambda");
  }
  // Same line as (min - max) * p + max, written so both endpoints are exact.
  const double lambda = p_true * min_lambda + (1.0 - p_true) * max_lambda;
  return std::clamp(lambda, min_lambda, max_lambda);
}

OlboostState::OlboostState(const Schema& schema, const OlboostConfig& config,
                           std::uint64_t seed)
    : core_(config.core),
      min_lambda_(config.min_lambda),
      max_lambda_(config.max_lambda),
      dist_(schema.num_classes()),
      rng_(seed) {
  if (core_ != PredictorKind::kMajorityClass) observers_ = MakeObservers(schema);
}

ProbabilityVector OlboostState::Predict(std::span<const double> x) const {
  return LeafPredict(core_, adaptive_, dist_, observers_, x);
}

std::uint64_t OlboostState::Train(const Instance& instance) {
  const ProbabilityVector probs = Predict(instance.values);
  const double p_true = std::clamp(probs[instance.label], 0.0, 1.0);
  const double lambda = ComputeLambda(p_true, min_lambda_, max_lambda_);
  const std::uint64_t w = SampleWeight(lambda, rng_);
  if (core_ == PredictorKind::kAdaptiveNaiveBayes) {
    AdaptiveRecord(adaptive_, dist_, observers_, instance);
  }
  if (w > 0) {
    const double weight = static_cast<double>(w);
    dist_.Add(instance.label, weight);
    for (std::size_t f = 0; f < observers_.size(); ++f) {
      observers_[f].Observe(instance.values[f], instance.label, weight);
    }
  }
  return w;
}

std::vector<OlboostState> OlboostState::MigrateOnSplit(
    const Schema& schema, std::span<const std::uint64_t> child_seeds) const {
  OlboostConfig config;
  config.enabled = true;
  config.core = core_;
  config.min_lambda = min_lambda_;
  config.max_lambda = max_lambda_;
  std::vector<OlboostState> children;
  children.reserve(child_seeds.size());
  for (std::uint64_t seed : child_seeds) children.emplace_back(schema, config, seed);
  return children;
}

std::size_t OlboostState::AccountedBytes() const {
  std::size_t bytes = kOlboostFixedBytes + 8 * dist_.size();
  for (const AttributeObserver& obs : observers_) bytes += obs.AccountedBytes();
  if (core_ == PredictorKind::kAdaptiveNaiveBayes) bytes += kAdaptiveBytes;
  return bytes;
}

}  // namespace streamtree
