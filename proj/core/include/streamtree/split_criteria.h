#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "streamtree/sufficient_stats.h"

namespace streamtree {

// Shannon entropy in bits; 0 for an empty distribution.
double Entropy(std::span<const double> counts);
inline double Entropy(const ClassDistribution& dist) {
  return Entropy(dist.counts());
}

// epsilon = sqrt(R^2 ln(1/delta) / (2n)). Throws std::invalid_argument unless
// range > 0, n > 0 and delta in (0, 1].
double HoeffdingBound(double range, double delta, double n);

// Information gain of splitting `parent` into `children`.
double InformationGain(const ClassDistribution& parent,
                       std::span<const ClassDistribution> children);

// Number of interior equal-width thresholds examined per numeric feature.
inline constexpr std::size_t kNumericThresholds = 10;

struct SplitCandidate {
  std::size_t feature = 0;
  bool numeric = false;
  // Numeric tests route left iff value <= threshold.
  double threshold = 0.0;
  double merit = 0.0;
  // One entry per branch: nominal value order, or {left, right}.
  std::vector<ClassDistribution> children;
};

// Best candidate for a single feature, or nullopt if the feature cannot be
// evaluated (no observations, or a numeric feature with min == max).
std::optional<SplitCandidate> BestSplitForFeature(
    std::size_t feature, const AttributeObserver& observer,
    const ClassDistribution& parent);

// Best and runner-up candidates, each from a different feature. Ties on merit
// go to the lower feature index.
struct SplitRanking {
  std::optional<SplitCandidate> best;
  std::optional<SplitCandidate> second;
};

SplitRanking BestTwoSplits(std::span<const AttributeObserver> observers,
                           const ClassDistribution& parent);

}  // namespace streamtree
