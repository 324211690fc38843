#include "streamtree/split_criteria.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace streamtree {

double Entropy(std::span<const double> counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) {
      const double p = c / total;
      h -= p * std::log2(p);
    }
  }
  return h < 0.0 ? 0.0 : h;
}

double HoeffdingBound(double range, double delta, double n) {
  if (!(range > 0.0)) throw std::invalid_argument("hoeffding bound: range must be > 0");
  if (!(n > 0.0)) throw std::invalid_argument("hoeffding bound: n must be > 0");
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("hoeffding bound: delta must be in (0, 1]");
  }
  return std::sqrt(range * range * std::log(1.0 / delta) / (2.0 * n));
}

double InformationGain(const ClassDistribution& parent,
                       std::span<const ClassDistribution> children) {
  const double total = parent.total();
  if (total <= 0.0) return 0.0;
  double remainder = 0.0;
  for (const ClassDistribution& child : children) {
    if (child.total() > 0.0) remainder += child.total() / total * Entropy(child);
  }
  return Entropy(parent) - remainder;
}

namespace {

// Splits each class's parent mass by `fraction(c)`, the share of class c that
// the observer places in a branch. Classes the observer never saw follow
// `fallback`, the all-class share.
template <typename Fraction>
ClassDistribution Project(const ClassDistribution& parent, const AttributeObserver& obs,
                          double fallback, Fraction fraction) {
  std::vector<double> counts(parent.size(), 0.0);
  for (std::size_t c = 0; c < parent.size(); ++c) {
    const double seen = obs.nominal() ? obs.class_total(c) : obs.estimator(c).weight_sum();
    counts[c] = parent[c] * (seen > 0.0 ? fraction(c) : fallback);
  }
  return ClassDistribution(std::move(counts));
}

std::optional<SplitCandidate> NominalCandidate(std::size_t feature,
                                               const AttributeObserver& obs,
                                               const ClassDistribution& parent) {
  SplitCandidate cand;
  cand.feature = feature;
  cand.numeric = false;
  cand.children.reserve(obs.arity());
  for (std::size_t v = 0; v < obs.arity(); ++v) {
    double value_total = 0.0;
    for (std::size_t c = 0; c < obs.num_classes(); ++c) value_total += obs.count(c, v);
    const double fallback = value_total / obs.total_weight();
    cand.children.push_back(Project(parent, obs, fallback, [&](std::size_t c) {
      return obs.count(c, v) / obs.class_total(c);
    }));
  }
  cand.merit = InformationGain(parent, cand.children);
  return cand;
}

std::optional<SplitCandidate> NumericCandidate(std::size_t feature,
                                               const AttributeObserver& obs,
                                               const ClassDistribution& parent) {
  if (!(obs.max() > obs.min())) return std::nullopt;
  std::optional<SplitCandidate> best;
  const double width = (obs.max() - obs.min()) / static_cast<double>(kNumericThresholds + 1);
  for (std::size_t i = 1; i <= kNumericThresholds; ++i) {
    const double t = obs.min() + width * static_cast<double>(i);
    if (!(t > obs.min() && t < obs.max())) continue;
    double seen_left = 0.0;
    for (std::size_t c = 0; c < obs.num_classes(); ++c) {
      const GaussianEstimator& est = obs.estimator(c);
      if (est.weight_sum() > 0.0) seen_left += est.weight_sum() * est.Cdf(t);
    }
    const double fallback = seen_left / obs.total_weight();
    ClassDistribution left = Project(parent, obs, fallback, [&](std::size_t c) {
      return obs.estimator(c).Cdf(t);
    });
    std::vector<double> right_counts(parent.size());
    for (std::size_t c = 0; c < parent.size(); ++c) {
      right_counts[c] = std::max(0.0, parent[c] - left[c]);
    }
    SplitCandidate cand;
    cand.feature = feature;
    cand.numeric = true;
    cand.threshold = t;
    cand.children = {std::move(left), ClassDistribution(std::move(right_counts))};
    cand.merit = InformationGain(parent, cand.children);
    if (!best || cand.merit > best->merit) best = std::move(cand);
  }
  return best;
}

}  // namespace

std::optional<SplitCandidate> BestSplitForFeature(std::size_t feature,
                                                  const AttributeObserver& observer,
                                                  const ClassDistribution& parent) {
  if (observer.total_weight() <= 0.0 || parent.total() <= 0.0) return std::nullopt;
  return observer.nominal() ? NominalCandidate(feature, observer, parent)
                            : NumericCandidate(feature, observer, parent);
}

SplitRanking BestTwoSplits(std::span<const AttributeObserver> observers,
                           const ClassDistribution& parent) {
  SplitRanking ranking;
  for (std::size_t f = 0; f < observers.size(); ++f) {
    auto cand = BestSplitForFeature(f, observers[f], parent);
    if (!cand) continue;
    if (!ranking.best || cand->merit > ranking.best->merit) {
      ranking.second = std::move(ranking.best);
      ranking.best = std::move(cand);
    } else if (!ranking.second || cand->merit > ranking.second->merit) {
      ranking.second = std::move(cand);
    }
  }
  return ranking;
}

}  // namespace streamtree
