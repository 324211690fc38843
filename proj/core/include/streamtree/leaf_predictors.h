#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "streamtree/schema.h"
#include "streamtree/sufficient_stats.h"

namespace streamtree {

using ProbabilityVector = std::vector<double>;

enum class PredictorKind { kMajorityClass, kNaiveBayes, kAdaptiveNaiveBayes };

const char* PredictorName(PredictorKind kind);
// Accepts "mc", "nb", "anb". Throws ConfigError otherwise.
PredictorKind ParsePredictor(const std::string& name);

// Divides by the sum; an all-zero input becomes uniform. Throws
// std::invalid_argument on a negative or non-finite entry.
ProbabilityVector Normalize(std::span<const double> raw);

// Lowest index of the largest entry.
std::size_t ArgMax(std::span<const double> probs);

ProbabilityVector MajorityClassPredict(const ClassDistribution& dist);

// prior(c) * prod_f P(x_f | c), normalized. Priors are the class proportions
// of `dist`; per-factor likelihoods are floored at kLikelihoodFloor. The
// product is accumulated in log space and rescaled before normalizing.
ProbabilityVector NaiveBayesPredict(
    const ClassDistribution& dist,
    std::span<const AttributeObserver> observers,
    std::span<const double> x);

inline constexpr double kLikelihoodFloor = 1e-12;

// Lifetime correct-prediction counters used to arbitrate MC vs NB.
struct AdaptiveState {
  std::uint64_t mc_correct = 0;
  std::uint64_t nb_correct = 0;

  // NB wins ties.
  bool UseNaiveBayes() const { return nb_correct >= mc_correct; }
};

// Bytes charged for an AdaptiveState by the model-size formula.
inline constexpr std::size_t kAdaptiveBytes = 16;

ProbabilityVector AdaptiveNaiveBayesPredict(
    const AdaptiveState& state, const ClassDistribution& dist,
    std::span<const AttributeObserver> observers, std::span<const double> x);

// Scores both sub-predictors on `instance` before the statistics absorb it.
void AdaptiveRecord(AdaptiveState& state, const ClassDistribution& dist,
                    std::span<const AttributeObserver> observers,
                    const Instance& instance);

// Dispatch on kind.
ProbabilityVector LeafPredict(PredictorKind kind, const AdaptiveState& state,
                              const ClassDistribution& dist,
                              std::span<const AttributeObserver> observers,
                              std::span<const double> x);

}  // namespace streamtree
