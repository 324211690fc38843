#include "streamtree/leaf_predictors.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace streamtree {

const char* PredictorName(PredictorKind kind) {
  switch (kind) {
    case PredictorKind::kMajorityClass: return "mc";
    case PredictorKind::kNaiveBayes: return "nb";
    case PredictorKind::kAdaptiveNaiveBayes: return "anb";
  }
  return "?";
}

PredictorKind ParsePredictor(const std::string& text) {
  std::string name;
  for (char ch : text) name += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (name == "mc") return PredictorKind::kMajorityClass;
  if (name == "nb") return PredictorKind::kNaiveBayes;
  if (name == "anb") return PredictorKind::kAdaptiveNaiveBayes;
  throw ConfigError("unknown predictor '" + text + "' (expected mc, nb or anb)");
}

ProbabilityVector Normalize(std::span<const double> raw) {
  double sum = 0.0;
  for (double v : raw) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("normalize: entries must be finite and non-negative");
    }
    sum += v;
  }
  ProbabilityVector out(raw.size());
  if (raw.empty()) return out;
  if (sum <= 0.0) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(raw.size()));
    return out;
  }
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] / sum;
  return out;
}

std::size_t ArgMax(std::span<const double> probs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i) {
    if (probs[i] > probs[best]) best = i;
  }
  return best;
}

ProbabilityVector MajorityClassPredict(const ClassDistribution& dist) {
  return Normalize(dist.counts());
}

ProbabilityVector NaiveBayesPredict(const ClassDistribution& dist,
                                    std::span<const AttributeObserver> observers,
                                    std::span<const double> x) {
  const std::size_t num_classes = dist.size();
  if (dist.empty()) return Normalize(std::vector<double>(num_classes, 0.0));
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const double log_floor = std::log(kLikelihoodFloor);
  std::vector<double> log_score(num_classes, kNegInf);
  double best = kNegInf;
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (dist[c] <= 0.0) continue;
    double s = std::log(dist[c] / dist.total());
    for (std::size_t f = 0; f < observers.size(); ++f) {
      const double l = observers[f].Likelihood(x[f], c);
      s += l > kLikelihoodFloor ? std::log(l) : log_floor;
    }
    log_score[c] = s;
    best = std::max(best, s);
  }
  std::vector<double> raw(num_classes, 0.0);
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (log_score[c] != kNegInf) raw[c] = std::exp(log_score[c] - best);
  }
  return Normalize(raw);
}

ProbabilityVector AdaptiveNaiveBayesPredict(const AdaptiveState& state,
                                            const ClassDistribution& dist,
                                            std::span<const AttributeObserver> observers,
                                            std::span<const double> x) {
  if (state.UseNaiveBayes()) return NaiveBayesPredict(dist, observers, x);
  return MajorityClassPredict(dist);
}

void AdaptiveRecord(AdaptiveState& state, const ClassDistribution& dist,
                    std::span<const AttributeObserver> observers,
                    const Instance& instance) {
  if (ArgMax(MajorityClassPredict(dist)) == instance.label) ++state.mc_correct;
  if (ArgMax(NaiveBayesPredict(dist, observers, instance.values)) == instance.label) {
    ++state.nb_correct;
  }
}

ProbabilityVector LeafPredict(PredictorKind kind, const AdaptiveState& state,
                              const ClassDistribution& dist,
                              std::span<const AttributeObserver> observers,
                              std::span<const double> x) {
  switch (kind) {
    case PredictorKind::kMajorityClass: return MajorityClassPredict(dist);
    case PredictorKind::kNaiveBayes: return NaiveBayesPredict(dist, observers, x);
    case PredictorKind::kAdaptiveNaiveBayes:
      return AdaptiveNaiveBayesPredict(state, dist, observers, x);
  }
  return MajorityClassPredict(dist);
}

}  // namespace streamtree
