#include "streamtree/sufficient_stats.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace streamtree {

ClassDistribution::ClassDistribution(std::vector<double> counts)
    : counts_(std::move(counts)) {
  for (double c : counts_) {
    if (c < 0.0) throw std::invalid_argument("class counts must be non-negative");
  }
  total_ = std::accumulate(counts_.begin(), counts_.end(), 0.0);
}

void ClassDistribution::Add(std::size_t label, double weight) {
  counts_[label] += weight;
  total_ += weight;
}

std::size_t ClassDistribution::NonZeroClasses() const {
  std::size_t n = 0;
  for (double c : counts_) n += c > 0.0;
  return n;
}

std::size_t ClassDistribution::ArgMax() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < counts_.size(); ++i) {
    if (counts_[i] > counts_[best]) best = i;
  }
  return best;
}

void GaussianEstimator::Add(double value, double weight) {
  if (weight_sum_ == 0.0) {
    weight_sum_ = weight;
    mean_ = value;
    m2_ = 0.0;
    return;
  }
  weight_sum_ += weight;
  const double delta = value - mean_;
  mean_ += weight / weight_sum_ * delta;
  m2_ += weight * delta * (value - mean_);
  if (m2_ < 0.0) m2_ = 0.0;
}

double GaussianEstimator::variance() const {
  return weight_sum_ > 1.0 ? m2_ / (weight_sum_ - 1.0) : 0.0;
}

double GaussianEstimator::stddev() const { return std::sqrt(variance()); }

double GaussianEstimator::Density(double x) const {
  if (weight_sum_ <= 0.0) return 0.0;
  const double sd = stddev();
  if (sd <= 0.0) return x == mean_ ? 1.0 : 0.0;
  const double z = (x - mean_) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

double GaussianEstimator::Cdf(double x) const {
  const double sd = stddev();
  if (sd <= 0.0) return x >= mean_ ? 1.0 : 0.0;
  return 0.5 * std::erfc(-(x - mean_) / (sd * std::numbers::sqrt2));
}

AttributeObserver::AttributeObserver(const Feature& feature, std::size_t num_classes)
    : nominal_(feature.nominal()),
      arity_(feature.nominal() ? feature.arity() : 0),
      num_classes_(num_classes),
      min_(std::numeric_limits<double>::infinity()),
      max_(-std::numeric_limits<double>::infinity()) {
  if (nominal_) {
    counts_.assign(num_classes * arity_, 0.0);
    class_totals_.assign(num_classes, 0.0);
  } else {
    estimators_.resize(num_classes);
  }
}

void AttributeObserver::Observe(double value, std::size_t label, double weight) {
  if (!(weight > 0.0)) throw std::invalid_argument("observer weight must be positive");
  if (label >= num_classes_) throw std::invalid_argument("observer label out of range");
  if (nominal_) {
    if (!(value >= 0.0) || value >= static_cast<double>(arity_)) {
      throw std::invalid_argument("nominal value " + std::to_string(value) +
                                  " outside arity " + std::to_string(arity_));
    }
    const auto v = static_cast<std::size_t>(value);
    counts_[label * arity_ + v] += weight;
    class_totals_[label] += weight;
  } else {
    if (!std::isfinite(value)) throw std::invalid_argument("numeric value not finite");
    estimators_[label].Add(value, weight);
    if (value < min_) min_ = value;
    if (value > max_) max_ = value;
  }
  total_weight_ += weight;
}

double AttributeObserver::Likelihood(double value, std::size_t label) const {
  if (nominal_) {
    const auto v = static_cast<std::size_t>(value);
    const double count = v < arity_ ? counts_[label * arity_ + v] : 0.0;
    return (count + 1.0) / (class_totals_[label] + static_cast<double>(arity_));
  }
  return estimators_[label].Density(value);
}

std::size_t AttributeObserver::AccountedBytes() const {
  if (nominal_) return 8 * num_classes_ * arity_ + 8 * num_classes_;
  return 24 * num_classes_ + 16;
}

std::vector<AttributeObserver> MakeObservers(const Schema& schema) {
  std::vector<AttributeObserver> out;
  out.reserve(schema.num_features());
  for (const Feature& f : schema.features()) out.emplace_back(f, schema.num_classes());
  return out;
}

}  // namespace streamtree
