#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "streamtree/schema.h"

namespace streamtree {

// Weighted class counts with a maintained total.
class ClassDistribution {
 public:
  ClassDistribution() = default;
  explicit ClassDistribution(std::size_t num_classes)
      : counts_(num_classes, 0.0) {}
  explicit ClassDistribution(std::vector<double> counts);

  void Add(std::size_t label, double weight);

  double operator[](std::size_t c) const { return counts_[c]; }
  std::span<const double> counts() const { return counts_; }
  std::size_t size() const { return counts_.size(); }
  double total() const { return total_; }
  bool empty() const { return total_ <= 0.0; }
  // Number of classes with non-zero weight.
  std::size_t NonZeroClasses() const;
  // Lowest index of the largest count.
  std::size_t ArgMax() const;

 private:
  std::vector<double> counts_;
  double total_ = 0.0;
};

// Weighted Welford estimator (West's update) of mean and variance.
class GaussianEstimator {
 public:
  void Add(double value, double weight);

  double weight_sum() const { return weight_sum_; }
  double mean() const { return mean_; }
  // Unbiased (frequency-weighted) variance: M2 / (W - 1); 0 when W <= 1.
  double variance() const;
  double stddev() const;

  // Normal pdf at x; point mass (1 at the mean, 0 elsewhere) when the
  // variance is zero; 0 when empty.
  double Density(double x) const;
  // Normal cdf at x; step at the mean when the variance is zero.
  double Cdf(double x) const;

 private:
  double weight_sum_ = 0.0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Per-feature, per-class statistics. Nominal: C x arity count matrix.
// Numeric: one GaussianEstimator per class plus the observed value range.
class AttributeObserver {
 public:
  AttributeObserver(const Feature& feature, std::size_t num_classes);

  // Throws std::invalid_argument for an out-of-range nominal value or a
  // non-positive weight.
  void Observe(double value, std::size_t label, double weight);

  bool nominal() const { return nominal_; }
  std::size_t arity() const { return arity_; }
  std::size_t num_classes() const { return num_classes_; }

  // Nominal accessors.
  double count(std::size_t label, std::size_t value) const {
    return counts_[label * arity_ + value];
  }
  double class_total(std::size_t label) const { return class_totals_[label]; }

  // Numeric accessors.
  const GaussianEstimator& estimator(std::size_t label) const {
    return estimators_[label];
  }
  double min() const { return min_; }
  double max() const { return max_; }

  double total_weight() const { return total_weight_; }

  // P(value | label). Nominal: Laplace-smoothed frequency
  // (count + 1) / (class_total + arity). Numeric: Gaussian density.
  double Likelihood(double value, std::size_t label) const;

  // Bytes charged by the model-size formula.
  std::size_t AccountedBytes() const;

 private:
  bool nominal_;
  std::size_t arity_;
  std::size_t num_classes_;
  std::vector<double> counts_;
  std::vector<double> class_totals_;
  std::vector<GaussianEstimator> estimators_;
  double min_;
  double max_;
  double total_weight_ = 0.0;
};

// Observers for every feature of a schema.
std::vector<AttributeObserver> MakeObservers(const Schema& schema);

}  // namespace streamtree
