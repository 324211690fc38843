#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace streamtree {

enum class FeatureKind { kNominal, kNumeric };

struct Feature {
  std::string name;
  FeatureKind kind = FeatureKind::kNumeric;
  // Category labels for nominal features; size() is the arity.
  std::vector<std::string> categories;

  std::size_t arity() const { return categories.size(); }
  bool nominal() const { return kind == FeatureKind::kNominal; }

  static Feature Numeric(std::string name);
  static Feature Nominal(std::string name, std::vector<std::string> categories);
  // Nominal feature with categories "0".."arity-1".
  static Feature Nominal(std::string name, std::size_t arity);

  bool operator==(const Feature&) const = default;
};

// Thrown for schema, config, and plan validation failures.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ordered feature list plus class names. Immutable once a stream is opened.
class Schema {
 public:
  Schema() = default;
  // Validates: unique feature names, nominal arity >= 2, >= 2 classes.
  Schema(std::vector<Feature> features, std::vector<std::string> classes);

  const std::vector<Feature>& features() const { return features_; }
  const Feature& feature(std::size_t i) const { return features_[i]; }
  std::size_t num_features() const { return features_.size(); }
  const std::vector<std::string>& classes() const { return classes_; }
  std::size_t num_classes() const { return classes_.size(); }

  // Index of `name` in classes(), or npos.
  std::size_t class_index(const std::string& name) const;

  bool operator==(const Schema&) const = default;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<Feature> features_;
  std::vector<std::string> classes_;
};

// One labelled observation. Nominal slots hold the category index as a
// double; numeric slots hold the value.
struct Instance {
  std::vector<double> values;
  std::size_t label = 0;

  bool operator==(const Instance&) const = default;
};

// Checks the Instance invariants against `schema`; throws std::invalid_argument.
void ValidateInstance(const Schema& schema, const Instance& instance);

// Single-consumer pull iterator over instances.
class InstanceStream {
 public:
  virtual ~InstanceStream() = default;
  virtual const Schema& schema() const = 0;
  // Writes the next instance into `out`; false at end of stream.
  virtual bool Next(Instance& out) = 0;
};

}  // namespace streamtree
