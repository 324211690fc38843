#include "streamtree/schema.h"

#include <cmath>
#include <set>
#include <string>

namespace streamtree {

Feature Feature::Numeric(std::string name) {
  return Feature{std::move(name), FeatureKind::kNumeric, {}};
}

Feature Feature::Nominal(std::string name, std::vector<std::string> categories) {
  return Feature{std::move(name), FeatureKind::kNominal, std::move(categories)};
}

Feature Feature::Nominal(std::string name, std::size_t arity) {
  std::vector<std::string> categories;
  categories.reserve(arity);
  for (std::size_t i = 0; i < arity; ++i) categories.push_back(std::to_string(i));
  return Nominal(std::move(name), std::move(categories));
}

Schema::Schema(std::vector<Feature> features, std::vector<std::string> classes)
    : features_(std::move(features)), classes_(std::move(classes)) {
  std::set<std::string> names;
  for (const Feature& f : features_) {
    if (f.name.empty()) throw ConfigError("schema: empty feature name");
    if (!names.insert(f.name).second) {
      throw ConfigError("schema: duplicate feature name '" + f.name + "'");
    }
    if (f.nominal()) {
      if (f.arity() < 2) {
        throw ConfigError("schema: nominal feature '" + f.name +
                          "' needs at least 2 categories");
      }
      std::set<std::string> cats(f.categories.begin(), f.categories.end());
      if (cats.size() != f.categories.size()) {
        throw ConfigError("schema: duplicate category in feature '" + f.name + "'");
      }
    }
  }
  if (classes_.size() < 2) throw ConfigError("schema: at least 2 classes required");
  std::set<std::string> cls(classes_.begin(), classes_.end());
  if (cls.size() != classes_.size()) throw ConfigError("schema: duplicate class name");
}

std::size_t Schema::class_index(const std::string& name) const {
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (classes_[i] == name) return i;
  }
  return npos;
}

void ValidateInstance(const Schema& schema, const Instance& instance) {
  if (instance.values.size() != schema.num_features()) {
    throw std::invalid_argument("instance has " +
                                std::to_string(instance.values.size()) +
                                " values, schema expects " +
                                std::to_string(schema.num_features()));
  }
  if (instance.label >= schema.num_classes()) {
    throw std::invalid_argument("instance label " + std::to_string(instance.label) +
                                " out of range");
  }
  for (std::size_t i = 0; i < schema.num_features(); ++i) {
    const Feature& f = schema.feature(i);
    const double v = instance.values[i];
    if (!std::isfinite(v)) {
      throw std::invalid_argument("feature '" + f.name + "' is not finite");
    }
    if (f.nominal()) {
      if (v < 0 || v >= static_cast<double>(f.arity()) || v != std::floor(v)) {
        throw std::invalid_argument("feature '" + f.name + "' value " +
                                    std::to_string(v) + " outside its categories");
      }
    }
  }
}

}  // namespace streamtree
