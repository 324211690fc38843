#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "streamtree/rng.h"
#include "streamtree/schema.h"

namespace streamtree {

enum class GeneratorFamily { kSea, kAgrawal, kHyperplane, kRbf, kLed };

const char* FamilyName(GeneratorFamily family);

// Parameters for the synthetic stream generators. Fields not used by a family
// are ignored (and omitted from Canonical()). Defaults follow the usual MOA
// definitions of these benchmarks.
struct GeneratorConfig {
  GeneratorFamily family = GeneratorFamily::kSea;
  std::uint64_t seed = 1;
  std::uint64_t length = 100000;

  // hyperplane, rbf: feature count.
  std::size_t n_features = 10;
  // rbf: number of classes. sea/agrawal/hyperplane are binary, led has 10.
  std::size_t n_classes = 2;

  // sea: concept index 1..4 (threshold 8, 9, 7, 9.5). agrawal: 1..10.
  int function = 1;
  // Class-label noise (sea, hyperplane), segment flip probability (led).
  double noise = 0.0;
  // agrawal: numeric attribute perturbation fraction.
  double perturbation = 0.05;
  // rbf
  std::size_t n_centroids = 50;
  // hyperplane drift
  std::size_t n_drift_features = 2;
  double mag_change = 0.0;
  double sigma_pct = 0.1;

  // Family defaults applied (noise etc.).
  static GeneratorConfig Defaults(GeneratorFamily family);

  // Throws ConfigError on unsupported combinations.
  void Validate() const;

  // Stable "family:key=value,..." text; Parse(Canonical()) round-trips.
  std::string Canonical() const;

  // Parses "sea:seed=7,length=1000,function=2". Unknown keys are errors.
  static GeneratorConfig Parse(const std::string& text);
};

// Returns the schema a config produces without building a stream.
Schema GeneratorSchema(const GeneratorConfig& config);

std::unique_ptr<InstanceStream> Generate(const GeneratorConfig& config);

// SEA concept: class 0 iff f1 + f2 <= threshold.
std::size_t SeaConcept(double f1, double f2, double threshold);
double SeaThreshold(int function);

// Agrawal concept functions 1..10 over the raw attribute values
// (salary, commission, age, elevel, car, zipcode, hvalue, hyears, loan).
std::size_t AgrawalConcept(int function, double salary, double commission,
                           double age, int elevel, double hvalue,
                           double hyears, double loan);

// Seven-segment encoding of `digit` in the order
// top, top-left, top-right, middle, bottom-left, bottom-right, bottom.
const std::array<int, 7>& LedSegments(int digit);

}  // namespace streamtree
