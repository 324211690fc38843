#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "streamtree/comparison.h"
#include "streamtree/csv.h"
#include "streamtree/generators.h"
#include "streamtree/olboost.h"
#include "streamtree/prequential.h"
#include "streamtree/svfdt_policy.h"
#include "streamtree/tree.h"

namespace streamtree {

// 64-bit FNV-1a, hex encoded.
std::string StableHash(const std::string& text);

// A generator config or a CSV file. Text forms:
//   sea:seed=7,length=1000       (any generator family)
//   csv:path=data.csv[,schema=data.schema]
struct StreamSpec {
  std::optional<GeneratorConfig> generator;
  std::filesystem::path csv_path;
  std::optional<std::filesystem::path> schema_path;

  static StreamSpec Parse(const std::string& text);
  std::string Canonical() const;
  std::unique_ptr<InstanceStream> Open() const;
  // Instance count: generator length, or CSV data rows (counted).
  std::uint64_t EstimatedLength() const;
};

// Growth policy plus whether leaves use OLBoost. Names: VFDT, SVFDT-I,
// SVFDT-II and O_-prefixed variants; parsing is case-insensitive and also
// accepts vfdt, svfdt1, svfdt2, o_vfdt, ...
struct AlgorithmSpec {
  GrowthPolicy policy = GrowthPolicy::kVfdt;
  bool olboost = false;

  std::string Name() const;
  static AlgorithmSpec Parse(const std::string& text);
  bool operator==(const AlgorithmSpec&) const = default;
};

// One fully specified prequential run.
struct RunSpec {
  StreamSpec stream;
  AlgorithmSpec algorithm;
  TreeConfig tree;
  std::size_t window = kDefaultWindow;

  // Everything that influences the report, in a fixed textual form.
  std::string Canonical() const;
  std::string Fingerprint() const { return StableHash(Canonical()); }
  // Canonical() without the algorithm: identifies the grid cell that
  // different algorithms are paired on.
  std::string PairKey() const;
};

struct ExperimentPlan {
  std::vector<std::string> streams;
  std::vector<std::string> algorithms;
  std::vector<std::size_t> grace_periods{200};
  std::vector<double> tie_thresholds{0.05};
  double delta = 1e-7;
  std::string predictor = "anb";
  std::string olboost_core = "anb";
  double min_lambda = 1.0;
  double max_lambda = 12.0;
  std::vector<std::uint64_t> seeds{1};
  std::size_t window = kDefaultWindow;
  double alpha = 0.05;
  std::size_t jobs = 1;
  std::filesystem::path out = "streamtree-out";

  // Plan file (JSON). Unknown keys and type errors raise ConfigError naming
  // the field path, e.g. "plan.grace_periods[1]".
  // Keys absent from the file keep their value from `base`.
  static ExperimentPlan FromJson(const std::string& text);
  static ExperimentPlan FromJson(const std::string& text, ExperimentPlan base);
  static ExperimentPlan FromFile(const std::filesystem::path& path);
  static ExperimentPlan FromFile(const std::filesystem::path& path, ExperimentPlan base);
  std::string ToJson() const;

  // Checks ranges, parses every stream/algorithm, rejects duplicate runs.
  void Validate() const;

  // Cartesian product stream x algorithm x GP x tau x seed, in that nesting
  // order.
  std::vector<RunSpec> Expand() const;
};

struct RunFailure {
  std::string fingerprint;
  std::string error;
};

struct ExperimentOutcome {
  std::vector<PrequentialReport> reports;  // in Expand() order
  std::vector<RunFailure> failures;
  bool ok() const { return failures.empty(); }
};

// Runs every RunSpec on a pool of `jobs` worker threads.
ExperimentOutcome RunExperiment(const ExperimentPlan& plan,
                                std::ostream* progress = nullptr);

PrequentialReport ExecuteRun(const RunSpec& run);

// Output layout under `dir`:
//   reports/<fingerprint>.json   one per completed run
//   runs.csv                     one row per completed run
//   compare_<metric>.csv         win matrices (accuracy, size_bytes, elapsed)
//   manifest.json                completed and failed fingerprints
void WriteOutputs(const ExperimentPlan& plan, const ExperimentOutcome& outcome,
                  const std::filesystem::path& dir);

// Rebuilds the compare_<metric>.csv files from reports/ under `dir`.
std::vector<WinMatrix> CompareDirectory(const std::filesystem::path& dir,
                                        double alpha);
void WriteComparisons(std::span<const PrequentialReport> reports,
                      double alpha, const std::filesystem::path& dir);

}  // namespace streamtree
