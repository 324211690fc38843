#pragma once

#include <span>
#include <string>
#include <vector>

#include "streamtree/prequential.h"
#include "streamtree/wilcoxon.h"

namespace streamtree {

enum class Metric { kAccuracy, kSizeBytes, kElapsed };

const char* MetricName(Metric metric);
Metric ParseMetric(const std::string& name);

// accuracy(boosted) / accuracy(plain). Both runs must share the grid cell and
// growth policy; throws std::invalid_argument otherwise or if the plain
// accuracy is zero.
double RelativeAccuracy(const PrequentialReport& boosted,
                        const PrequentialReport& plain);

enum class Verdict { kABetter, kBBetter, kNoDifference };

struct ComparisonResult {
  std::string dataset;
  std::string a;
  std::string b;
  Metric metric = Metric::kAccuracy;
  std::size_t samples = 0;
  double p_two_sided = 1.0;
  double p_one_sided = 1.0;  // for the direction of the verdict
  Verdict verdict = Verdict::kNoDifference;
};

// wins[i][j]: datasets on which algorithms[i] was significantly better than
// algorithms[j]. Diagonal entries are unused.
struct WinMatrix {
  Metric metric = Metric::kAccuracy;
  double alpha = 0.05;
  std::vector<std::string> algorithms;
  std::vector<std::vector<int>> wins;
  std::vector<ComparisonResult> details;

  int Wins(const std::string& a, const std::string& b) const;
  // Row/column layout with "--" on the diagonal.
  std::string ToCsv() const;
};

// Pairs reports by (dataset, pair_key) and runs a two-sided Wilcoxon test per
// dataset and algorithm pair, followed by a one-sided test when significant.
// Higher accuracy is better; lower size and time are better. Throws
// std::invalid_argument listing missing cells when grids are unpaired.
WinMatrix CompareAlgorithms(std::span<const PrequentialReport> reports,
                            Metric metric, double alpha = 0.05);

}  // namespace streamtree
