#include "streamtree/comparison.h"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "streamtree/schema.h"

namespace streamtree {

const char* MetricName(Metric metric) {
  switch (metric) {
    case Metric::kAccuracy: return "accuracy";
    case Metric::kSizeBytes: return "size_bytes";
    case Metric::kElapsed: return "elapsed";
  }
  return "?";
}

Metric ParseMetric(const std::string& name) {
  if (name == "accuracy") return Metric::kAccuracy;
  if (name == "size_bytes" || name == "memory") return Metric::kSizeBytes;
  if (name == "elapsed" || name == "time") return Metric::kElapsed;
  throw ConfigError("unknown metric '" + name + "'");
}

double RelativeAccuracy(const PrequentialReport& boosted, const PrequentialReport& plain) {
  if (boosted.pair_key != plain.pair_key || boosted.config.policy != plain.config.policy) {
    throw std::invalid_argument("relative_accuracy: reports are not from the same configuration");
  }
  if (plain.accuracy <= 0.0) {
    throw std::invalid_argument("relative_accuracy: plain accuracy is zero");
  }
  return boosted.accuracy / plain.accuracy;
}

namespace {

double MetricValue(const PrequentialReport& r, Metric metric) {
  switch (metric) {
    case Metric::kAccuracy: return r.accuracy;
    case Metric::kSizeBytes: return static_cast<double>(r.model.size_bytes);
    case Metric::kElapsed: return r.elapsed_seconds;
  }
  return 0.0;
}

bool HigherIsBetter(Metric metric) { return metric == Metric::kAccuracy; }

}  // namespace

int WinMatrix::Wins(const std::string& a, const std::string& b) const {
  const auto ia = std::find(algorithms.begin(), algorithms.end(), a);
  const auto ib = std::find(algorithms.begin(), algorithms.end(), b);
  if (ia == algorithms.end() || ib == algorithms.end() || ia == ib) return 0;
  return wins[ia - algorithms.begin()][ib - algorithms.begin()];
}

std::string WinMatrix::ToCsv() const {
  std::ostringstream out;
  out << "algorithm";
  for (const auto& name : algorithms) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < algorithms.size(); ++i) {
    out << algorithms[i];
    for (std::size_t j = 0; j < algorithms.size(); ++j) {
      out << ',';
      if (i == j) out << "--";
      else out << wins[i][j];
    }
    out << '\n';
  }
  return out.str();
}

WinMatrix CompareAlgorithms(std::span<const PrequentialReport> reports, Metric metric,
                            double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0, 1)");
  // dataset -> algorithm -> pair_key -> report
  std::map<std::string, std::map<std::string, std::map<std::string, const PrequentialReport*>>>
      grid;
  std::set<std::string> names;
  for (const PrequentialReport& r : reports) {
    auto& cell = grid[r.dataset][r.algorithm][r.pair_key];
    if (cell) {
      throw std::invalid_argument("compare: duplicate report for " + r.dataset + " / " +
                                  r.algorithm + " / " + r.pair_key);
    }
    cell = &r;
    names.insert(r.algorithm);
  }

  WinMatrix matrix;
  matrix.metric = metric;
  matrix.alpha = alpha;
  matrix.algorithms.assign(names.begin(), names.end());
  const std::size_t k = matrix.algorithms.size();
  matrix.wins.assign(k, std::vector<int>(k, 0));

  std::vector<std::string> missing;
  for (const auto& [dataset, by_algo] : grid) {
    std::set<std::string> keys;
    for (const auto& [algo, cells] : by_algo) {
      for (const auto& [key, r] : cells) keys.insert(key);
    }
    for (const auto& algo : matrix.algorithms) {
      auto it = by_algo.find(algo);
      for (const auto& key : keys) {
        if (it == by_algo.end() || !it->second.contains(key)) {
          missing.push_back(dataset + " / " + algo + " / " + key);
        }
      }
    }
  }
  if (!missing.empty()) {
    std::string msg = "compare: unpaired grid, missing cells:";
    for (const auto& m : missing) msg += "\n  " + m;
    throw std::invalid_argument(msg);
  }

  for (const auto& [dataset, by_algo] : grid) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        const auto& cells_a = by_algo.at(matrix.algorithms[i]);
        const auto& cells_b = by_algo.at(matrix.algorithms[j]);
        std::vector<double> diffs;
        for (const auto& [key, ra] : cells_a) {
          diffs.push_back(MetricValue(*ra, metric) - MetricValue(*cells_b.at(key), metric));
        }
        ComparisonResult res;
        res.dataset = dataset;
        res.a = matrix.algorithms[i];
        res.b = matrix.algorithms[j];
        res.metric = metric;
        res.samples = diffs.size();
        try {
          res.p_two_sided = WilcoxonSignedRank(diffs, Alternative::kTwoSided);
        } catch (const DegenerateInputError&) {
          res.p_two_sided = 1.0;
        }
        if (res.p_two_sided < alpha) {
          const double p_greater = WilcoxonSignedRank(diffs, Alternative::kGreater);
          const double p_less = WilcoxonSignedRank(diffs, Alternative::kLess);
          const bool a_higher = p_greater < p_less;
          res.p_one_sided = a_higher ? p_greater : p_less;
          if (res.p_one_sided < alpha) {
            const bool a_better = a_higher == HigherIsBetter(metric);
            res.verdict = a_better ? Verdict::kABetter : Verdict::kBBetter;
            if (a_better) ++matrix.wins[i][j];
            else ++matrix.wins[j][i];
          }
        }
        matrix.details.push_back(res);
      }
    }
  }
  return matrix;
}

}  // namespace streamtree
