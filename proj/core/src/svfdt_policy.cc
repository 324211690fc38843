#include "streamtree/svfdt_policy.h"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "streamtree/schema.h"

namespace streamtree {

void RunningStats::Add(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

double RunningStats::stddev() const { return std::sqrt(std::max(0.0, variance())); }

RunningStats RunningStats::Of(std::span<const double> values) {
  RunningStats s;
  for (double v : values) s.Add(v);
  return s;
}

bool Phi(double x, const RunningStats& stats) {
  return x >= stats.mean() - stats.stddev();
}

bool Varpi(double x, const RunningStats& stats) {
  return x >= stats.mean() + stats.stddev();
}

const char* PolicyName(GrowthPolicy policy) {
  switch (policy) {
    case GrowthPolicy::kVfdt: return "VFDT";
    case GrowthPolicy::kSvfdt1: return "SVFDT-I";
    case GrowthPolicy::kSvfdt2: return "SVFDT-II";
  }
  return "?";
}

GrowthPolicy ParsePolicy(const std::string& name) {
  std::string n;
  for (char ch : name) {
    if (ch != '-' && ch != '_') n += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  if (n == "vfdt") return GrowthPolicy::kVfdt;
  if (n == "svfdt1" || n == "svfdti") return GrowthPolicy::kSvfdt1;
  if (n == "svfdt2" || n == "svfdtii") return GrowthPolicy::kSvfdt2;
  throw ConfigError("unknown growth policy '" + name + "'");
}

void SatisfiedSplitHistory::Record(double entropy, double gain, double count) {
  entropies_.Add(entropy);
  gains_.Add(gain);
  counts_.Add(count);
}

bool GateApproves(GrowthPolicy policy, const GateInput& leaf,
                  const SatisfiedSplitHistory& history,
                  std::span<const double> leaf_entropies) {
  if (policy == GrowthPolicy::kVfdt) return true;
  if (policy == GrowthPolicy::kSvfdt2 &&
      (Varpi(leaf.entropy, history.entropies()) || Varpi(leaf.gain, history.gains()))) {
    return true;
  }
  return Phi(leaf.entropy, RunningStats::Of(leaf_entropies)) &&
         Phi(leaf.entropy, history.entropies()) &&
         Phi(leaf.gain, history.gains()) &&
         leaf.count >= history.counts().mean();
}

}  // namespace streamtree
