#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace streamtree {

// Unweighted running mean and population standard deviation (divisor N).
class RunningStats {
 public:
  void Add(double x);
  std::size_t count() const { return count_; }
  double mean() const { return mean_; }
  double variance() const { return count_ == 0 ? 0.0 : m2_ / count_; }
  double stddev() const;

  static RunningStats Of(std::span<const double> values);

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// x >= mean - std.
bool Phi(double x, const RunningStats& stats);
// x >= mean + std.
bool Varpi(double x, const RunningStats& stats);

enum class GrowthPolicy { kVfdt, kSvfdt1, kSvfdt2 };

const char* PolicyName(GrowthPolicy policy);
GrowthPolicy ParsePolicy(const std::string& name);

// Leaf statistics captured at every split attempt where the Hoeffding/tie
// conditions held. Tree-global; one event updates all three series.
class SatisfiedSplitHistory {
 public:
  void Record(double entropy, double gain, double count);

  std::size_t events() const { return entropies_.count(); }
  const RunningStats& entropies() const { return entropies_; }
  const RunningStats& gains() const { return gains_; }
  const RunningStats& counts() const { return counts_; }

 private:
  RunningStats entropies_;
  RunningStats gains_;
  RunningStats counts_;
};

struct GateInput {
  double entropy;  // H of the gating leaf
  double gain;     // merit of its best candidate
  double count;    // instances seen by the leaf
};

// SVFDT admission test. `history` must already contain the current event and
// `leaf_entropies` holds the entropy of every current leaf, this one included.
// kVfdt always approves.
bool GateApproves(GrowthPolicy policy, const GateInput& leaf,
                  const SatisfiedSplitHistory& history,
                  std::span<const double> leaf_entropies);

}  // namespace streamtree
