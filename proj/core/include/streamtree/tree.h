#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "streamtree/leaf_predictors.h"
#include "streamtree/olboost.h"
#include "streamtree/schema.h"
#include "streamtree/split_criteria.h"
#include "streamtree/sufficient_stats.h"
#include "streamtree/svfdt_policy.h"

namespace streamtree {

struct TreeConfig {
  std::size_t grace_period = 200;
  double tie_threshold = 0.05;
  double delta = 1e-7;
  PredictorKind predictor = PredictorKind::kAdaptiveNaiveBayes;
  GrowthPolicy policy = GrowthPolicy::kVfdt;
  OlboostConfig olboost;
  std::uint64_t seed = 1;

  void Validate() const;
};

// Statistics that drive tree growth. Split evaluation only ever sees this.
struct GrowthStats {
  ClassDistribution dist;
  std::vector<AttributeObserver> observers;
};

struct LeafNode {
  GrowthStats growth;
  AdaptiveState adaptive;
  std::optional<OlboostState> boost;
  double weight_at_last_attempt = 0.0;
  std::uint64_t birth_index = 0;
};

struct Node;

struct SplitNode {
  std::size_t feature = 0;
  bool numeric = false;
  double threshold = 0.0;
  std::vector<std::unique_ptr<Node>> children;

  // Child slot for x; numeric tests go left iff x[feature] <= threshold.
  std::size_t Route(std::span<const double> x) const;
};

struct Node {
  std::size_t depth = 0;
  std::variant<LeafNode, SplitNode> body;

  bool is_leaf() const { return std::holds_alternative<LeafNode>(body); }
  LeafNode& leaf() { return std::get<LeafNode>(body); }
  const LeafNode& leaf() const { return std::get<LeafNode>(body); }
  const SplitNode& split() const { return std::get<SplitNode>(body); }
};

// Hoeffding/tie rule: satisfied iff delta_merit > epsilon or epsilon < tau.
bool HoeffdingConditionsMet(double delta_merit, double epsilon, double tau);

struct AttemptResult {
  bool evaluated = false;  // at least one feature could be scored
  bool satisfied = false;  // Hoeffding/tie rule held (event recorded)
  bool approved = false;   // growth policy said yes
  bool split = false;      // approved and best merit > 0
  double delta_merit = 0.0;
  double epsilon = 0.0;
  std::optional<SplitCandidate> best;
};

// One split decision for a leaf. Records the satisfied event into `history`
// before consulting the growth policy. `leaf_entropies` is called only when a
// SVFDT gate needs the current leaf snapshot.
AttemptResult AttemptSplit(const GrowthStats& leaf, const TreeConfig& config,
                           SatisfiedSplitHistory& history,
                           const std::function<std::vector<double>()>& leaf_entropies);

// Executed split, kept for audits and structural comparisons.
struct SplitEvent {
  std::uint64_t instance_index = 0;  // 1-based stream position at split time
  std::uint64_t leaf_birth = 0;
  std::size_t depth = 0;
  std::size_t feature = 0;
  bool numeric = false;
  double threshold = 0.0;
  double merit = 0.0;
  double delta_merit = 0.0;
  double epsilon = 0.0;
  double leaf_weight = 0.0;
  std::size_t branches = 0;

  bool operator==(const SplitEvent&) const = default;
};

struct ModelStats {
  std::size_t node_count = 0;
  std::size_t leaf_count = 0;
  std::size_t depth = 0;
  std::size_t size_bytes = 0;

  bool operator==(const ModelStats&) const = default;
};

// Model-size accounting, in bytes, independent of the host allocator:
//   every node                      kNodeBytes
//   split node                      + kSplitTestBytes + 8 per child
//   leaf                            + 8 per class (counts)
//                                   + kLeafBookkeepingBytes
//                                   + kAdaptiveBytes if the predictor is ANB
//                                   + observers
//   nominal observer                8 * classes * arity + 8 * classes
//   numeric observer                24 * classes + 16 (min/max)
//   OLBoost state                   kOlboostFixedBytes + 8 per class
//                                   + observers (NB/ANB cores)
//                                   + kAdaptiveBytes (ANB core)
inline constexpr std::size_t kNodeBytes = 32;
inline constexpr std::size_t kSplitTestBytes = 24;
inline constexpr std::size_t kLeafBookkeepingBytes = 24;

// VFDT with optional SVFDT growth gating and OLBoost leaf predictors.
class HoeffdingTree {
 public:
  HoeffdingTree(Schema schema, TreeConfig config);

  HoeffdingTree(HoeffdingTree&&) noexcept = default;
  HoeffdingTree& operator=(HoeffdingTree&&) noexcept = default;

  // Throws std::invalid_argument if the instance does not fit the schema.
  void Train(const Instance& instance);

  ProbabilityVector Predict(std::span<const double> x) const;

  const Node& SortToLeaf(std::span<const double> x) const;

  ModelStats Stats() const;

  // Replaces the leaf reached by following `path` (child slots from the
  // root) with a split on `candidate`. Used to build trees by hand.
  void ForceSplit(std::span<const std::size_t> path,
                  const SplitCandidate& candidate);

  // Text dump of the structure, one node per line, indented by depth.
  void Dump(std::ostream& os) const;

  const Schema& schema() const { return schema_; }
  const TreeConfig& config() const { return config_; }
  const Node& root() const { return *root_; }
  const SatisfiedSplitHistory& history() const { return history_; }
  const std::vector<SplitEvent>& split_log() const { return split_log_; }
  std::uint64_t instances_seen() const { return instances_seen_; }
  std::uint64_t split_attempts() const { return split_attempts_; }

  // Entropy of every current leaf, in traversal order.
  std::vector<double> LeafEntropies() const;

 private:
  LeafNode MakeLeaf(ClassDistribution initial);
  Node& MutableLeafFor(std::span<const double> x);
  void SplitLeaf(Node& node, const SplitCandidate& candidate,
                 double delta_merit, double epsilon);

  Schema schema_;
  TreeConfig config_;
  std::unique_ptr<Node> root_;
  SatisfiedSplitHistory history_;
  std::vector<SplitEvent> split_log_;
  std::uint64_t instances_seen_ = 0;
  std::uint64_t split_attempts_ = 0;
  std::uint64_t next_birth_ = 0;
};

}  // namespace streamtree
