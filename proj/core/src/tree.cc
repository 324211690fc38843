#include "streamtree/tree.h"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace streamtree {

void TreeConfig::Validate() const {
  if (grace_period < 1) throw ConfigError("tree: grace_period must be >= 1");
  if (!(tie_threshold >= 0.0 && tie_threshold <= 1.0)) {
    throw ConfigError("tree: tie_threshold must be in [0, 1]");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("tree: delta must be in (0, 1)");
  if (olboost.enabled) olboost.Validate();
}

std::size_t SplitNode::Route(std::span<const double> x) const {
  const double v = x[feature];
  if (numeric) return v <= threshold ? 0 : 1;
  const auto slot = static_cast<std::size_t>(v);
  return slot < children.size() ? slot : children.size() - 1;
}

bool HoeffdingConditionsMet(double delta_merit, double epsilon, double tau) {
  return delta_merit > epsilon || epsilon < tau;
}

AttemptResult AttemptSplit(const GrowthStats& leaf, const TreeConfig& config,
                           SatisfiedSplitHistory& history,
                           const std::function<std::vector<double>()>& leaf_entropies) {
  AttemptResult result;
  SplitRanking ranking = BestTwoSplits(leaf.observers, leaf.dist);
  if (!ranking.best) return result;
  result.evaluated = true;
  const double best_merit = ranking.best->merit;
  result.delta_merit = best_merit - (ranking.second ? ranking.second->merit : 0.0);
  const double range = std::log2(static_cast<double>(leaf.dist.size()));
  result.epsilon = HoeffdingBound(range, config.delta, leaf.dist.total());
  result.satisfied =
      HoeffdingConditionsMet(result.delta_merit, result.epsilon, config.tie_threshold);
  if (result.satisfied) {
    const GateInput input{Entropy(leaf.dist), best_merit, leaf.dist.total()};
    history.Record(input.entropy, input.gain, input.count);
    if (config.policy == GrowthPolicy::kVfdt) {
      result.approved = true;
    } else {
      const std::vector<double> entropies = leaf_entropies();
      result.approved = GateApproves(config.policy, input, history, entropies);
    }
    result.split = result.approved && best_merit > 0.0;
  }
  result.best = std::move(ranking.best);
  return result;
}

HoeffdingTree::HoeffdingTree(Schema schema, TreeConfig config)
    : schema_(std::move(schema)), config_(config) {
  config_.Validate();
  if (schema_.num_classes() < 2) throw ConfigError("tree: schema needs >= 2 classes");
  root_ = std::make_unique<Node>();
  root_->body = MakeLeaf(ClassDistribution(schema_.num_classes()));
  if (config_.olboost.enabled) {
    LeafNode& leaf = root_->leaf();
    leaf.boost.emplace(schema_, config_.olboost, MixSeed(config_.seed, leaf.birth_index));
  }
}

LeafNode HoeffdingTree::MakeLeaf(ClassDistribution initial) {
  LeafNode leaf;
  leaf.weight_at_last_attempt = initial.total();
  leaf.growth.dist = std::move(initial);
  leaf.growth.observers = MakeObservers(schema_);
  leaf.birth_index = next_birth_++;
  return leaf;
}

const Node& HoeffdingTree::SortToLeaf(std::span<const double> x) const {
  const Node* node = root_.get();
  while (!node->is_leaf()) {
    const SplitNode& split = node->split();
    node = split.children[split.Route(x)].get();
  }
  return *node;
}

Node& HoeffdingTree::MutableLeafFor(std::span<const double> x) {
  return const_cast<Node&>(SortToLeaf(x));
}

void HoeffdingTree::Train(const Instance& instance) {
  ValidateInstance(schema_, instance);
  ++instances_seen_;
  Node& node = MutableLeafFor(instance.values);
  LeafNode& leaf = node.leaf();

  // Boosted statistics see the instance first and never feed growth.
  if (leaf.boost) leaf.boost->Train(instance);
  if (config_.predictor == PredictorKind::kAdaptiveNaiveBayes) {
    AdaptiveRecord(leaf.adaptive, leaf.growth.dist, leaf.growth.observers, instance);
  }

  GrowthStats& growth = leaf.growth;
  growth.dist.Add(instance.label, 1.0);
  for (std::size_t f = 0; f < growth.observers.size(); ++f) {
    growth.observers[f].Observe(instance.values[f], instance.label, 1.0);
  }

  const double since_attempt = growth.dist.total() - leaf.weight_at_last_attempt;
  if (since_attempt < static_cast<double>(config_.grace_period) ||
      growth.dist.NonZeroClasses() < 2) {
    return;
  }
  ++split_attempts_;
  leaf.weight_at_last_attempt = growth.dist.total();
  AttemptResult result =
      AttemptSplit(growth, config_, history_, [this] { return LeafEntropies(); });
  if (result.split) SplitLeaf(node, *result.best, result.delta_merit, result.epsilon);
}

void HoeffdingTree::SplitLeaf(Node& node, const SplitCandidate& candidate,
                              double delta_merit, double epsilon) {
  LeafNode& parent = node.leaf();
  const std::size_t expected =
      candidate.numeric ? 2 : schema_.feature(candidate.feature).arity();
  if (candidate.children.size() != expected) {
    throw std::invalid_argument("split candidate has the wrong number of branches");
  }

  SplitEvent event;
  event.instance_index = instances_seen_;
  event.leaf_birth = parent.birth_index;
  event.depth = node.depth;
  event.feature = candidate.feature;
  event.numeric = candidate.numeric;
  event.threshold = candidate.threshold;
  event.merit = candidate.merit;
  event.delta_merit = delta_merit;
  event.epsilon = epsilon;
  event.leaf_weight = parent.growth.dist.total();
  event.branches = candidate.children.size();

  SplitNode split;
  split.feature = candidate.feature;
  split.numeric = candidate.numeric;
  split.threshold = candidate.threshold;
  std::vector<std::uint64_t> child_seeds;
  for (const ClassDistribution& child_dist : candidate.children) {
    auto child = std::make_unique<Node>();
    child->depth = node.depth + 1;
    child->body = MakeLeaf(child_dist);
    child_seeds.push_back(MixSeed(config_.seed, child->leaf().birth_index));
    split.children.push_back(std::move(child));
  }
  if (parent.boost) {
    std::vector<OlboostState> states = parent.boost->MigrateOnSplit(schema_, child_seeds);
    for (std::size_t i = 0; i < states.size(); ++i) {
      split.children[i]->leaf().boost.emplace(std::move(states[i]));
    }
  }
  node.body = std::move(split);
  split_log_.push_back(event);
}

void HoeffdingTree::ForceSplit(std::span<const std::size_t> path,
                               const SplitCandidate& candidate) {
  Node* node = root_.get();
  for (std::size_t slot : path) {
    if (node->is_leaf()) throw std::invalid_argument("force_split: path passes a leaf");
    auto& children = std::get<SplitNode>(node->body).children;
    if (slot >= children.size()) throw std::invalid_argument("force_split: bad child slot");
    node = children[slot].get();
  }
  if (!node->is_leaf()) throw std::invalid_argument("force_split: target is not a leaf");
  if (candidate.feature >= schema_.num_features() ||
      candidate.numeric == schema_.feature(candidate.feature).nominal()) {
    throw std::invalid_argument("force_split: test does not match the feature kind");
  }
  SplitLeaf(*node, candidate, 0.0, 0.0);
}

ProbabilityVector HoeffdingTree::Predict(std::span<const double> x) const {
  const LeafNode& leaf = SortToLeaf(x).leaf();
  if (leaf.boost) return leaf.boost->Predict(x);
  return LeafPredict(config_.predictor, leaf.adaptive, leaf.growth.dist,
                     leaf.growth.observers, x);
}

std::vector<double> HoeffdingTree::LeafEntropies() const {
  std::vector<double> out;
  std::vector<const Node*> stack{root_.get()};
  while (!stack.empty()) {
    const Node* node = stack.back();
    stack.pop_back();
    if (node->is_leaf()) {
      out.push_back(Entropy(node->leaf().growth.dist));
      continue;
    }
    const auto& children = node->split().children;
    for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(it->get());
  }
  return out;
}

ModelStats HoeffdingTree::Stats() const {
  ModelStats stats;
  const std::size_t num_classes = schema_.num_classes();
  std::vector<const Node*> stack{root_.get()};
  while (!stack.empty()) {
    const Node* node = stack.back();
    stack.pop_back();
    ++stats.node_count;
    stats.depth = std::max(stats.depth, node->depth);
    stats.size_bytes += kNodeBytes;
    if (node->is_leaf()) {
      const LeafNode& leaf = node->leaf();
      ++stats.leaf_count;
      stats.size_bytes += 8 * num_classes + kLeafBookkeepingBytes;
      if (config_.predictor == PredictorKind::kAdaptiveNaiveBayes) {
        stats.size_bytes += kAdaptiveBytes;
      }
      for (const AttributeObserver& obs : leaf.growth.observers) {
        stats.size_bytes += obs.AccountedBytes();
      }
      if (leaf.boost) stats.size_bytes += leaf.boost->AccountedBytes();
      continue;
    }
    const SplitNode& split = node->split();
    stats.size_bytes += kSplitTestBytes + 8 * split.children.size();
    for (const auto& child : split.children) stack.push_back(child.get());
  }
  return stats;
}

void HoeffdingTree::Dump(std::ostream& os) const {
  struct Item {
    const Node* node;
    std::string edge;
  };
  std::vector<Item> stack{{root_.get(), "root"}};
  while (!stack.empty()) {
    Item item = std::move(stack.back());
    stack.pop_back();
    const Node* node = item.node;
    os << std::string(2 * node->depth, ' ') << item.edge << ": ";
    if (node->is_leaf()) {
      const LeafNode& leaf = node->leaf();
      os << "leaf#" << leaf.birth_index << " counts=[";
      const auto counts = leaf.growth.dist.counts();
      for (std::size_t c = 0; c < counts.size(); ++c) os << (c ? "," : "") << counts[c];
      os << "]";
      if (leaf.boost) os << " boosted_weight=" << leaf.boost->distribution().total();
      os << '\n';
      continue;
    }
    const SplitNode& split = node->split();
    const Feature& f = schema_.feature(split.feature);
    os << "split " << f.name;
    if (split.numeric) os << " <= " << split.threshold;
    os << '\n';
    for (std::size_t i = split.children.size(); i-- > 0;) {
      std::string edge;
      if (split.numeric) edge = i == 0 ? "<=" : ">";
      else edge = f.name + "=" + f.categories[i];
      stack.push_back({split.children[i].get(), edge});
    }
  }
}

}  // namespace streamtree
