#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <cmath>

#include "oracles.h"
#include "streamtree/generators.h"
#include "streamtree/olboost.h"
#include "streamtree/tree.h"

namespace st = streamtree;

namespace {

st::OlboostConfig Config(st::PredictorKind core, double lo = 1.0, double hi = 12.0) {
  st::OlboostConfig c;
  c.enabled = true;
  c.core = core;
  c.min_lambda = lo;
  c.max_lambda = hi;
  return c;
}

st::Schema BinarySchema() {
  return st::Schema({st::Feature::Nominal("v", 2), st::Feature::Numeric("x")}, {"a", "b"});
}

// Pearson statistic for `draws` against Poisson(lambda), bins merged so each
// expected count is at least 5. Returns {statistic, degrees of freedom}.
std::pair<double, double> PoissonChiSquare(const std::vector<std::uint64_t>& draws, double lambda) {
  boost::math::poisson_distribution<double> pois(lambda);
  const double n = static_cast<double>(draws.size());
  std::uint64_t max_k = 0;
  for (auto d : draws) max_k = std::max(max_k, d);
  std::vector<double> observed(max_k + 2, 0.0);
  for (auto d : draws) observed[d] += 1;

  std::vector<double> obs_bins, exp_bins;
  double o_acc = 0, e_acc = 0;
  std::uint64_t k = 0;
  while (true) {
    const double tail_after = boost::math::cdf(boost::math::complement(pois, static_cast<double>(k)));
    o_acc += k < observed.size() ? observed[k] : 0.0;
    e_acc += n * boost::math::pdf(pois, static_cast<double>(k));
    if (e_acc >= 5 && n * tail_after >= 5) {
      obs_bins.push_back(o_acc);
      exp_bins.push_back(e_acc);
      o_acc = e_acc = 0;
    }
    if (n * tail_after < 5) {
      // Everything above k goes into the final bin.
      double rest = 0;
      for (std::uint64_t j = k + 1; j < observed.size(); ++j) rest += observed[j];
      obs_bins.push_back(o_acc + rest);
      exp_bins.push_back(e_acc + n * tail_after);
      break;
    }
    ++k;
  }
  double chi2 = 0;
  for (std::size_t i = 0; i < obs_bins.size(); ++i) {
    chi2 += (obs_bins[i] - exp_bins[i]) * (obs_bins[i] - exp_bins[i]) / exp_bins[i];
  }
  return {chi2, static_cast<double>(obs_bins.size() - 1)};
}

}  // namespace

TEST(ComputeLambda, Examples) {
  EXPECT_DOUBLE_EQ(st::ComputeLambda(1.0, 1, 12), 1.0);
  EXPECT_DOUBLE_EQ(st::ComputeLambda(0.0, 1, 12), 12.0);
  EXPECT_DOUBLE_EQ(st::ComputeLambda(0.5, 1, 12), 6.5);
}

TEST(ComputeLambda, BoundsAndEndpoints) {
  st::Rng rng(1);
  for (int t = 0; t < 10000; ++t) {
    const double lo = rng.Uniform(0, 5);
    const double hi = lo + rng.Uniform(0, 20);
    const double p = rng.Uniform();
    const double l = st::ComputeLambda(p, lo, hi);
    EXPECT_GE(l, lo - 1e-12);
    EXPECT_LE(l, hi + 1e-12);
    EXPECT_EQ(st::ComputeLambda(1.0, lo, hi), lo);
    EXPECT_EQ(st::ComputeLambda(0.0, lo, hi), hi);
  }
}

TEST(ComputeLambda, RejectsBadInput) {
  EXPECT_THROW(st::ComputeLambda(1.1, 1, 12), std::invalid_argument);
  EXPECT_THROW(st::ComputeLambda(-0.1, 1, 12), std::invalid_argument);
  EXPECT_THROW(st::ComputeLambda(0.5, 5, 1), std::invalid_argument);
  EXPECT_THROW(st::ComputeLambda(0.5, -1, 1), std::invalid_argument);
  EXPECT_THROW(Config(st::PredictorKind::kMajorityClass, 3, 2).Validate(), st::ConfigError);
}

TEST(SampleWeight, ZeroLambdaIsZero) {
  st::Rng rng(2);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(st::SampleWeight(0.0, rng), 0u);
}

TEST(SampleWeight, MeanAndVarianceAtSixAndAHalf) {
  st::Rng rng(3);
  const int n = 1'000'000;
  double sum = 0, sum_sq = 0;
  for (int i = 0; i < n; ++i) {
    const double w = static_cast<double>(st::SampleWeight(6.5, rng));
    sum += w;
    sum_sq += w * w;
  }
  const double mean = sum / n;
  const double var = (sum_sq - n * mean * mean) / (n - 1);
  EXPECT_NEAR(mean, 6.5, 0.008);  // 3 * sqrt(6.5 / 1e6)
  EXPECT_GE(var, 6.4);
  EXPECT_LE(var, 6.6);
}

TEST(SampleWeight, ChiSquareGoodnessOfFit) {
  for (double lambda : {0.5, 1.0, 6.5, 12.0, 10.0, 10.5, 30.0}) {
    st::Rng rng(static_cast<std::uint64_t>(lambda * 1000) + 17);
    std::vector<std::uint64_t> draws(1'000'000);
    for (auto& d : draws) d = st::SampleWeight(lambda, rng);
    const auto [chi2, df] = PoissonChiSquare(draws, lambda);
    const double critical =
        boost::math::quantile(boost::math::chi_squared_distribution<double>(df), 1 - 0.001);
    EXPECT_LT(chi2, critical) << "lambda " << lambda << " df " << df;
  }
}

TEST(OlboostState, FreshPredictionIsUniform) {
  for (auto core : {st::PredictorKind::kMajorityClass, st::PredictorKind::kNaiveBayes,
                    st::PredictorKind::kAdaptiveNaiveBayes}) {
    st::OlboostState s(BinarySchema(), Config(core), 1);
    EXPECT_EQ(s.Predict(std::vector<double>{0.0, 1.0}), (st::ProbabilityVector{0.5, 0.5}));
  }
}

TEST(OlboostState, McCoreAllocatesNoObservers) {
  st::OlboostState mc(BinarySchema(), Config(st::PredictorKind::kMajorityClass), 1);
  EXPECT_TRUE(mc.observers().empty());
  EXPECT_EQ(mc.AccountedBytes(), st::kOlboostFixedBytes + 16);
  st::OlboostState nb(BinarySchema(), Config(st::PredictorKind::kNaiveBayes), 1);
  EXPECT_EQ(nb.observers().size(), 2u);
}

TEST(OlboostState, PureBoostedCountsMc) {
  st::OlboostState s(BinarySchema(), Config(st::PredictorKind::kMajorityClass), 4);
  for (int i = 0; i < 10; ++i) s.Train({{0.0, 1.0}, 0});
  ASSERT_GT(s.distribution().total(), 0.0);
  EXPECT_EQ(s.Predict(std::vector<double>{1.0, 2.0}), (st::ProbabilityVector{1.0, 0.0}));
}

TEST(OlboostState, ConfidentInstanceWithZeroMinLambdaIsANoOp) {
  st::OlboostState s(BinarySchema(), Config(st::PredictorKind::kMajorityClass, 0, 12), 5);
  while (s.distribution().total() == 0.0) s.Train({{0.0, 1.0}, 0});
  for (int i = 0; i < 100; ++i) {
    const auto before = s.distribution().total();
    EXPECT_EQ(s.Train({{1.0, 3.0}, 0}), 0u);
    EXPECT_EQ(s.distribution().total(), before);
  }
}

TEST(OlboostState, FreshUniformPredictionDrawsLambdaSixAndAHalf) {
  // p_true = 0.5 on fresh statistics, so lambda = 6.5 and E[w] = 6.5.
  const int n = 200000;
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    st::OlboostState s(BinarySchema(), Config(st::PredictorKind::kAdaptiveNaiveBayes),
                       st::MixSeed(77, i));
    sum += static_cast<double>(s.Train({{0.0, 1.0}, static_cast<std::size_t>(i % 2)}));
  }
  EXPECT_NEAR(sum / n, 6.5, 3 * std::sqrt(6.5 / n));
}

TEST(OlboostState, WeightedUpdateMatchesRepeatedUpdates) {
  st::Rng rng(6);
  const auto schema = BinarySchema();
  st::OlboostState s(schema, Config(st::PredictorKind::kNaiveBayes), 6);
  st::ClassDistribution dist(2);
  auto observers = st::MakeObservers(schema);
  for (int i = 0; i < 300; ++i) {
    st::Instance inst{{static_cast<double>(rng.UniformInt(2)), rng.Normal()}, rng.UniformInt(2)};
    const auto w = s.Train(inst);
    for (std::uint64_t k = 0; k < w; ++k) {
      dist.Add(inst.label, 1.0);
      for (std::size_t f = 0; f < 2; ++f) observers[f].Observe(inst.values[f], inst.label, 1.0);
    }
  }
  for (std::size_t c = 0; c < 2; ++c) {
    EXPECT_NEAR(s.distribution()[c], dist[c], 1e-9);
    for (std::size_t v = 0; v < 2; ++v) {
      EXPECT_NEAR(s.observers()[0].count(c, v), observers[0].count(c, v), 1e-9);
    }
    EXPECT_NEAR(s.observers()[1].estimator(c).mean(), observers[1].estimator(c).mean(), 1e-9);
    EXPECT_NEAR(s.observers()[1].estimator(c).variance(), observers[1].estimator(c).variance(),
                1e-9);
  }
}

TEST(OlboostState, NbCoreMatchesBruteForceOnWeightedMultiset) {
  st::Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    auto md = oracle::RandomMicroData(rng, 50, /*nominal_only=*/true, /*binary_only=*/true);
    st::OlboostState s(md.schema, Config(st::PredictorKind::kNaiveBayes), rng.NextU64());
    std::vector<double> weights;
    for (const auto& inst : md.data) weights.push_back(static_cast<double>(s.Train(inst)));
    const std::size_t F = md.schema.num_features();
    for (std::size_t mask = 0; mask < (1u << F); ++mask) {
      std::vector<double> x(F);
      for (std::size_t f = 0; f < F; ++f) x[f] = (mask >> f) & 1u;
      const auto got = s.Predict(x);
      const auto want = oracle::NaiveBayes(md.schema, md.data, x, &weights);
      for (std::size_t c = 0; c < got.size(); ++c) ASSERT_NEAR(got[c], want[c], 1e-9);
    }
  }
}

TEST(OlboostState, AnbCountersAdvanceOncePerInstance) {
  st::Rng rng(8);
  const auto schema = BinarySchema();
  st::OlboostState s(schema, Config(st::PredictorKind::kAdaptiveNaiveBayes), 8);
  for (int i = 0; i < 2000; ++i) {
    st::Instance inst{{static_cast<double>(rng.UniformInt(2)), rng.Normal()}, rng.UniformInt(2)};
    const bool mc_right =
        st::ArgMax(st::MajorityClassPredict(s.distribution())) == inst.label;
    const bool nb_right =
        st::ArgMax(st::NaiveBayesPredict(s.distribution(), s.observers(), inst.values)) ==
        inst.label;
    const auto before = s.adaptive();
    s.Train(inst);
    EXPECT_EQ(s.adaptive().mc_correct, before.mc_correct + (mc_right ? 1 : 0));
    EXPECT_EQ(s.adaptive().nb_correct, before.nb_correct + (nb_right ? 1 : 0));
  }
}

TEST(OlboostState, MigrateOnSplitGivesFreshChildren) {
  st::OlboostState s(BinarySchema(), Config(st::PredictorKind::kNaiveBayes, 0.5, 7), 9);
  for (int i = 0; i < 50; ++i) s.Train({{static_cast<double>(i % 2), 1.0 * i}, static_cast<std::size_t>(i % 2)});
  const std::vector<std::uint64_t> seeds{11, 12};
  const auto kids = s.MigrateOnSplit(BinarySchema(), seeds);
  ASSERT_EQ(kids.size(), 2u);
  for (const auto& k : kids) {
    EXPECT_EQ(k.distribution().total(), 0.0);
    EXPECT_EQ(k.adaptive().mc_correct + k.adaptive().nb_correct, 0u);
    EXPECT_EQ(k.core(), st::PredictorKind::kNaiveBayes);
    EXPECT_EQ(k.min_lambda(), 0.5);
    EXPECT_EQ(k.max_lambda(), 7.0);
  }
}

TEST(OlboostState, ChildRngStreamsDiffer) {
  int differ = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    st::HoeffdingTree tree(BinarySchema(), [&] {
      st::TreeConfig c;
      c.seed = seed;
      c.olboost.enabled = true;
      return c;
    }());
    st::SplitCandidate cand;
    cand.feature = 0;
    cand.children = {st::ClassDistribution(std::vector<double>{1, 0}),
                     st::ClassDistribution(std::vector<double>{0, 1})};
    tree.ForceSplit({}, cand);
    auto a = tree.root().split().children[0]->leaf().boost->rng();
    auto b = tree.root().split().children[1]->leaf().boost->rng();
    if (a.NextU64() != b.NextU64()) ++differ;
  }
  EXPECT_EQ(differ, 100);
}

TEST(OlboostTree, SplitLeavesFreshBoostedStates) {
  st::TreeConfig c;
  c.olboost.enabled = true;
  st::HoeffdingTree tree(BinarySchema(), c);
  for (int i = 0; i < 50; ++i) tree.Train({{static_cast<double>(i % 2), 1.0 * i}, static_cast<std::size_t>(i % 2)});
  EXPECT_GT(tree.root().leaf().boost->distribution().total(), 0.0);
  st::SplitCandidate cand;
  cand.feature = 0;
  cand.children = {st::ClassDistribution(std::vector<double>{25, 0}),
                   st::ClassDistribution(std::vector<double>{0, 25})};
  tree.ForceSplit({}, cand);
  for (const auto& child : tree.root().split().children) {
    ASSERT_TRUE(child->leaf().boost);
    EXPECT_EQ(child->leaf().boost->distribution().total(), 0.0);
    EXPECT_EQ(child->leaf().growth.dist.total(), 25.0);
  }
}

TEST(OlboostTree, DeterministicForEqualSeeds) {
  const auto cfg = st::GeneratorConfig::Parse("rbf:seed=4,length=20000");
  st::TreeConfig c;
  c.olboost.enabled = true;
  c.seed = 42;
  st::HoeffdingTree a(st::GeneratorSchema(cfg), c), b(st::GeneratorSchema(cfg), c);
  auto s1 = st::Generate(cfg), s2 = st::Generate(cfg);
  st::Instance x, y;
  while (s1->Next(x) && s2->Next(y)) {
    ASSERT_EQ(a.Predict(x.values), b.Predict(y.values));
    a.Train(x);
    b.Train(y);
  }
  EXPECT_EQ(a.Stats(), b.Stats());
  EXPECT_EQ(a.split_log(), b.split_log());
}

class GrowthIndependence
    : public ::testing::TestWithParam<std::tuple<std::string, st::GrowthPolicy, st::PredictorKind>> {};

TEST_P(GrowthIndependence, OlboostLeavesStructureUntouched) {
  const auto& [stream, policy, core] = GetParam();
  const auto cfg = st::GeneratorConfig::Parse(stream);
  st::TreeConfig plain;
  plain.policy = policy;
  plain.grace_period = 100;
  plain.tie_threshold = 0.1;
  st::TreeConfig boosted = plain;
  boosted.olboost.enabled = true;
  boosted.olboost.core = core;
  st::HoeffdingTree a(st::GeneratorSchema(cfg), plain), b(st::GeneratorSchema(cfg), boosted);
  auto s = st::Generate(cfg);
  st::Instance inst;
  while (s->Next(inst)) {
    a.Train(inst);
    b.Train(inst);
  }
  ASSERT_GT(a.split_log().size(), 0u);
  EXPECT_EQ(a.split_log(), b.split_log());
  EXPECT_EQ(a.Stats().node_count, b.Stats().node_count);
  EXPECT_EQ(a.Stats().depth, b.Stats().depth);
  EXPECT_EQ(a.split_attempts(), b.split_attempts());
  EXPECT_GT(b.Stats().size_bytes, a.Stats().size_bytes);
}

INSTANTIATE_TEST_SUITE_P(
    Streams, GrowthIndependence,
    ::testing::Combine(::testing::Values("sea:seed=9,length=30000", "rbf:seed=9,length=30000",
                                         "led:seed=9,length=30000", "agrawal:seed=9,length=30000"),
                       ::testing::Values(st::GrowthPolicy::kVfdt, st::GrowthPolicy::kSvfdt1,
                                         st::GrowthPolicy::kSvfdt2),
                       ::testing::Values(st::PredictorKind::kMajorityClass,
                                         st::PredictorKind::kAdaptiveNaiveBayes)));
