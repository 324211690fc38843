#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracles.h"
#include "streamtree/leaf_predictors.h"

namespace st = streamtree;

namespace {

struct Leaf {
  st::ClassDistribution dist;
  std::vector<st::AttributeObserver> observers;
};

Leaf Fit(const st::Schema& schema, const std::vector<st::Instance>& data,
         const std::vector<double>* weights = nullptr) {
  Leaf leaf{st::ClassDistribution(schema.num_classes()), st::MakeObservers(schema)};
  for (std::size_t k = 0; k < data.size(); ++k) {
    const double w = weights ? (*weights)[k] : 1.0;
    if (w == 0) continue;
    leaf.dist.Add(data[k].label, w);
    for (std::size_t f = 0; f < leaf.observers.size(); ++f) {
      leaf.observers[f].Observe(data[k].values[f], data[k].label, w);
    }
  }
  return leaf;
}

void ExpectProbabilityVector(const st::ProbabilityVector& p, std::size_t size) {
  ASSERT_EQ(p.size(), size);
  double sum = 0;
  for (double v : p) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_TRUE(std::isfinite(v));
    sum += v;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

}  // namespace

TEST(Normalize, Examples) {
  const auto a = st::Normalize(std::vector<double>{2, 3});
  EXPECT_DOUBLE_EQ(a[0], 0.4);
  EXPECT_DOUBLE_EQ(a[1], 0.6);
  const auto b = st::Normalize(std::vector<double>{0.25, 0.75});
  EXPECT_EQ(b, (st::ProbabilityVector{0.25, 0.75}));
  const auto c = st::Normalize(std::vector<double>{0, 0, 0});
  for (double v : c) EXPECT_DOUBLE_EQ(v, 1.0 / 3.0);
}

TEST(Normalize, RejectsNegativeAndNonFinite) {
  EXPECT_THROW(st::Normalize(std::vector<double>{1, -1}), std::invalid_argument);
  EXPECT_THROW(st::Normalize(std::vector<double>{1, NAN}), std::invalid_argument);
  EXPECT_THROW(st::Normalize(std::vector<double>{1, INFINITY}), std::invalid_argument);
}

TEST(Normalize, ScaleInvariant) {
  st::Rng rng(1);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> raw(2 + rng.UniformInt(8));
    for (double& v : raw) v = rng.Uniform(0, 10);
    const double c = std::exp(rng.Uniform(-20, 20));
    std::vector<double> scaled = raw;
    for (double& v : scaled) v *= c;
    const auto a = st::Normalize(raw);
    const auto b = st::Normalize(scaled);
    ExpectProbabilityVector(a, raw.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
    EXPECT_EQ(st::ArgMax(a), st::ArgMax(b));
  }
}

TEST(ArgMax, TiesGoToLowestIndex) {
  EXPECT_EQ(st::ArgMax(std::vector<double>{0.5, 0.5}), 0u);
  EXPECT_EQ(st::ArgMax(std::vector<double>{0.2, 0.4, 0.4}), 1u);
}

TEST(MajorityClass, Examples) {
  EXPECT_EQ(st::MajorityClassPredict(st::ClassDistribution(std::vector<double>{10, 0})),
            (st::ProbabilityVector{1.0, 0.0}));
  EXPECT_EQ(st::MajorityClassPredict(st::ClassDistribution(std::vector<double>{0, 0})),
            (st::ProbabilityVector{0.5, 0.5}));
  EXPECT_EQ(st::MajorityClassPredict(st::ClassDistribution(std::vector<double>{3, 1})),
            (st::ProbabilityVector{0.75, 0.25}));
}

TEST(NaiveBayes, EightInstanceBinaryTable) {
  st::Schema schema({st::Feature::Nominal("v", 2)}, {"c0", "c1"});
  std::vector<st::Instance> data;
  for (int i = 0; i < 4; ++i) data.push_back({{0.0}, 0});
  for (int i = 0; i < 4; ++i) data.push_back({{1.0}, 1});
  const Leaf leaf = Fit(schema, data);
  const auto p = st::NaiveBayesPredict(leaf.dist, leaf.observers, std::vector<double>{0.0});
  EXPECT_EQ(st::ArgMax(p), 0u);
  // 0.5 * 5/6 vs 0.5 * 1/6
  EXPECT_NEAR(p[0], 5.0 / 6.0, 1e-12);
}

TEST(NaiveBayes, IdenticalLikelihoodsReduceToPriors) {
  // Same value frequencies in both classes; the numeric feature is constant.
  st::Schema schema({st::Feature::Nominal("v", 2), st::Feature::Numeric("x")}, {"c0", "c1"});
  std::vector<st::Instance> data;
  for (int rep = 0; rep < 3; ++rep) {
    for (double v : {0.0, 1.0}) data.push_back({{v, 5.0}, 0});
  }
  for (double v : {0.0, 1.0}) data.push_back({{v, 5.0}, 1});
  const Leaf leaf = Fit(schema, data);
  for (double v : {0.0, 1.0}) {
    const auto nb = st::NaiveBayesPredict(leaf.dist, leaf.observers, std::vector<double>{v, 5.0});
    const auto mc = st::MajorityClassPredict(leaf.dist);
    EXPECT_NEAR(nb[0], mc[0], 1e-9);
    EXPECT_NEAR(nb[1], mc[1], 1e-9);
  }
}

TEST(NaiveBayes, NumericClassMeansZeroAndTen) {
  st::Schema schema({st::Feature::Numeric("x")}, {"c0", "c1"});
  std::vector<st::Instance> data;
  // Two points per class at mean +- 1/sqrt(2): unbiased variance 1.
  const double h = 1.0 / std::sqrt(2.0);
  data.push_back({{-h}, 0});
  data.push_back({{h}, 0});
  data.push_back({{10 - h}, 1});
  data.push_back({{10 + h}, 1});
  const Leaf leaf = Fit(schema, data);
  EXPECT_NEAR(leaf.observers[0].estimator(0).variance(), 1.0, 1e-12);
  const auto p = st::NaiveBayesPredict(leaf.dist, leaf.observers, std::vector<double>{0.0});
  EXPECT_GT(p[0], 0.99);
}

TEST(NaiveBayes, EmptyLeafIsUniform) {
  st::Schema schema({st::Feature::Numeric("x")}, {"a", "b", "c"});
  const Leaf leaf = Fit(schema, {});
  const auto p = st::NaiveBayesPredict(leaf.dist, leaf.observers, std::vector<double>{1.0});
  for (double v : p) EXPECT_DOUBLE_EQ(v, 1.0 / 3.0);
}

TEST(NaiveBayes, FarTailStillNormalizes) {
  st::Schema schema({st::Feature::Numeric("x"), st::Feature::Numeric("y")}, {"a", "b"});
  std::vector<st::Instance> data = {{{0, 0}, 0}, {{1, 1}, 0}, {{5, 5}, 1}, {{6, 6}, 1}};
  const Leaf leaf = Fit(schema, data);
  const auto p = st::NaiveBayesPredict(leaf.dist, leaf.observers, std::vector<double>{1e9, -1e9});
  ExpectProbabilityVector(p, 2);
}

TEST(NaiveBayes, MatchesBruteForceOracleOnEnumerableLeaves) {
  st::Rng rng(2);
  for (int t = 0; t < 300; ++t) {
    auto md = oracle::RandomMicroData(rng, 50, /*nominal_only=*/true, /*binary_only=*/true);
    const Leaf leaf = Fit(md.schema, md.data);
    // Every point of the binary feature cube.
    const std::size_t F = md.schema.num_features();
    for (std::size_t mask = 0; mask < (1u << F); ++mask) {
      std::vector<double> x(F);
      for (std::size_t f = 0; f < F; ++f) x[f] = (mask >> f) & 1u;
      const auto got = st::NaiveBayesPredict(leaf.dist, leaf.observers, x);
      const auto want = oracle::NaiveBayes(md.schema, md.data, x);
      for (std::size_t c = 0; c < got.size(); ++c) ASSERT_NEAR(got[c], want[c], 1e-9);
    }
  }
}

TEST(NaiveBayes, MatchesBruteForceOracleWithNumericFeatures) {
  st::Rng rng(3);
  for (int t = 0; t < 300; ++t) {
    auto md = oracle::RandomMicroData(rng, 200);
    const Leaf leaf = Fit(md.schema, md.data);
    for (int q = 0; q < 5; ++q) {
      const auto& x = md.data[rng.UniformInt(md.data.size())].values;
      std::vector<double> query = x;
      if (q % 2 == 1) {
        for (std::size_t f = 0; f < query.size(); ++f) {
          if (!md.schema.feature(f).nominal()) query[f] += rng.Normal();
        }
      }
      const auto got = st::NaiveBayesPredict(leaf.dist, leaf.observers, query);
      const auto want = oracle::NaiveBayes(md.schema, md.data, query);
      ExpectProbabilityVector(got, md.schema.num_classes());
      for (std::size_t c = 0; c < got.size(); ++c) ASSERT_NEAR(got[c], want[c], 1e-9) << t;
    }
  }
}

TEST(AdaptiveNaiveBayes, Arbitration) {
  st::Schema schema({st::Feature::Nominal("v", 2)}, {"c0", "c1"});
  std::vector<st::Instance> data = {{{0}, 0}, {{0}, 0}, {{0}, 0}, {{1}, 1}};
  const Leaf leaf = Fit(schema, data);
  const std::vector<double> x{1.0};
  const auto nb = st::NaiveBayesPredict(leaf.dist, leaf.observers, x);
  const auto mc = st::MajorityClassPredict(leaf.dist);
  ASSERT_NE(nb, mc);
  EXPECT_EQ(st::AdaptiveNaiveBayesPredict({5, 9}, leaf.dist, leaf.observers, x), nb);
  EXPECT_EQ(st::AdaptiveNaiveBayesPredict({9, 5}, leaf.dist, leaf.observers, x), mc);
  EXPECT_EQ(st::AdaptiveNaiveBayesPredict({0, 0}, leaf.dist, leaf.observers, x), nb);
}

TEST(AdaptiveNaiveBayes, SelectionFollowsCounters) {
  st::Rng rng(4);
  st::Schema schema({st::Feature::Nominal("v", 2)}, {"c0", "c1"});
  const Leaf leaf = Fit(schema, {{{0}, 0}, {{0}, 0}, {{0}, 0}, {{1}, 1}});
  const std::vector<double> x{1.0};
  for (int t = 0; t < 200; ++t) {
    st::AdaptiveState s{rng.UniformInt(20), rng.UniformInt(20)};
    const auto got = st::AdaptiveNaiveBayesPredict(s, leaf.dist, leaf.observers, x);
    const auto want = s.nb_correct >= s.mc_correct
                          ? st::NaiveBayesPredict(leaf.dist, leaf.observers, x)
                          : st::MajorityClassPredict(leaf.dist);
    EXPECT_EQ(got, want);
  }
}

TEST(AdaptiveNaiveBayes, RecordScoresBothPredictors) {
  st::Schema schema({st::Feature::Nominal("v", 2)}, {"c0", "c1"});
  const Leaf leaf = Fit(schema, {{{0}, 0}, {{0}, 0}, {{0}, 0}, {{1}, 1}});
  st::AdaptiveState s;
  st::AdaptiveRecord(s, leaf.dist, leaf.observers, {{0}, 0});  // both right
  EXPECT_EQ(s.mc_correct, 1u);
  EXPECT_EQ(s.nb_correct, 1u);
  st::AdaptiveRecord(s, leaf.dist, leaf.observers, {{0}, 1});  // both wrong
  EXPECT_EQ(s.mc_correct, 1u);
  EXPECT_EQ(s.nb_correct, 1u);
  st::AdaptiveRecord(s, leaf.dist, leaf.observers, {{1}, 1});  // only NB right
  EXPECT_EQ(s.mc_correct, 1u);
  EXPECT_EQ(s.nb_correct, 2u);
}

TEST(Predictors, OutputsAreProbabilityVectors) {
  st::Rng rng(5);
  for (int t = 0; t < 300; ++t) {
    auto md = oracle::RandomMicroData(rng, 100);
    std::vector<double> weights(md.data.size());
    for (double& w : weights) w = static_cast<double>(rng.UniformInt(5));
    const Leaf leaf = Fit(md.schema, md.data, &weights);
    const std::size_t C = md.schema.num_classes();
    st::AdaptiveState s{rng.UniformInt(10), rng.UniformInt(10)};
    std::vector<double> x = md.data[0].values;
    for (std::size_t f = 0; f < x.size(); ++f) {
      if (!md.schema.feature(f).nominal()) x[f] = rng.Normal() * 100;
    }
    for (auto kind : {st::PredictorKind::kMajorityClass, st::PredictorKind::kNaiveBayes,
                      st::PredictorKind::kAdaptiveNaiveBayes}) {
      ExpectProbabilityVector(st::LeafPredict(kind, s, leaf.dist, leaf.observers, x), C);
    }
  }
}

TEST(Predictors, ParseNames) {
  EXPECT_EQ(st::ParsePredictor("mc"), st::PredictorKind::kMajorityClass);
  EXPECT_EQ(st::ParsePredictor("NB"), st::PredictorKind::kNaiveBayes);
  EXPECT_EQ(st::ParsePredictor("anb"), st::PredictorKind::kAdaptiveNaiveBayes);
  EXPECT_THROW(st::ParsePredictor("knn"), st::ConfigError);
}
