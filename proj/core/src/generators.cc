#include "streamtree/generators.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <string>

namespace streamtree {
namespace {

std::string FormatDouble(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

double ParseDouble(const std::string& key, const std::string& text) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError("generator: '" + key + "' expects a number, got '" + text + "'");
  }
  return v;
}

std::uint64_t ParseUnsigned(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ConfigError("generator: '" + key + "' expects a non-negative integer, got '" +
                      text + "'");
  }
  return v;
}

const std::set<std::string>& AllowedKeys(GeneratorFamily family) {
  static const std::map<GeneratorFamily, std::set<std::string>> keys = {
      {GeneratorFamily::kSea, {"seed", "length", "function", "noise"}},
      {GeneratorFamily::kAgrawal, {"seed", "length", "function", "perturbation"}},
      {GeneratorFamily::kHyperplane,
       {"seed", "length", "features", "drift_features", "mag_change", "sigma", "noise"}},
      {GeneratorFamily::kRbf, {"seed", "length", "features", "classes", "centroids"}},
      {GeneratorFamily::kLed, {"seed", "length", "noise"}},
  };
  return keys.at(family);
}

class GeneratorStream : public InstanceStream {
 public:
  GeneratorStream(const GeneratorConfig& config)
      : schema_(GeneratorSchema(config)), remaining_(config.length) {}

  const Schema& schema() const override { return schema_; }

  bool Next(Instance& out) override {
    if (remaining_ == 0) return false;
    --remaining_;
    out.values.resize(schema_.num_features());
    Fill(out);
    return true;
  }

 protected:
  virtual void Fill(Instance& out) = 0;

  Schema schema_;

 private:
  std::uint64_t remaining_;
};

class SeaStream : public GeneratorStream {
 public:
  explicit SeaStream(const GeneratorConfig& c)
      : GeneratorStream(c),
        rng_(c.seed),
        threshold_(SeaThreshold(c.function)),
        noise_(c.noise) {}

 protected:
  void Fill(Instance& out) override {
    for (double& v : out.values) v = rng_.Uniform(0.0, 10.0);
    out.label = SeaConcept(out.values[0], out.values[1], threshold_);
    if (noise_ > 0.0 && rng_.Bernoulli(noise_)) out.label = 1 - out.label;
  }

 private:
  Rng rng_;
  double threshold_;
  double noise_;
};

class AgrawalStream : public GeneratorStream {
 public:
  explicit AgrawalStream(const GeneratorConfig& c)
      : GeneratorStream(c), rng_(c.seed), function_(c.function), perturb_(c.perturbation) {}

 protected:
  void Fill(Instance& out) override {
    double salary = rng_.Uniform(20000.0, 150000.0);
    double commission = salary >= 75000.0 ? 0.0 : rng_.Uniform(10000.0, 85000.0);
    double age = 20.0 + static_cast<double>(rng_.UniformInt(61));
    const int elevel = static_cast<int>(rng_.UniformInt(5));
    const int car = static_cast<int>(rng_.UniformInt(20));
    const int zipcode = static_cast<int>(rng_.UniformInt(9));
    double hvalue = (9.0 - zipcode) * 100000.0 * (0.5 + rng_.Uniform());
    double hyears = 1.0 + static_cast<double>(rng_.UniformInt(30));
    double loan = rng_.Uniform(0.0, 500000.0);
    out.label = AgrawalConcept(function_, salary, commission, age, elevel, hvalue,
                               hyears, loan);
    if (perturb_ > 0.0) {
      salary = Perturb(salary, 20000.0, 150000.0);
      if (commission > 0.0) commission = Perturb(commission, 10000.0, 85000.0);
      age = std::round(Perturb(age, 20.0, 80.0));
      hvalue = Perturb(hvalue, 0.0, 1350000.0);
      hyears = std::round(Perturb(hyears, 1.0, 30.0));
      loan = Perturb(loan, 0.0, 500000.0);
    }
    out.values = {salary, commission, age, static_cast<double>(elevel),
                  static_cast<double>(car), static_cast<double>(zipcode),
                  hvalue, hyears, loan};
  }

 private:
  double Perturb(double value, double lo, double hi) {
    const double range = hi - lo;
    const double v = value + range * perturb_ * (2.0 * rng_.Uniform() - 1.0);
    return std::clamp(v, lo, hi);
  }

  Rng rng_;
  int function_;
  double perturb_;
};

class HyperplaneStream : public GeneratorStream {
 public:
  explicit HyperplaneStream(const GeneratorConfig& c)
      : GeneratorStream(c),
        rng_(c.seed),
        weights_(c.n_features),
        sigma_(c.n_features, 0.0),
        n_drift_(c.n_drift_features),
        mag_change_(c.mag_change),
        sigma_pct_(c.sigma_pct),
        noise_(c.noise) {
    for (double& w : weights_) w = rng_.Uniform();
    for (std::size_t i = 0; i < n_drift_; ++i) sigma_[i] = 1.0;
  }

 protected:
  void Fill(Instance& out) override {
    double sum = 0.0;
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      out.values[i] = rng_.Uniform();
      sum += weights_[i] * out.values[i];
      weight_sum += weights_[i];
    }
    out.label = sum >= 0.5 * weight_sum ? 1 : 0;
    if (noise_ > 0.0 && rng_.Bernoulli(noise_)) out.label = 1 - out.label;
    if (mag_change_ != 0.0) {
      for (std::size_t i = 0; i < n_drift_; ++i) {
        weights_[i] += sigma_[i] * mag_change_;
        if (rng_.Bernoulli(sigma_pct_)) sigma_[i] = -sigma_[i];
      }
    }
  }

 private:
  Rng rng_;
  std::vector<double> weights_;
  std::vector<double> sigma_;
  std::size_t n_drift_;
  double mag_change_;
  double sigma_pct_;
  double noise_;
};

class RbfStream : public GeneratorStream {
 public:
  explicit RbfStream(const GeneratorConfig& c)
      : GeneratorStream(c), rng_(MixSeed(c.seed, 2)) {
    Rng model(MixSeed(c.seed, 1));
    centroids_.resize(c.n_centroids);
    double total = 0.0;
    for (Centroid& centroid : centroids_) {
      centroid.center.resize(c.n_features);
      for (double& v : centroid.center) v = model.Uniform();
      centroid.label = static_cast<std::size_t>(model.UniformInt(c.n_classes));
      centroid.stddev = model.Uniform();
      total += model.Uniform();
      cumulative_.push_back(total);
    }
  }

 protected:
  void Fill(Instance& out) override {
    const double pick = rng_.Uniform() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), pick);
    const Centroid& centroid =
        centroids_[std::min<std::size_t>(it - cumulative_.begin(), centroids_.size() - 1)];
    double magnitude = 0.0;
    for (double& v : out.values) {
      v = 2.0 * rng_.Uniform() - 1.0;
      magnitude += v * v;
    }
    magnitude = std::sqrt(magnitude);
    const double desired = rng_.Normal() * centroid.stddev;
    const double scale = magnitude > 0.0 ? desired / magnitude : 0.0;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      out.values[i] = centroid.center[i] + out.values[i] * scale;
    }
    out.label = centroid.label;
  }

 private:
  struct Centroid {
    std::vector<double> center;
    std::size_t label = 0;
    double stddev = 0.0;
  };

  Rng rng_;
  std::vector<Centroid> centroids_;
  std::vector<double> cumulative_;
};

constexpr std::size_t kLedAttributes = 24;
constexpr std::size_t kLedRelevant = 7;

class LedStream : public GeneratorStream {
 public:
  explicit LedStream(const GeneratorConfig& c)
      : GeneratorStream(c), rng_(c.seed), noise_(c.noise) {}

 protected:
  void Fill(Instance& out) override {
    const int digit = static_cast<int>(rng_.UniformInt(10));
    const auto& segments = LedSegments(digit);
    for (std::size_t i = 0; i < kLedRelevant; ++i) {
      int bit = segments[i];
      if (noise_ > 0.0 && rng_.Bernoulli(noise_)) bit = 1 - bit;
      out.values[i] = bit;
    }
    for (std::size_t i = kLedRelevant; i < kLedAttributes; ++i) {
      out.values[i] = rng_.Bernoulli(0.5) ? 1.0 : 0.0;
    }
    out.label = static_cast<std::size_t>(digit);
  }

 private:
  Rng rng_;
  double noise_;
};

}  // namespace

const char* FamilyName(GeneratorFamily family) {
  switch (family) {
    case GeneratorFamily::kSea: return "sea";
    case GeneratorFamily::kAgrawal: return "agrawal";
    case GeneratorFamily::kHyperplane: return "hyperplane";
    case GeneratorFamily::kRbf: return "rbf";
    case GeneratorFamily::kLed: return "led";
  }
  return "?";
}

GeneratorConfig GeneratorConfig::Defaults(GeneratorFamily family) {
  GeneratorConfig c;
  c.family = family;
  switch (family) {
    case GeneratorFamily::kSea: c.noise = 0.1; break;
    case GeneratorFamily::kAgrawal: c.perturbation = 0.05; break;
    case GeneratorFamily::kHyperplane: c.noise = 0.05; break;
    case GeneratorFamily::kRbf: break;
    case GeneratorFamily::kLed: c.noise = 0.1; break;
  }
  return c;
}

void GeneratorConfig::Validate() const {
  const auto unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  const std::string name = FamilyName(family);
  switch (family) {
    case GeneratorFamily::kSea:
      if (function < 1 || function > 4) throw ConfigError("sea: function must be 1..4");
      if (!unit(noise)) throw ConfigError("sea: noise must be in [0, 1]");
      break;
    case GeneratorFamily::kAgrawal:
      if (function < 1 || function > 10) throw ConfigError("agrawal: function must be 1..10");
      if (!unit(perturbation)) throw ConfigError("agrawal: perturbation must be in [0, 1]");
      break;
    case GeneratorFamily::kHyperplane:
      if (n_features < 1) throw ConfigError("hyperplane: features must be >= 1");
      if (n_drift_features > n_features) {
        throw ConfigError("hyperplane: drift_features exceeds features");
      }
      if (!unit(noise)) throw ConfigError("hyperplane: noise must be in [0, 1]");
      if (!unit(sigma_pct)) throw ConfigError("hyperplane: sigma must be in [0, 1]");
      if (!std::isfinite(mag_change)) throw ConfigError("hyperplane: mag_change not finite");
      break;
    case GeneratorFamily::kRbf:
      if (n_features < 1) throw ConfigError("rbf: features must be >= 1");
      if (n_classes < 2) throw ConfigError("rbf: classes must be >= 2");
      if (n_centroids < 1) throw ConfigError("rbf: centroids must be >= 1");
      break;
    case GeneratorFamily::kLed:
      if (!unit(noise)) throw ConfigError("led: noise must be in [0, 1]");
      break;
  }
}

std::string GeneratorConfig::Canonical() const {
  std::string s = std::string(FamilyName(family)) + ":seed=" + std::to_string(seed) +
                  ",length=" + std::to_string(length);
  switch (family) {
    case GeneratorFamily::kSea:
      s += ",function=" + std::to_string(function) + ",noise=" + FormatDouble(noise);
      break;
    case GeneratorFamily::kAgrawal:
      s += ",function=" + std::to_string(function) +
           ",perturbation=" + FormatDouble(perturbation);
      break;
    case GeneratorFamily::kHyperplane:
      s += ",features=" + std::to_string(n_features) +
           ",drift_features=" + std::to_string(n_drift_features) +
           ",mag_change=" + FormatDouble(mag_change) + ",sigma=" + FormatDouble(sigma_pct) +
           ",noise=" + FormatDouble(noise);
      break;
    case GeneratorFamily::kRbf:
      s += ",features=" + std::to_string(n_features) +
           ",classes=" + std::to_string(n_classes) +
           ",centroids=" + std::to_string(n_centroids);
      break;
    case GeneratorFamily::kLed:
      s += ",noise=" + FormatDouble(noise);
      break;
  }
  return s;
}

GeneratorConfig GeneratorConfig::Parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string family_name = text.substr(0, colon);
  GeneratorFamily family;
  if (family_name == "sea") family = GeneratorFamily::kSea;
  else if (family_name == "agrawal") family = GeneratorFamily::kAgrawal;
  else if (family_name == "hyperplane" || family_name == "hyper") family = GeneratorFamily::kHyperplane;
  else if (family_name == "rbf") family = GeneratorFamily::kRbf;
  else if (family_name == "led" || family_name == "led24") family = GeneratorFamily::kLed;
  else throw ConfigError("unknown generator family '" + family_name + "'");

  GeneratorConfig c = Defaults(family);
  if (colon != std::string::npos) {
    const std::string rest = text.substr(colon + 1);
    std::size_t pos = 0;
    while (pos <= rest.size() && !rest.empty()) {
      const auto comma = rest.find(',', pos);
      const std::string item =
          rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      const auto eq = item.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("generator: expected key=value, got '" + item + "'");
      }
      const std::string key = item.substr(0, eq);
      const std::string value = item.substr(eq + 1);
      if (!AllowedKeys(family).contains(key)) {
        throw ConfigError("generator: '" + key + "' is not a parameter of " + family_name);
      }
      if (key == "seed") c.seed = ParseUnsigned(key, value);
      else if (key == "length") c.length = ParseUnsigned(key, value);
      else if (key == "function") c.function = static_cast<int>(ParseUnsigned(key, value));
      else if (key == "noise") c.noise = ParseDouble(key, value);
      else if (key == "perturbation") c.perturbation = ParseDouble(key, value);
      else if (key == "features") c.n_features = ParseUnsigned(key, value);
      else if (key == "classes") c.n_classes = ParseUnsigned(key, value);
      else if (key == "centroids") c.n_centroids = ParseUnsigned(key, value);
      else if (key == "drift_features") c.n_drift_features = ParseUnsigned(key, value);
      else if (key == "mag_change") c.mag_change = ParseDouble(key, value);
      else if (key == "sigma") c.sigma_pct = ParseDouble(key, value);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  c.Validate();
  return c;
}

Schema GeneratorSchema(const GeneratorConfig& config) {
  config.Validate();
  std::vector<Feature> features;
  std::vector<std::string> classes;
  switch (config.family) {
    case GeneratorFamily::kSea:
      for (int i = 1; i <= 3; ++i) features.push_back(Feature::Numeric("f" + std::to_string(i)));
      classes = {"groupA", "groupB"};
      break;
    case GeneratorFamily::kAgrawal:
      features = {Feature::Numeric("salary"),   Feature::Numeric("commission"),
                  Feature::Numeric("age"),      Feature::Nominal("elevel", 5),
                  Feature::Nominal("car", 20),  Feature::Nominal("zipcode", 9),
                  Feature::Numeric("hvalue"),   Feature::Numeric("hyears"),
                  Feature::Numeric("loan")};
      classes = {"groupA", "groupB"};
      break;
    case GeneratorFamily::kHyperplane:
      for (std::size_t i = 0; i < config.n_features; ++i) {
        features.push_back(Feature::Numeric("att" + std::to_string(i + 1)));
      }
      classes = {"class1", "class2"};
      break;
    case GeneratorFamily::kRbf:
      for (std::size_t i = 0; i < config.n_features; ++i) {
        features.push_back(Feature::Numeric("att" + std::to_string(i + 1)));
      }
      for (std::size_t i = 0; i < config.n_classes; ++i) {
        classes.push_back("class" + std::to_string(i + 1));
      }
      break;
    case GeneratorFamily::kLed:
      for (std::size_t i = 0; i < kLedAttributes; ++i) {
        features.push_back(Feature::Nominal("att" + std::to_string(i + 1), 2));
      }
      for (int d = 0; d < 10; ++d) classes.push_back(std::to_string(d));
      break;
  }
  return Schema(std::move(features), std::move(classes));
}

std::unique_ptr<InstanceStream> Generate(const GeneratorConfig& config) {
  config.Validate();
  switch (config.family) {
    case GeneratorFamily::kSea: return std::make_unique<SeaStream>(config);
    case GeneratorFamily::kAgrawal: return std::make_unique<AgrawalStream>(config);
    case GeneratorFamily::kHyperplane: return std::make_unique<HyperplaneStream>(config);
    case GeneratorFamily::kRbf: return std::make_unique<RbfStream>(config);
    case GeneratorFamily::kLed: return std::make_unique<LedStream>(config);
  }
  throw ConfigError("unsupported generator family");
}

double SeaThreshold(int function) {
  static constexpr double kThresholds[4] = {8.0, 9.0, 7.0, 9.5};
  if (function < 1 || function > 4) throw ConfigError("sea: function must be 1..4");
  return kThresholds[function - 1];
}

std::size_t SeaConcept(double f1, double f2, double threshold) {
  return f1 + f2 <= threshold ? 0 : 1;
}

std::size_t AgrawalConcept(int function, double salary, double commission,
                           double age, int elevel, double hvalue, double hyears,
                           double loan) {
  const auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
  bool group_a = false;
  switch (function) {
    case 1:
      group_a = age < 40 || age >= 60;
      break;
    case 2:
      if (age < 40) group_a = in(salary, 50000, 100000);
      else if (age < 60) group_a = in(salary, 75000, 125000);
      else group_a = in(salary, 25000, 75000);
      break;
    case 3:
      if (age < 40) group_a = elevel == 0 || elevel == 1;
      else if (age < 60) group_a = elevel >= 1 && elevel <= 3;
      else group_a = elevel >= 2 && elevel <= 4;
      break;
    case 4:
      if (age < 40) {
        group_a = (elevel == 0 || elevel == 1) ? in(salary, 25000, 75000)
                                               : in(salary, 50000, 100000);
      } else if (age < 60) {
        group_a = (elevel >= 1 && elevel <= 3) ? in(salary, 50000, 100000)
                                               : in(salary, 75000, 125000);
      } else {
        group_a = (elevel >= 2 && elevel <= 4) ? in(salary, 50000, 100000)
                                               : in(salary, 25000, 75000);
      }
      break;
    case 5:
      if (age < 40) {
        group_a = in(salary, 50000, 100000) ? in(loan, 100000, 300000)
                                            : in(loan, 200000, 400000);
      } else if (age < 60) {
        group_a = in(salary, 75000, 125000) ? in(loan, 200000, 400000)
                                            : in(loan, 300000, 500000);
      } else {
        group_a = in(salary, 25000, 75000) ? in(loan, 300000, 500000)
                                           : in(loan, 100000, 300000);
      }
      break;
    case 6: {
      const double total = salary + commission;
      if (age < 40) group_a = in(total, 50000, 100000);
      else if (age < 60) group_a = in(total, 75000, 125000);
      else group_a = in(total, 25000, 75000);
      break;
    }
    case 7:
      group_a = 2.0 * (salary + commission) / 3.0 - loan / 5.0 - 20000.0 > 0;
      break;
    case 8:
      group_a = 2.0 * (salary + commission) / 3.0 - 5000.0 * elevel - 20000.0 > 0;
      break;
    case 9:
      group_a = 2.0 * (salary + commission) / 3.0 - 5000.0 * elevel - loan / 5.0 -
                    10000.0 > 0;
      break;
    case 10: {
      const double equity = hyears >= 20 ? hvalue * (hyears - 20.0) / 10.0 : 0.0;
      group_a = 2.0 * (salary + commission) / 3.0 - 5000.0 * elevel + equity / 5.0 -
                    10000.0 > 0;
      break;
    }
    default:
      throw ConfigError("agrawal: function must be 1..10");
  }
  return group_a ? 0 : 1;
}

const std::array<int, 7>& LedSegments(int digit) {
  static constexpr std::array<std::array<int, 7>, 10> kTable = {{
      {1, 1, 1, 0, 1, 1, 1},  // 0
      {0, 0, 1, 0, 0, 1, 0},  // 1
      {1, 0, 1, 1, 1, 0, 1},  // 2
      {1, 0, 1, 1, 0, 1, 1},  // 3
      {0, 1, 1, 1, 0, 1, 0},  // 4
      {1, 1, 0, 1, 0, 1, 1},  // 5
      {1, 1, 0, 1, 1, 1, 1},  // 6
      {1, 0, 1, 0, 0, 1, 0},  // 7
      {1, 1, 1, 1, 1, 1, 1},  // 8
      {1, 1, 1, 1, 0, 1, 1},  // 9
  }};
  if (digit < 0 || digit > 9) throw std::invalid_argument("led: digit must be 0..9");
  return kTable[digit];
}

}  // namespace streamtree
