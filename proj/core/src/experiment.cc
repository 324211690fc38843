#include "streamtree/experiment.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "streamtree/report_io.h"

namespace streamtree {

using nlohmann::json;

namespace {

std::string FormatDouble(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string Lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

std::string StableHash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

StreamSpec StreamSpec::Parse(const std::string& text) {
  StreamSpec spec;
  if (text.rfind("csv:", 0) == 0) {
    std::stringstream items(text.substr(4));
    std::string item;
    while (std::getline(items, item, ',')) {
      const auto eq = item.find('=');
      const std::string key = item.substr(0, eq);
      const std::string value = eq == std::string::npos ? "" : item.substr(eq + 1);
      if (key == "path") spec.csv_path = value;
      else if (key == "schema") spec.schema_path = value;
      else throw ConfigError("csv stream: unknown key '" + key + "'");
    }
    if (spec.csv_path.empty()) throw ConfigError("csv stream: missing path=");
    return spec;
  }
  spec.generator = GeneratorConfig::Parse(text);
  return spec;
}

std::string StreamSpec::Canonical() const {
  if (generator) return generator->Canonical();
  std::string s = "csv:path=" + csv_path.string();
  if (schema_path) s += ",schema=" + schema_path->string();
  return s;
}

std::unique_ptr<InstanceStream> StreamSpec::Open() const {
  if (generator) return Generate(*generator);
  std::optional<CsvSchema> schema;
  if (schema_path) schema = ReadSchemaFile(*schema_path);
  return OpenCsvStream(csv_path, std::move(schema));
}

std::uint64_t StreamSpec::EstimatedLength() const {
  if (generator) return generator->length;
  std::ifstream in(csv_path);
  if (!in) throw StreamError("cannot open '" + csv_path.string() + "'");
  std::uint64_t rows = 0;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.find_first_not_of(" \t\r") != std::string::npos) ++rows;
  }
  return rows;
}

std::string AlgorithmSpec::Name() const {
  return std::string(olboost ? "O_" : "") + PolicyName(policy);
}

AlgorithmSpec AlgorithmSpec::Parse(const std::string& text) {
  std::string s = Lower(text);
  AlgorithmSpec spec;
  if (s.rfind("o_", 0) == 0 || s.rfind("o-", 0) == 0) {
    spec.olboost = true;
    s = s.substr(2);
  }
  try {
    spec.policy = ParsePolicy(s);
  } catch (const ConfigError&) {
    throw ConfigError("unknown algorithm '" + text + "'");
  }
  return spec;
}

std::string RunSpec::PairKey() const {
  std::string s = "stream=" + stream.Canonical() +
                  ";gp=" + std::to_string(tree.grace_period) +
                  ";tau=" + FormatDouble(tree.tie_threshold) +
                  ";delta=" + FormatDouble(tree.delta) +
                  ";predictor=" + PredictorName(tree.predictor) +
                  ";seed=" + std::to_string(tree.seed) +
                  ";window=" + std::to_string(window);
  return s;
}

std::string RunSpec::Canonical() const {
  std::string s = PairKey() + ";algorithm=" + algorithm.Name();
  if (tree.olboost.enabled) {
    s += ";olboost=" + std::string(PredictorName(tree.olboost.core)) + "/" +
         FormatDouble(tree.olboost.min_lambda) + "/" + FormatDouble(tree.olboost.max_lambda);
  }
  return s;
}

namespace {

[[noreturn]] void FieldError(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

template <typename T, typename Check>
std::vector<T> ReadList(const json& j, const std::string& path, Check check) {
  if (!j.is_array()) FieldError(path, "expected a list");
  std::vector<T> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string item_path = path + "[" + std::to_string(i) + "]";
    if (!check(j[i])) FieldError(item_path, "wrong type");
    out.push_back(j[i].get<T>());
  }
  return out;
}

bool IsString(const json& j) { return j.is_string(); }
bool IsUnsigned(const json& j) { return j.is_number_unsigned(); }
bool IsNumber(const json& j) { return j.is_number(); }

}  // namespace

ExperimentPlan ExperimentPlan::FromJson(const std::string& text) {
  return FromJson(text, ExperimentPlan{});
}

ExperimentPlan ExperimentPlan::FromFile(const std::filesystem::path& path) {
  return FromFile(path, ExperimentPlan{});
}

ExperimentPlan ExperimentPlan::FromJson(const std::string& text, ExperimentPlan base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("plan: not valid JSON: ") + e.what());
  }
  if (!j.is_object()) FieldError("plan", "expected an object");
  ExperimentPlan plan = std::move(base);
  for (const auto& [key, value] : j.items()) {
    const std::string path = "plan." + key;
    if (key == "streams") {
      plan.streams = ReadList<std::string>(value, path, IsString);
    } else if (key == "algorithms") {
      plan.algorithms = ReadList<std::string>(value, path, IsString);
    } else if (key == "grace_periods") {
      plan.grace_periods = ReadList<std::size_t>(value, path, IsUnsigned);
    } else if (key == "tie_thresholds") {
      plan.tie_thresholds = ReadList<double>(value, path, IsNumber);
    } else if (key == "seeds") {
      plan.seeds = ReadList<std::uint64_t>(value, path, IsUnsigned);
    } else if (key == "delta" || key == "min_lambda" || key == "max_lambda" ||
               key == "alpha") {
      if (!value.is_number()) FieldError(path, "expected a number");
      const double v = value.get<double>();
      if (key == "delta") plan.delta = v;
      else if (key == "min_lambda") plan.min_lambda = v;
      else if (key == "max_lambda") plan.max_lambda = v;
      else plan.alpha = v;
    } else if (key == "window" || key == "jobs") {
      if (!value.is_number_unsigned()) FieldError(path, "expected a non-negative integer");
      (key == "window" ? plan.window : plan.jobs) = value.get<std::size_t>();
    } else if (key == "predictor" || key == "olboost_core" || key == "out") {
      if (!value.is_string()) FieldError(path, "expected a string");
      const auto v = value.get<std::string>();
      if (key == "predictor") plan.predictor = v;
      else if (key == "olboost_core") plan.olboost_core = v;
      else plan.out = v;
    } else {
      FieldError(path, "unknown field");
    }
  }
  return plan;
}

ExperimentPlan ExperimentPlan::FromFile(const std::filesystem::path& path, ExperimentPlan base) {
  std::ifstream in(path);
  if (!in) throw StreamError("cannot open plan file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return FromJson(buf.str(), std::move(base));
}

std::string ExperimentPlan::ToJson() const {
  nlohmann::ordered_json j;
  j["streams"] = streams;
  j["algorithms"] = algorithms;
  j["grace_periods"] = grace_periods;
  j["tie_thresholds"] = tie_thresholds;
  j["delta"] = delta;
  j["predictor"] = predictor;
  j["olboost_core"] = olboost_core;
  j["min_lambda"] = min_lambda;
  j["max_lambda"] = max_lambda;
  j["seeds"] = seeds;
  j["window"] = window;
  j["alpha"] = alpha;
  j["jobs"] = jobs;
  j["out"] = out.string();
  return j.dump(2) + "\n";
}

void ExperimentPlan::Validate() const {
  if (streams.empty()) FieldError("plan.streams", "must not be empty");
  if (algorithms.empty()) FieldError("plan.algorithms", "must not be empty");
  if (grace_periods.empty()) FieldError("plan.grace_periods", "must not be empty");
  if (tie_thresholds.empty()) FieldError("plan.tie_thresholds", "must not be empty");
  if (seeds.empty()) FieldError("plan.seeds", "must not be empty");
  for (std::size_t i = 0; i < streams.size(); ++i) {
    const std::string path = "plan.streams[" + std::to_string(i) + "]";
    StreamSpec spec;
    try {
      spec = StreamSpec::Parse(streams[i]);
    } catch (const ConfigError& e) {
      FieldError(path, e.what());
    }
    if (!spec.generator && !std::filesystem::exists(spec.csv_path)) {
      throw StreamError(path + ": no such file '" + spec.csv_path.string() + "'");
    }
  }
  for (std::size_t i = 0; i < algorithms.size(); ++i) {
    try {
      AlgorithmSpec::Parse(algorithms[i]);
    } catch (const ConfigError& e) {
      FieldError("plan.algorithms[" + std::to_string(i) + "]", e.what());
    }
  }
  for (std::size_t i = 0; i < grace_periods.size(); ++i) {
    if (grace_periods[i] < 1) {
      FieldError("plan.grace_periods[" + std::to_string(i) + "]", "must be >= 1");
    }
  }
  for (std::size_t i = 0; i < tie_thresholds.size(); ++i) {
    if (!(tie_thresholds[i] >= 0.0 && tie_thresholds[i] <= 1.0)) {
      FieldError("plan.tie_thresholds[" + std::to_string(i) + "]", "must be in [0, 1]");
    }
  }
  if (!(delta > 0.0 && delta < 1.0)) FieldError("plan.delta", "must be in (0, 1)");
  try {
    ParsePredictor(predictor);
  } catch (const ConfigError& e) {
    FieldError("plan.predictor", e.what());
  }
  try {
    ParsePredictor(olboost_core);
  } catch (const ConfigError& e) {
    FieldError("plan.olboost_core", e.what());
  }
  if (!(min_lambda >= 0.0)) FieldError("plan.min_lambda", "must be >= 0");
  if (!(max_lambda >= min_lambda)) FieldError("plan.max_lambda", "must be >= min_lambda");
  if (window < 1) FieldError("plan.window", "must be >= 1");
  if (jobs < 1) FieldError("plan.jobs", "must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) FieldError("plan.alpha", "must be in (0, 1)");

  std::map<std::string, int> seen;
  std::vector<std::string> duplicates;
  for (const RunSpec& run : Expand()) {
    if (++seen[run.Canonical()] == 2) duplicates.push_back(run.Canonical());
  }
  if (!duplicates.empty()) {
    std::string msg = "duplicate runs:";
    for (const auto& d : duplicates) msg += "\n  " + d;
    FieldError("plan", msg);
  }
}

std::vector<RunSpec> ExperimentPlan::Expand() const {
  std::vector<RunSpec> runs;
  const PredictorKind predictor_kind = ParsePredictor(predictor);
  const PredictorKind core = ParsePredictor(olboost_core);
  for (const std::string& stream_text : streams) {
    const StreamSpec stream = StreamSpec::Parse(stream_text);
    for (const std::string& algo_text : algorithms) {
      const AlgorithmSpec algo = AlgorithmSpec::Parse(algo_text);
      for (std::size_t gp : grace_periods) {
        for (double tau : tie_thresholds) {
          for (std::uint64_t seed : seeds) {
            RunSpec run;
            run.stream = stream;
            run.algorithm = algo;
            run.window = window;
            run.tree.grace_period = gp;
            run.tree.tie_threshold = tau;
            run.tree.delta = delta;
            run.tree.predictor = predictor_kind;
            run.tree.policy = algo.policy;
            run.tree.olboost.enabled = algo.olboost;
            run.tree.olboost.core = core;
            run.tree.olboost.min_lambda = min_lambda;
            run.tree.olboost.max_lambda = max_lambda;
            run.tree.seed = seed;
            runs.push_back(std::move(run));
          }
        }
      }
    }
  }
  return runs;
}

PrequentialReport ExecuteRun(const RunSpec& run) {
  auto stream = run.stream.Open();
  PrequentialReport report = PrequentialRun(*stream, run.tree, run.window);
  report.fingerprint = run.Fingerprint();
  report.pair_key = StableHash(run.PairKey());
  report.dataset = run.stream.Canonical();
  report.algorithm = run.algorithm.Name();
  return report;
}

ExperimentOutcome RunExperiment(const ExperimentPlan& plan, std::ostream* progress) {
  plan.Validate();
  const std::vector<RunSpec> runs = plan.Expand();
  std::vector<std::optional<PrequentialReport>> results(runs.size());
  std::vector<std::optional<std::string>> errors(runs.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;

  const auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= runs.size()) return;
      try {
        results[i] = ExecuteRun(runs[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
      if (progress) {
        std::lock_guard lock(log_mutex);
        *progress << "[" << (i + 1) << "/" << runs.size() << "] " << runs[i].Fingerprint()
                  << " " << runs[i].algorithm.Name() << " gp=" << runs[i].tree.grace_period
                  << " tau=" << runs[i].tree.tie_threshold << " seed=" << runs[i].tree.seed
                  << " " << runs[i].stream.Canonical();
        if (results[i]) *progress << " accuracy=" << results[i]->accuracy;
        else *progress << " FAILED: " << *errors[i];
        *progress << '\n';
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(plan.jobs, runs.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  ExperimentOutcome outcome;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (results[i]) outcome.reports.push_back(std::move(*results[i]));
    else outcome.failures.push_back({runs[i].Fingerprint(), *errors[i]});
  }
  return outcome;
}

void WriteComparisons(std::span<const PrequentialReport> reports, double alpha,
                      const std::filesystem::path& dir) {
  for (Metric metric : {Metric::kAccuracy, Metric::kSizeBytes, Metric::kElapsed}) {
    const WinMatrix matrix = CompareAlgorithms(reports, metric, alpha);
    std::ofstream out(dir / ("compare_" + std::string(MetricName(metric)) + ".csv"));
    if (!out) throw StreamError("cannot write comparison under '" + dir.string() + "'");
    out << matrix.ToCsv();
  }
}

std::vector<WinMatrix> CompareDirectory(const std::filesystem::path& dir, double alpha) {
  const auto reports = ReadReportDirectory(dir / "reports");
  WriteComparisons(reports, alpha, dir);
  std::vector<WinMatrix> out;
  for (Metric metric : {Metric::kAccuracy, Metric::kSizeBytes, Metric::kElapsed}) {
    out.push_back(CompareAlgorithms(reports, metric, alpha));
  }
  return out;
}

void WriteOutputs(const ExperimentPlan& plan, const ExperimentOutcome& outcome,
                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "reports");
  for (const PrequentialReport& r : outcome.reports) {
    WriteReportFile(r, dir / "reports" / (r.fingerprint + ".json"));
  }
  {
    std::ofstream csv(dir / "runs.csv");
    if (!csv) throw StreamError("cannot write '" + (dir / "runs.csv").string() + "'");
    csv << ReportCsvHeader() << '\n';
    for (const PrequentialReport& r : outcome.reports) csv << ReportCsvRow(r) << '\n';
  }
  std::string compare_error;
  if (outcome.ok() && !outcome.reports.empty()) {
    try {
      WriteComparisons(outcome.reports, plan.alpha, dir);
    } catch (const std::exception& e) {
      compare_error = e.what();
    }
  }
  nlohmann::ordered_json manifest;
  manifest["complete"] = outcome.ok();
  manifest["completed"] = json::array();
  for (const auto& r : outcome.reports) manifest["completed"].push_back(r.fingerprint);
  manifest["failed"] = json::array();
  for (const auto& f : outcome.failures) {
    manifest["failed"].push_back({{"fingerprint", f.fingerprint}, {"error", f.error}});
  }
  if (!compare_error.empty()) manifest["compare_error"] = compare_error;
  manifest["plan"] = nlohmann::ordered_json::parse(plan.ToJson());
  std::ofstream out(dir / "manifest.json");
  if (!out) throw StreamError("cannot write '" + (dir / "manifest.json").string() + "'");
  out << manifest.dump(2) << '\n';
}

}  // namespace streamtree
