#include "streamtree/report_io.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "streamtree/csv.h"

namespace streamtree {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string Quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string Num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string ReportToJson(const PrequentialReport& r) {
  ordered_json j;
  j["fingerprint"] = r.fingerprint;
  j["pair_key"] = r.pair_key;
  j["dataset"] = r.dataset;
  j["algorithm"] = r.algorithm;
  j["config"] = {
      {"grace_period", r.config.grace_period},
      {"tie_threshold", r.config.tie_threshold},
      {"delta", r.config.delta},
      {"predictor", PredictorName(r.config.predictor)},
      {"policy", PolicyName(r.config.policy)},
      {"olboost",
       {{"enabled", r.config.olboost.enabled},
        {"core", PredictorName(r.config.olboost.core)},
        {"min_lambda", r.config.olboost.min_lambda},
        {"max_lambda", r.config.olboost.max_lambda}}},
      {"seed", r.config.seed},
  };
  j["window"] = r.window;
  j["instances"] = r.instances;
  j["correct"] = r.correct;
  j["accuracy"] = r.accuracy;
  j["model"] = {{"node_count", r.model.node_count},
                {"leaf_count", r.model.leaf_count},
                {"depth", r.model.depth},
                {"size_bytes", r.model.size_bytes}};
  j["split_count"] = r.split_count;
  ordered_json traj = ordered_json::array();
  for (const WindowPoint& p : r.trajectory) traj.push_back({p.instances, p.correct});
  j["trajectory"] = std::move(traj);
  j["elapsed_seconds"] = r.elapsed_seconds;
  return j.dump(2) + "\n";
}

PrequentialReport ReportFromJson(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    PrequentialReport r;
    r.fingerprint = j.at("fingerprint").get<std::string>();
    r.pair_key = j.at("pair_key").get<std::string>();
    r.dataset = j.at("dataset").get<std::string>();
    r.algorithm = j.at("algorithm").get<std::string>();
    const auto& c = j.at("config");
    r.config.grace_period = c.at("grace_period").get<std::size_t>();
    r.config.tie_threshold = c.at("tie_threshold").get<double>();
    r.config.delta = c.at("delta").get<double>();
    r.config.predictor = ParsePredictor(c.at("predictor").get<std::string>());
    r.config.policy = ParsePolicy(c.at("policy").get<std::string>());
    const auto& ob = c.at("olboost");
    r.config.olboost.enabled = ob.at("enabled").get<bool>();
    r.config.olboost.core = ParsePredictor(ob.at("core").get<std::string>());
    r.config.olboost.min_lambda = ob.at("min_lambda").get<double>();
    r.config.olboost.max_lambda = ob.at("max_lambda").get<double>();
    r.config.seed = c.at("seed").get<std::uint64_t>();
    r.window = j.at("window").get<std::size_t>();
    r.instances = j.at("instances").get<std::uint64_t>();
    r.correct = j.at("correct").get<std::uint64_t>();
    r.accuracy = j.at("accuracy").get<double>();
    const auto& m = j.at("model");
    r.model.node_count = m.at("node_count").get<std::size_t>();
    r.model.leaf_count = m.at("leaf_count").get<std::size_t>();
    r.model.depth = m.at("depth").get<std::size_t>();
    r.model.size_bytes = m.at("size_bytes").get<std::size_t>();
    r.split_count = j.at("split_count").get<std::size_t>();
    for (const auto& p : j.at("trajectory")) {
      r.trajectory.push_back({p.at(0).get<std::uint64_t>(), p.at(1).get<std::uint64_t>()});
    }
    r.elapsed_seconds = j.at("elapsed_seconds").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw StreamError(std::string("malformed report: ") + e.what());
  }
}

std::string ReportCsvHeader() {
  return "fingerprint,dataset,algorithm,grace_period,tie_threshold,delta,predictor,"
         "olboost_core,min_lambda,max_lambda,seed,window,instances,correct,accuracy,"
         "node_count,leaf_count,depth,size_bytes,split_count,elapsed_seconds";
}

std::string ReportCsvRow(const PrequentialReport& r) {
  std::ostringstream os;
  os << r.fingerprint << ',' << Quote(r.dataset) << ',' << r.algorithm << ','
     << r.config.grace_period << ',' << Num(r.config.tie_threshold) << ','
     << Num(r.config.delta) << ',' << PredictorName(r.config.predictor) << ','
     << (r.config.olboost.enabled ? PredictorName(r.config.olboost.core) : "none") << ','
     << Num(r.config.olboost.min_lambda) << ',' << Num(r.config.olboost.max_lambda) << ','
     << r.config.seed << ',' << r.window << ',' << r.instances << ',' << r.correct << ','
     << Num(r.accuracy) << ',' << r.model.node_count << ',' << r.model.leaf_count << ','
     << r.model.depth << ',' << r.model.size_bytes << ',' << r.split_count << ','
     << Num(r.elapsed_seconds);
  return os.str();
}

void WriteReportFile(const PrequentialReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw StreamError("cannot write '" + path.string() + "'");
  out << ReportToJson(report);
}

PrequentialReport ReadReportFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StreamError("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return ReportFromJson(buf.str());
}

std::vector<PrequentialReport> ReadReportDirectory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw StreamError("no report directory '" + dir.string() + "'");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<PrequentialReport> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(ReadReportFile(f));
  return out;
}

}  // namespace streamtree
