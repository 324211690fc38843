#include "streamtree/prequential.h"

#include <chrono>
#include <exception>
#include <string>

#include "streamtree/csv.h"

namespace streamtree {

Clock SteadyClock() {
  return [] {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
  };
}

PrequentialReport PrequentialRun(InstanceStream& stream, const TreeConfig& config,
                                 std::size_t window, const Clock& clock,
                                 std::optional<HoeffdingTree>* trained_out) {
  if (window == 0) throw ConfigError("prequential: window must be >= 1");
  HoeffdingTree tree(stream.schema(), config);
  PrequentialReport report;
  report.config = config;
  report.window = window;

  Instance instance;
  WindowPoint current;
  double elapsed = 0.0;
  while (true) {
    try {
      if (!stream.Next(instance)) break;
    } catch (const std::exception& e) {
      throw StreamError("after " + std::to_string(report.instances) +
                        " instances: " + e.what());
    }
    const double start = clock();
    const ProbabilityVector probs = tree.Predict(instance.values);
    const bool hit = ArgMax(probs) == instance.label;
    tree.Train(instance);
    elapsed += clock() - start;

    ++report.instances;
    report.correct += hit;
    ++current.instances;
    current.correct += hit;
    if (current.instances == window) {
      report.trajectory.push_back(current);
      current = WindowPoint{};
    }
  }
  if (report.instances == 0) throw StreamError("prequential: stream is empty");
  if (current.instances > 0) report.trajectory.push_back(current);

  report.accuracy = static_cast<double>(report.correct) / static_cast<double>(report.instances);
  report.elapsed_seconds = elapsed;
  report.model = tree.Stats();
  report.split_count = tree.split_log().size();
  if (trained_out) trained_out->emplace(std::move(tree));
  return report;
}

}  // namespace streamtree
