#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "streamtree/schema.h"
#include "streamtree/tree.h"

namespace streamtree {

struct WindowPoint {
  std::uint64_t instances = 0;
  std::uint64_t correct = 0;

  bool operator==(const WindowPoint&) const = default;
};

struct PrequentialReport {
  // Identity
  std::string fingerprint;  // whole run
  std::string pair_key;     // grid cell shared by every algorithm
  std::string dataset;
  std::string algorithm;
  TreeConfig config;
  std::size_t window = 1000;

  // Results
  std::vector<WindowPoint> trajectory;
  std::uint64_t instances = 0;
  std::uint64_t correct = 0;
  double accuracy = 0.0;
  double elapsed_seconds = 0.0;
  ModelStats model;
  std::size_t split_count = 0;
};

inline constexpr std::size_t kDefaultWindow = 1000;

// Monotonic seconds. Injected so tests can drive a fake clock.
using Clock = std::function<double()>;
Clock SteadyClock();

// Test-then-train over the whole stream. Only Predict + Train fall inside
// the timed region. Stream failures are rethrown as StreamError naming the
// number of instances already processed.
PrequentialReport PrequentialRun(InstanceStream& stream,
                                 const TreeConfig& config,
                                 std::size_t window = kDefaultWindow,
                                 const Clock& clock = SteadyClock(),
                                 std::optional<HoeffdingTree>* trained_out = nullptr);

}  // namespace streamtree
