#include "streamtree/wilcoxon.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace streamtree {
namespace {

struct RankedSample {
  // Ranks of |d| doubled so average ranks of ties stay integral.
  std::vector<std::int64_t> doubled_ranks;
  std::int64_t doubled_w_plus = 0;
  // Sum over tie groups of (t^3 - t).
  double tie_term = 0.0;
};

RankedSample Rank(std::span<const double> differences) {
  std::vector<double> nonzero;
  for (double d : differences) {
    if (d != 0.0) nonzero.push_back(d);
  }
  if (nonzero.empty()) {
    throw DegenerateInputError("wilcoxon: every difference is zero");
  }
  const std::size_t n = nonzero.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(nonzero[a]) < std::fabs(nonzero[b]);
  });
  RankedSample out;
  out.doubled_ranks.assign(n, 0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && std::fabs(nonzero[order[j + 1]]) == std::fabs(nonzero[order[i]])) ++j;
    // Ranks i+1..j+1 share (i+1 + j+1) / 2; doubled: i + j + 2.
    const auto doubled = static_cast<std::int64_t>(i + j + 2);
    for (std::size_t k = i; k <= j; ++k) out.doubled_ranks[order[k]] = doubled;
    const double t = static_cast<double>(j - i + 1);
    out.tie_term += t * t * t - t;
    i = j + 1;
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (nonzero[k] > 0.0) out.doubled_w_plus += out.doubled_ranks[k];
  }
  return out;
}

double Combine(double p_upper, double p_lower, Alternative alternative) {
  switch (alternative) {
    case Alternative::kGreater: return p_upper;
    case Alternative::kLess: return p_lower;
    case Alternative::kTwoSided: return std::min(1.0, 2.0 * std::min(p_upper, p_lower));
  }
  return 1.0;
}

double StandardNormalCdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

double WilcoxonExact(std::span<const double> differences, Alternative alternative) {
  const RankedSample s = Rank(differences);
  const std::int64_t max_sum =
      std::accumulate(s.doubled_ranks.begin(), s.doubled_ranks.end(), std::int64_t{0});
  // counts[v]: number of sign assignments with doubled W+ == v.
  std::vector<double> counts(static_cast<std::size_t>(max_sum) + 1, 0.0);
  counts[0] = 1.0;
  std::int64_t reach = 0;
  for (std::int64_t r : s.doubled_ranks) {
    for (std::int64_t v = reach; v >= 0; --v) {
      if (counts[v] != 0.0) counts[v + r] += counts[v];
    }
    reach += r;
  }
  const double total = std::ldexp(1.0, static_cast<int>(s.doubled_ranks.size()));
  double upper = 0.0;
  double lower = 0.0;
  for (std::int64_t v = 0; v <= max_sum; ++v) {
    if (v >= s.doubled_w_plus) upper += counts[v];
    if (v <= s.doubled_w_plus) lower += counts[v];
  }
  return Combine(upper / total, lower / total, alternative);
}

double WilcoxonNormal(std::span<const double> differences, Alternative alternative) {
  const RankedSample s = Rank(differences);
  const double n = static_cast<double>(s.doubled_ranks.size());
  const double w_plus = static_cast<double>(s.doubled_w_plus) / 2.0;
  const double mean = n * (n + 1.0) / 4.0;
  const double variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - s.tie_term / 48.0;
  if (variance <= 0.0) return 1.0;
  const double sd = std::sqrt(variance);
  const double p_upper = 1.0 - StandardNormalCdf((w_plus - mean - 0.5) / sd);
  const double p_lower = StandardNormalCdf((w_plus - mean + 0.5) / sd);
  return Combine(std::min(1.0, p_upper), std::min(1.0, p_lower), alternative);
}

double WilcoxonSignedRank(std::span<const double> differences, Alternative alternative) {
  std::size_t nonzero = 0;
  for (double d : differences) nonzero += d != 0.0;
  if (nonzero == 0) throw DegenerateInputError("wilcoxon: every difference is zero");
  return nonzero <= kWilcoxonExactMax ? WilcoxonExact(differences, alternative)
                                      : WilcoxonNormal(differences, alternative);
}

}  // namespace streamtree
