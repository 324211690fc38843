#pragma once

#include <span>
#include <stdexcept>

namespace streamtree {

enum class Alternative { kTwoSided, kGreater, kLess };

class DegenerateInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Largest sample size (after dropping zeros) handled by exact enumeration.
inline constexpr std::size_t kWilcoxonExactMax = 25;

// Wilcoxon signed-rank p-value for paired differences. Zeros are dropped,
// tied |d| get average ranks. n <= 25 uses the exact null distribution of
// W+ over all 2^n sign assignments; larger n the normal approximation with
// tie and continuity corrections. kGreater tests median(d) > 0.
// Throws DegenerateInputError if every difference is zero.
double WilcoxonSignedRank(std::span<const double> differences,
                          Alternative alternative);

double WilcoxonExact(std::span<const double> differences,
                     Alternative alternative);
double WilcoxonNormal(std::span<const double> differences,
                      Alternative alternative);

}  // namespace streamtree
