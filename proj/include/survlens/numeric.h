#ifndef SURVLENS_NUMERIC_H_
#define SURVLENS_NUMERIC_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace survlens {

// Lower bound applied to survival probabilities before any logarithm.
inline constexpr double kMinSurvival = 1e-18;

// Trapezoid integral of y over x divided by (x.back() - x.front()).
// x must be nondecreasing; zero-width panels contribute nothing. Returns
// nullopt when fewer than two points are given or the span is zero.
std::optional<double> TrapezoidMean(std::span<const double> x,
                                    std::span<const double> y);

// Same as above, skipping undefined values. Panels are formed between
// consecutive defined points and the span runs from the first to the last
// defined point.
std::optional<double> TrapezoidMean(std::span<const double> x,
                                    std::span<const std::optional<double>> y);

// Sample quantile (linear interpolation between order statistics, the
// "type 7" definition) of the values at each probability in [0, 1].
std::vector<double> Quantiles(std::vector<double> values,
                              std::span<const double> probabilities);

// `count` evenly spaced quantiles of `values` (probabilities k/(count-1)),
// sorted and deduplicated. count == 1 yields the median.
std::vector<double> QuantileGrid(std::span<const double> values, size_t count);

// Runs fn(i) for i in [0, n) on up to `num_threads` threads. Each index is
// processed exactly once; callers write results into per-index slots so the
// outcome does not depend on the schedule. Exceptions are rethrown on the
// calling thread (the one with the lowest index wins).
void ParallelFor(size_t n, size_t num_threads,
                 const std::function<void(size_t)>& fn);

}  // namespace survlens

#endif  // SURVLENS_NUMERIC_H_
