#include "survlens/numeric.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "survlens/errors.h"

namespace survlens {

std::optional<double> TrapezoidMean(std::span<const double> x,
                                    std::span<const double> y) {
  if (x.size() != y.size()) {
    throw InputError("trapezoid: x and y lengths differ");
  }
  if (x.size() < 2) return std::nullopt;
  const double width = x.back() - x.front();
  if (!(width > 0.0)) return std::nullopt;
  double area = 0.0;
  for (size_t k = 1; k < x.size(); ++k) {
    area += 0.5 * (x[k] - x[k - 1]) * (y[k] + y[k - 1]);
  }
  return area / width;
}

std::optional<double> TrapezoidMean(std::span<const double> x,
                                    std::span<const std::optional<double>> y) {
  if (x.size() != y.size()) {
    throw InputError("trapezoid: x and y lengths differ");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (size_t k = 0; k < x.size(); ++k) {
    if (y[k].has_value()) {
      xs.push_back(x[k]);
      ys.push_back(*y[k]);
    }
  }
  return TrapezoidMean(xs, ys);
}

std::vector<double> Quantiles(std::vector<double> values,
                              std::span<const double> probabilities) {
  if (values.empty()) throw InputError("quantiles of an empty sample");
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  std::vector<double> out;
  out.reserve(probabilities.size());
  for (double p : probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InputError("quantile probability outside [0, 1]");
    }
    const double h = static_cast<double>(n - 1) * p;
    const size_t lo = static_cast<size_t>(std::floor(h));
    const size_t hi = std::min(lo + 1, n - 1);
    const double frac = h - static_cast<double>(lo);
    out.push_back(frac == 0.0 ? values[lo]
                              : values[lo] + frac * (values[hi] - values[lo]));
  }
  return out;
}

std::vector<double> QuantileGrid(std::span<const double> values, size_t count) {
  if (count == 0) throw InputError("grid size must be at least 1");
  std::vector<double> probs;
  if (count == 1) {
    probs.push_back(0.5);
  } else {
    for (size_t k = 0; k < count; ++k) {
      probs.push_back(static_cast<double>(k) / static_cast<double>(count - 1));
    }
  }
  std::vector<double> grid =
      Quantiles(std::vector<double>(values.begin(), values.end()), probs);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

void ParallelFor(size_t n, size_t num_threads,
                 const std::function<void(size_t)>& fn) {
  if (n == 0) return;
  const size_t workers = std::clamp<size_t>(num_threads, 1, n);
  if (workers == 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<size_t> next{0};
  auto work = [&]() {
    for (size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  for (size_t w = 1; w < workers; ++w) threads.emplace_back(work);
  work();
  for (auto& t : threads) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace survlens
