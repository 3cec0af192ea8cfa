#include "survlens/estimators.h"

#include <algorithm>
#include <numeric>
#include <vector>

#include "survlens/errors.h"
#include "survlens/models.h"

namespace survlens {

namespace {

// Distinct event times with their event count d_k and risk-set size r_k.
struct EventTable {
  std::vector<double> times;
  std::vector<double> deaths;
  std::vector<double> at_risk;
};

EventTable BuildEventTable(std::span<const double> times,
                           std::span<const int> events) {
  if (times.empty()) throw InputError("estimator input is empty");
  if (times.size() != events.size()) {
    throw InputError("times and events have different lengths");
  }
  std::vector<size_t> order(times.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return times[a] < times[b]; });

  EventTable table;
  size_t remaining = times.size();
  size_t i = 0;
  while (i < order.size()) {
    const double t = times[order[i]];
    size_t deaths = 0;
    size_t tied = 0;
    while (i + tied < order.size() && times[order[i + tied]] == t) {
      deaths += events[order[i + tied]] == 1 ? 1 : 0;
      ++tied;
    }
    if (deaths > 0) {
      table.times.push_back(t);
      table.deaths.push_back(static_cast<double>(deaths));
      table.at_risk.push_back(static_cast<double>(remaining));
    }
    remaining -= tied;
    i += tied;
  }
  return table;
}

}  // namespace

StepCurve KaplanMeier(std::span<const double> times,
                      std::span<const int> events) {
  const EventTable table = BuildEventTable(times, events);
  std::vector<double> values;
  values.reserve(table.times.size());
  double survival = 1.0;
  for (size_t k = 0; k < table.times.size(); ++k) {
    survival *= 1.0 - table.deaths[k] / table.at_risk[k];
    values.push_back(survival);
  }
  return StepCurve(table.times, std::move(values), CurveKind::kSurvival);
}

StepCurve KaplanMeier(const SurvivalDataset& data) {
  return KaplanMeier(data.times(), data.events());
}

StepCurve NelsonAalen(std::span<const double> times,
                      std::span<const int> events) {
  const EventTable table = BuildEventTable(times, events);
  std::vector<double> values;
  values.reserve(table.times.size());
  double hazard = 0.0;
  for (size_t k = 0; k < table.times.size(); ++k) {
    hazard += table.deaths[k] / table.at_risk[k];
    values.push_back(hazard);
  }
  return StepCurve(table.times, std::move(values), CurveKind::kChf);
}

StepCurve NelsonAalen(const SurvivalDataset& data) {
  return NelsonAalen(data.times(), data.events());
}

StepCurve CensoringKaplanMeier(std::span<const double> times,
                               std::span<const int> events) {
  std::vector<int> flipped(events.size());
  std::transform(events.begin(), events.end(), flipped.begin(),
                 [](int e) { return 1 - e; });
  return KaplanMeier(times, flipped);
}

StepCurve CensoringKaplanMeier(const SurvivalDataset& data) {
  return CensoringKaplanMeier(data.times(), data.events());
}

KaplanMeierModel FitKaplanMeier(const SurvivalDataset& data) {
  return KaplanMeierModel{KaplanMeier(data), data.num_features()};
}

StepCurve KaplanMeierModel::PredictSurvival(std::span<const double> x,
                                            const TimeGrid& grid) const {
  if (x.size() != feature_count) {
    throw InputError("expected " + std::to_string(feature_count) +
                     " features, got " + std::to_string(x.size()));
  }
  return StepCurve(grid.points(), curve.Evaluate(grid.points()),
                   CurveKind::kSurvival);
}

}  // namespace survlens
