#include "survlens/explainer.h"

#include <algorithm>
#include <cmath>

#include "survlens/errors.h"
#include "survlens/numeric.h"
#include "survlens/step_curve.h"

namespace survlens {

std::string_view OutputTypeName(OutputType type) {
  switch (type) {
    case OutputType::kSurvival:
      return "survival";
    case OutputType::kChf:
      return "chf";
    case OutputType::kRisk:
      return "risk";
  }
  return "survival";
}

OutputType ParseOutputType(std::string_view name) {
  if (name == "survival") return OutputType::kSurvival;
  if (name == "chf") return OutputType::kChf;
  if (name == "risk") return OutputType::kRisk;
  throw InputError("unknown output type '" + std::string(name) +
                   "' (expected survival, chf or risk)");
}

TimeGrid DefaultTimeGrid(const SurvivalDataset& data) {
  std::vector<double> event_times;
  for (size_t i = 0; i < data.size(); ++i) {
    if (data.events()[i] == 1 && data.times()[i] > 0.0) {
      event_times.push_back(data.times()[i]);
    }
  }
  std::vector<double> unique = event_times;
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  if (unique.size() < 2) {
    throw InputError(
        "cannot derive a time grid: need at least two distinct positive event "
        "times (pass an explicit grid)");
  }
  if (unique.size() <= kMaxDefaultGridSize) return TimeGrid(std::move(unique));
  return TimeGrid(QuantileGrid(event_times, kMaxDefaultGridSize));
}

void SurvivalToChf(std::span<double> values) {
  for (double& v : values) v = -std::log(std::clamp(v, kMinSurvival, 1.0));
}

Explainer::Explainer(SurvivalFunction predict, SurvivalDataset background,
                     std::optional<TimeGrid> grid, std::string label,
                     RiskFunction risk)
    : predict_(std::move(predict)),
      risk_(std::move(risk)),
      background_(std::move(background)),
      grid_(grid ? std::move(*grid) : DefaultTimeGrid(background_)),
      label_(std::move(label)) {
  if (!predict_) throw InputError("explainer needs a prediction function");
  if (background_.size() < 2) {
    throw InputError("explainer background needs at least two rows");
  }
  if (background_.num_events() == 0) {
    throw InputError("explainer background needs at least one event");
  }
  const Eigen::RowVectorXd probe = background_.features().row(0);
  std::vector<double> curve =
      predict_(std::span<const double>(probe.data(), probe.size()), grid_);
  if (curve.size() != grid_.size()) {
    throw InputError("explainer probe: prediction has " +
                     std::to_string(curve.size()) + " values, grid has " +
                     std::to_string(grid_.size()));
  }
  try {
    StepCurve(grid_.points(), std::move(curve), CurveKind::kSurvival);
  } catch (const InputError& e) {
    throw InputError(std::string("explainer probe: ") + e.what());
  }
}

void Explainer::CheckDimension(size_t cols) const {
  if (cols != num_features()) {
    throw InputError("expected " + std::to_string(num_features()) +
                     " features, got " + std::to_string(cols));
  }
}

std::vector<double> Explainer::PredictSurvival(
    std::span<const double> x, const std::optional<TimeGrid>& times) const {
  return SurvivalOn(x, times ? *times : grid_);
}

std::vector<double> Explainer::SurvivalOn(std::span<const double> x,
                                          const TimeGrid& grid) const {
  CheckDimension(x.size());
  std::vector<double> s = predict_(x, grid);
  if (s.size() != grid.size()) {
    throw InputError("prediction has " + std::to_string(s.size()) +
                     " values, grid has " + std::to_string(grid.size()));
  }
  return s;
}

std::vector<double> Explainer::PredictRow(
    std::span<const double> x, OutputType output_type,
    const std::optional<TimeGrid>& times) const {
  return RowOn(x, output_type, times ? *times : grid_);
}

std::vector<double> Explainer::RowOn(std::span<const double> x,
                                     OutputType output_type,
                                     const TimeGrid& grid) const {
  if (output_type == OutputType::kRisk && risk_) {
    CheckDimension(x.size());
    return {risk_(x)};
  }
  std::vector<double> s = SurvivalOn(x, grid);
  if (output_type == OutputType::kSurvival) return s;
  SurvivalToChf(s);
  if (output_type == OutputType::kChf) return s;
  double total = 0.0;
  for (double h : s) total += h;
  return {total};
}

Eigen::MatrixXd Explainer::Predict(const Eigen::MatrixXd& X,
                                   OutputType output_type,
                                   const std::optional<TimeGrid>& times) const {
  CheckDimension(static_cast<size_t>(X.cols()));
  if (!X.allFinite()) throw InputError("feature matrix is not finite");
  const TimeGrid& grid = times ? *times : grid_;
  const Eigen::Index cols = output_type == OutputType::kRisk
                                ? 1
                                : static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd out(X.rows(), cols);
  Eigen::RowVectorXd row(X.cols());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    row = X.row(i);
    const std::vector<double> values =
        RowOn(std::span<const double>(row.data(), row.size()), output_type,
              grid);
    for (Eigen::Index k = 0; k < cols; ++k) {
      out(i, k) = values[static_cast<size_t>(k)];
    }
  }
  return out;
}

Eigen::VectorXd Explainer::PredictRisk(const Eigen::MatrixXd& X) const {
  return Predict(X, OutputType::kRisk).col(0);
}

Explainer Explain(const CoxModel& model, SurvivalDataset background,
                  std::optional<TimeGrid> grid, std::string label) {
  return Explainer(
      [model](std::span<const double> x, const TimeGrid& g) {
        return model.PredictSurvival(x, g).values();
      },
      std::move(background), std::move(grid), std::move(label),
      [model](std::span<const double> x) { return model.LinearPredictor(x); });
}

Explainer Explain(const WeibullAftModel& model, SurvivalDataset background,
                  std::optional<TimeGrid> grid, std::string label) {
  return Explainer(
      [model](std::span<const double> x, const TimeGrid& g) {
        return model.PredictSurvival(x, g).values();
      },
      std::move(background), std::move(grid), std::move(label));
}

Explainer Explain(const KaplanMeierModel& model, SurvivalDataset background,
                  std::optional<TimeGrid> grid, std::string label) {
  return Explainer(
      [model](std::span<const double> x, const TimeGrid& g) {
        return model.PredictSurvival(x, g).values();
      },
      std::move(background), std::move(grid), std::move(label));
}

Explainer Explain(SurvivalFunction predict, SurvivalDataset background,
                  std::optional<TimeGrid> grid, std::string label,
                  RiskFunction risk) {
  return Explainer(std::move(predict), std::move(background), std::move(grid),
                   std::move(label), std::move(risk));
}

}  // namespace survlens
