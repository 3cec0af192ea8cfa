#ifndef SURVLENS_EXPLAINER_H_
#define SURVLENS_EXPLAINER_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "survlens/dataset.h"
#include "survlens/models.h"

namespace survlens {

enum class OutputType { kSurvival, kChf, kRisk };

std::string_view OutputTypeName(OutputType type);
// Parses "survival", "chf" or "risk"; throws InputError otherwise.
OutputType ParseOutputType(std::string_view name);

// Survival probabilities of one feature row at every grid point. Must be safe
// to call concurrently from several threads.
using SurvivalFunction =
    std::function<std::vector<double>(std::span<const double>, const TimeGrid&)>;
// Optional native risk score of one feature row (larger = higher risk).
using RiskFunction = std::function<double(std::span<const double>)>;

// Maximum number of points of a derived default grid.
inline constexpr size_t kMaxDefaultGridSize = 51;

// Unique event times of `data`, or their kMaxDefaultGridSize evenly spaced
// empirical quantiles when there are more. Throws InputError when fewer than
// two distinct positive event times exist.
TimeGrid DefaultTimeGrid(const SurvivalDataset& data);

// Wraps a survival model behind one prediction interface and keeps the
// background data used by every explanation. Immutable once built.
//
// Construction probes the model on background row 0 and rejects it when the
// returned curve has the wrong length, leaves [0, 1] or increases.
class Explainer {
 public:
  Explainer(SurvivalFunction predict, SurvivalDataset background,
            std::optional<TimeGrid> grid = std::nullopt,
            std::string label = "model", RiskFunction risk = nullptr);

  const SurvivalDataset& background() const { return background_; }
  const TimeGrid& grid() const { return grid_; }
  const std::string& label() const { return label_; }
  size_t num_features() const { return background_.num_features(); }
  bool has_native_risk() const { return static_cast<bool>(risk_); }

  // Survival curve of one row on `times` (defaults to the explainer grid).
  std::vector<double> PredictSurvival(
      std::span<const double> x,
      const std::optional<TimeGrid>& times = std::nullopt) const;

  // One row per row of X. Survival and chf outputs have one column per time
  // point; risk has a single column. chf = -ln(clamp(S, 1e-18, 1)); risk is
  // the native risk function when present, otherwise the sum of the chf over
  // the time points.
  Eigen::MatrixXd Predict(
      const Eigen::MatrixXd& X, OutputType output_type,
      const std::optional<TimeGrid>& times = std::nullopt) const;

  // Single-row form of Predict.
  std::vector<double> PredictRow(
      std::span<const double> x, OutputType output_type,
      const std::optional<TimeGrid>& times = std::nullopt) const;

  Eigen::VectorXd PredictRisk(const Eigen::MatrixXd& X) const;

 private:
  void CheckDimension(size_t cols) const;
  std::vector<double> SurvivalOn(std::span<const double> x,
                                 const TimeGrid& grid) const;
  std::vector<double> RowOn(std::span<const double> x, OutputType output_type,
                            const TimeGrid& grid) const;

  SurvivalFunction predict_;
  RiskFunction risk_;
  SurvivalDataset background_;
  TimeGrid grid_;
  std::string label_;
};

// Converts survival values to cumulative hazard, in place.
void SurvivalToChf(std::span<double> values);

// Explainers over the built-in models. The Cox explainer reports the linear
// predictor beta'(x - means) as its native risk.
Explainer Explain(const CoxModel& model, SurvivalDataset background,
                  std::optional<TimeGrid> grid = std::nullopt,
                  std::string label = "cox");
Explainer Explain(const WeibullAftModel& model, SurvivalDataset background,
                  std::optional<TimeGrid> grid = std::nullopt,
                  std::string label = "weibull_aft");
Explainer Explain(const KaplanMeierModel& model, SurvivalDataset background,
                  std::optional<TimeGrid> grid = std::nullopt,
                  std::string label = "km");
// A user-specified model given by its survival function.
Explainer Explain(SurvivalFunction predict, SurvivalDataset background,
                  std::optional<TimeGrid> grid = std::nullopt,
                  std::string label = "custom", RiskFunction risk = nullptr);

}  // namespace survlens

#endif  // SURVLENS_EXPLAINER_H_
