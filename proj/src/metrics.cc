#include "survlens/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "survlens/errors.h"
#include "survlens/estimators.h"
#include "survlens/numeric.h"

namespace survlens {

namespace {

void CheckRows(const SurvivalDataset& data, Eigen::Index rows) {
  if (static_cast<size_t>(rows) != data.size()) {
    throw InputError("predictions have " + std::to_string(rows) +
                     " rows, data has " + std::to_string(data.size()));
  }
}

double PairScore(double a, double b) {
  if (a > b) return 1.0;
  if (a == b) return 0.5;
  return 0.0;
}

}  // namespace

MetricCurve BrierScoreFromPredictions(const SurvivalDataset& data,
                                      const TimeGrid& grid,
                                      const Eigen::MatrixXd& survival) {
  CheckRows(data, survival.rows());
  if (static_cast<size_t>(survival.cols()) != grid.size()) {
    throw InputError("prediction columns do not match the grid");
  }
  const StepCurve censoring = CensoringKaplanMeier(data);
  const auto& times = data.times();
  const auto& events = data.events();

  MetricCurve curve;
  curve.metric_name = "brier_score";
  curve.grid = grid.points();
  for (size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    const double g_t = censoring(t);
    double sum = 0.0;
    size_t used = data.size();
    for (size_t i = 0; i < data.size(); ++i) {
      const double s = survival(static_cast<Eigen::Index>(i),
                                static_cast<Eigen::Index>(k));
      if (times[i] <= t && events[i] == 1) {
        const double g = censoring.LeftLimit(times[i]);
        if (g > 0.0) {
          sum += s * s / g;
        } else {
          --used;
        }
      } else if (times[i] > t) {
        if (g_t > 0.0) {
          sum += (1.0 - s) * (1.0 - s) / g_t;
        } else {
          --used;
        }
      }
    }
    curve.values.push_back(used > 0 ? std::optional<double>(
                                          sum / static_cast<double>(used))
                                    : std::nullopt);
  }
  curve.integrated = TrapezoidMean(curve.grid, curve.values);
  return curve;
}

MetricCurve BrierScore(const Explainer& explainer, const SurvivalDataset& data,
                       const TimeGrid& grid) {
  return BrierScoreFromPredictions(
      data, grid, explainer.Predict(data.features(), OutputType::kSurvival, grid));
}

MetricCurve BrierScore(const Explainer& explainer,
                       const SurvivalDataset& data) {
  return BrierScore(explainer, data, explainer.grid());
}

MetricCurve CumulativeDynamicAucFromRisk(const SurvivalDataset& data,
                                         const TimeGrid& grid,
                                         const Eigen::VectorXd& risk) {
  CheckRows(data, risk.size());
  const StepCurve censoring = CensoringKaplanMeier(data);
  const auto& times = data.times();
  const auto& events = data.events();
  const size_t n = data.size();

  std::vector<double> case_weight(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    if (events[i] != 1) continue;
    const double g = censoring.LeftLimit(times[i]);
    if (g > 0.0) case_weight[i] = 1.0 / (g * g);
  }

  MetricCurve curve;
  curve.metric_name = "cd_auc";
  curve.grid = grid.points();
  for (size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    double case_total = 0.0;
    double controls = 0.0;
    for (size_t i = 0; i < n; ++i) {
      if (times[i] <= t) case_total += case_weight[i];
      if (times[i] > t) controls += 1.0;
    }
    if (case_total == 0.0 || controls == 0.0) {
      curve.values.push_back(std::nullopt);
      continue;
    }
    double numerator = 0.0;
    for (size_t i = 0; i < n; ++i) {
      if (!(times[i] <= t) || case_weight[i] == 0.0) continue;
      double concordant = 0.0;
      for (size_t j = 0; j < n; ++j) {
        if (times[j] > t) {
          concordant += PairScore(risk(static_cast<Eigen::Index>(i)),
                                  risk(static_cast<Eigen::Index>(j)));
        }
      }
      numerator += case_weight[i] * concordant;
    }
    curve.values.push_back(numerator / (case_total * controls));
  }
  curve.integrated = TrapezoidMean(curve.grid, curve.values);
  return curve;
}

MetricCurve CumulativeDynamicAuc(const Explainer& explainer,
                                 const SurvivalDataset& data,
                                 const TimeGrid& grid) {
  return CumulativeDynamicAucFromRisk(data, grid,
                                      explainer.PredictRisk(data.features()));
}

MetricCurve CumulativeDynamicAuc(const Explainer& explainer,
                                 const SurvivalDataset& data) {
  return CumulativeDynamicAuc(explainer, data, explainer.grid());
}

double ConcordanceIndexFromRisk(const SurvivalDataset& data,
                                const Eigen::VectorXd& risk) {
  CheckRows(data, risk.size());
  const auto& times = data.times();
  const auto& events = data.events();
  double pairs = 0.0;
  double concordant = 0.0;
  for (size_t i = 0; i < data.size(); ++i) {
    if (events[i] != 1) continue;
    for (size_t j = 0; j < data.size(); ++j) {
      if (times[i] < times[j]) {
        pairs += 1.0;
        concordant += PairScore(risk(static_cast<Eigen::Index>(i)),
                                risk(static_cast<Eigen::Index>(j)));
      }
    }
  }
  if (pairs == 0.0) {
    throw NumericError("concordance index undefined: no comparable pairs");
  }
  return concordant / pairs;
}

double ConcordanceIndex(const Explainer& explainer,
                        const SurvivalDataset& data) {
  return ConcordanceIndexFromRisk(data, explainer.PredictRisk(data.features()));
}

RocCurve RocFromScores(const SurvivalDataset& data, double t,
                       const std::vector<double>& scores) {
  if (scores.size() != data.size()) {
    throw InputError("one score per row is required");
  }
  const auto& times = data.times();
  const auto& events = data.events();
  std::vector<double> positive_scores;
  std::vector<double> negative_scores;
  for (size_t i = 0; i < data.size(); ++i) {
    if (events[i] == 1 && times[i] <= t) {
      positive_scores.push_back(scores[i]);
    } else if (times[i] > t) {
      negative_scores.push_back(scores[i]);
    }
  }
  std::ostringstream when;
  when << t;
  if (positive_scores.empty()) {
    throw NumericError("ROC undefined at t=" + when.str() +
                       ": positive class (events by t) is empty");
  }
  if (negative_scores.empty()) {
    throw NumericError("ROC undefined at t=" + when.str() +
                       ": negative class (at risk after t) is empty");
  }
  std::sort(positive_scores.begin(), positive_scores.end());
  std::sort(negative_scores.begin(), negative_scores.end());
  std::vector<double> thresholds = positive_scores;
  thresholds.insert(thresholds.end(), negative_scores.begin(),
                    negative_scores.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  const auto fraction_at_least = [](const std::vector<double>& sorted,
                                    double threshold) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), threshold);
    return static_cast<double>(sorted.end() - it) /
           static_cast<double>(sorted.size());
  };
  RocCurve roc;
  roc.time = t;
  roc.positives = positive_scores.size();
  roc.negatives = negative_scores.size();
  for (double threshold : thresholds) {
    roc.points.push_back({fraction_at_least(negative_scores, threshold),
                          fraction_at_least(positive_scores, threshold),
                          threshold});
  }
  roc.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  return roc;
}

RocCurve RocAtTime(const Explainer& explainer, const SurvivalDataset& data,
                   double t) {
  const Eigen::MatrixXd survival =
      explainer.Predict(data.features(), OutputType::kSurvival);
  const auto& grid = explainer.grid().points();
  // Right-continuous step evaluation of each predicted curve at t.
  const auto upper = std::upper_bound(grid.begin(), grid.end(), t);
  const auto column = static_cast<Eigen::Index>(upper - grid.begin()) - 1;
  std::vector<double> scores(data.size());
  for (size_t i = 0; i < data.size(); ++i) {
    const double s =
        column < 0 ? 1.0 : survival(static_cast<Eigen::Index>(i), column);
    scores[i] = 1.0 - s;
  }
  return RocFromScores(data, t, scores);
}

double RocCurve::Auc() const {
  double area = 0.0;
  for (size_t k = points.size(); k-- > 1;) {
    const RocPoint& right = points[k - 1];
    const RocPoint& left = points[k];
    area += (right.fpr - left.fpr) * 0.5 * (right.tpr + left.tpr);
  }
  return area;
}

std::vector<std::string> LossNames() {
  return {"brier_integrated", "brier_curve", "cd_auc_integrated",
          "one_minus_cindex"};
}

Loss LossAdapter(std::string_view metric_name, LossDirection direction) {
  const bool complement = direction == LossDirection::kLargerIsWorse;
  const auto require = [](const std::optional<double>& value,
                          const char* what) {
    if (!value) throw NumericError(std::string(what) + " is undefined");
    return *value;
  };
  Loss loss;
  loss.name = std::string(metric_name);
  if (metric_name == "brier_integrated") {
    loss.eval = [require](const Explainer& e, const SurvivalDataset& d) {
      return MetricValues{
          require(BrierScore(e, d).integrated, "integrated Brier score")};
    };
  } else if (metric_name == "brier_curve") {
    loss.curve_valued = true;
    loss.eval = [](const Explainer& e, const SurvivalDataset& d) {
      return BrierScore(e, d).values;
    };
  } else if (metric_name == "cd_auc_integrated") {
    loss.eval = [require, complement](const Explainer& e,
                                      const SurvivalDataset& d) {
      const double auc =
          require(CumulativeDynamicAuc(e, d).integrated, "integrated AUC");
      return MetricValues{complement ? 1.0 - auc : auc};
    };
  } else if (metric_name == "one_minus_cindex") {
    loss.eval = [complement](const Explainer& e, const SurvivalDataset& d) {
      const double c = ConcordanceIndex(e, d);
      return MetricValues{complement ? 1.0 - c : c};
    };
  } else {
    std::string names;
    for (const auto& name : LossNames()) names += " " + name;
    throw InputError("unknown loss '" + std::string(metric_name) +
                     "' (valid:" + names + ")");
  }
  return loss;
}

}  // namespace survlens
