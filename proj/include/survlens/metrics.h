#ifndef SURVLENS_METRICS_H_
#define SURVLENS_METRICS_H_

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "survlens/dataset.h"
#include "survlens/explainer.h"

namespace survlens {

// Possibly-undefined metric values. nullopt marks a point where the metric
// has no defined value (e.g. no comparable pairs).
using MetricValues = std::vector<std::optional<double>>;

struct MetricCurve {
  std::string metric_name;
  std::vector<double> grid;
  MetricValues values;
  // Trapezoid integral over the defined points divided by their span.
  std::optional<double> integrated;
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  // Rows with score >= threshold are called positive. The (0, 0) endpoint
  // carries +infinity.
  double threshold = 0.0;
};

struct RocCurve {
  double time = 0.0;
  size_t positives = 0;
  size_t negatives = 0;
  // Sorted by increasing threshold, so fpr and tpr are nonincreasing.
  std::vector<RocPoint> points;

  double Auc() const;
};

// IPCW Brier score:
//   BS(t) = 1/n sum_i [ S(t|x_i)^2 1(t_i <= t, d_i = 1) / G(t_i-)
//                      + (1 - S(t|x_i))^2 1(t_i > t) / G(t) ]
// with G the censoring Kaplan-Meier curve of `data`. Terms whose weight is
// infinite (G = 0) are dropped and n reduced accordingly.
MetricCurve BrierScore(const Explainer& explainer, const SurvivalDataset& data,
                       const TimeGrid& grid);
MetricCurve BrierScore(const Explainer& explainer, const SurvivalDataset& data);

// Cumulative/dynamic AUC. Cases are events by t weighted by 1/G(t_i-)^2,
// controls are subjects with t_j > t. Risk comes from the explainer's risk
// output and ties count one half.
MetricCurve CumulativeDynamicAuc(const Explainer& explainer,
                                 const SurvivalDataset& data,
                                 const TimeGrid& grid);
MetricCurve CumulativeDynamicAuc(const Explainer& explainer,
                                 const SurvivalDataset& data);

// Harrell's C. Throws NumericError when no pair is comparable.
double ConcordanceIndex(const Explainer& explainer, const SurvivalDataset& data);

// ROC curve at time t using 1 - S(t|x) as the score. Rows censored strictly
// before t are excluded. Throws NumericError if a class is empty.
RocCurve RocAtTime(const Explainer& explainer, const SurvivalDataset& data,
                   double t);

// Same computations on precomputed inputs, shared by the explainer forms.
// `survival` is n x T on `grid`, `risk` has n entries.
MetricCurve BrierScoreFromPredictions(const SurvivalDataset& data,
                                      const TimeGrid& grid,
                                      const Eigen::MatrixXd& survival);
MetricCurve CumulativeDynamicAucFromRisk(const SurvivalDataset& data,
                                         const TimeGrid& grid,
                                         const Eigen::VectorXd& risk);
double ConcordanceIndexFromRisk(const SurvivalDataset& data,
                                const Eigen::VectorXd& risk);
RocCurve RocFromScores(const SurvivalDataset& data, double t,
                       const std::vector<double>& scores);

// Loss used by permutation importance. Larger is always worse.
enum class LossDirection {
  // AUC and C-index are complemented (1 - value).
  kLargerIsWorse,
  // Values as the metric defines them.
  kNative,
};

struct Loss {
  std::string name;
  bool curve_valued = false;
  // Evaluated on the explainer's grid. Scalar losses return one value.
  std::function<MetricValues(const Explainer&, const SurvivalDataset&)> eval;
};

// One of: brier_integrated, brier_curve, cd_auc_integrated, one_minus_cindex.
// Throws InputError for any other name.
Loss LossAdapter(std::string_view metric_name,
                 LossDirection direction = LossDirection::kLargerIsWorse);

std::vector<std::string> LossNames();

}  // namespace survlens

#endif  // SURVLENS_METRICS_H_
