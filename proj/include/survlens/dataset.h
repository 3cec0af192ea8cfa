#ifndef SURVLENS_DATASET_H_
#define SURVLENS_DATASET_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace survlens {

// Right-censored observations. times[i] is the observed time, events[i] is 1
// when the event was observed and 0 when the observation was censored.
// Features are numeric; row i of `features` belongs to observation i.
class SurvivalDataset {
 public:
  // Validates all invariants; throws InputError on violation.
  SurvivalDataset(std::vector<double> times, std::vector<int> events,
                  Eigen::MatrixXd features,
                  std::vector<std::string> feature_names);

  // Dataset without features (p = 0).
  static SurvivalDataset WithoutFeatures(std::vector<double> times,
                                         std::vector<int> events);

  size_t size() const { return times_.size(); }
  size_t num_features() const { return feature_names_.size(); }

  const std::vector<double>& times() const { return times_; }
  const std::vector<int>& events() const { return events_; }
  const Eigen::MatrixXd& features() const { return features_; }
  const std::vector<std::string>& feature_names() const {
    return feature_names_;
  }

  size_t num_events() const;

  // Index of a feature by name, or nullopt.
  std::optional<size_t> FeatureIndex(const std::string& name) const;
  // Same, throwing InputError listing the known names.
  size_t RequireFeature(const std::string& name) const;

  // Copy with a different feature matrix (same shape and names).
  SurvivalDataset WithFeatures(Eigen::MatrixXd features) const;
  // Copy with event indicators flipped (censorings become events).
  SurvivalDataset WithFlippedEvents() const;
  // Copy restricted to the given rows, in order.
  SurvivalDataset Subset(std::span<const size_t> rows) const;

 private:
  std::vector<double> times_;
  std::vector<int> events_;
  Eigen::MatrixXd features_;
  std::vector<std::string> feature_names_;
};

// Strictly increasing, positive evaluation abscissae (at least two points).
class TimeGrid {
 public:
  // Throws InputError when the invariants do not hold.
  explicit TimeGrid(std::vector<double> points);

  size_t size() const { return points_.size(); }
  const std::vector<double>& points() const { return points_; }
  double operator[](size_t k) const { return points_[k]; }
  double front() const { return points_.front(); }
  double back() const { return points_.back(); }
  double span() const { return points_.back() - points_.front(); }

  bool operator==(const TimeGrid& other) const = default;

 private:
  std::vector<double> points_;
};

}  // namespace survlens

#endif  // SURVLENS_DATASET_H_
