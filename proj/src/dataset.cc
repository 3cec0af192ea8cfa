#include "survlens/dataset.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "survlens/errors.h"

namespace survlens {

SurvivalDataset::SurvivalDataset(std::vector<double> times,
                                 std::vector<int> events,
                                 Eigen::MatrixXd features,
                                 std::vector<std::string> feature_names)
    : times_(std::move(times)),
      events_(std::move(events)),
      features_(std::move(features)),
      feature_names_(std::move(feature_names)) {
  const size_t n = times_.size();
  if (n == 0) throw InputError("dataset is empty");
  if (events_.size() != n) {
    throw InputError("times and events have different lengths");
  }
  if (static_cast<size_t>(features_.rows()) != n) {
    throw InputError("feature matrix has " + std::to_string(features_.rows()) +
                     " rows, expected " + std::to_string(n));
  }
  if (static_cast<size_t>(features_.cols()) != feature_names_.size()) {
    throw InputError("feature matrix has " + std::to_string(features_.cols()) +
                     " columns but " + std::to_string(feature_names_.size()) +
                     " names were given");
  }
  for (size_t i = 0; i < n; ++i) {
    if (!std::isfinite(times_[i]) || times_[i] < 0.0) {
      throw InputError("time at row " + std::to_string(i + 1) +
                       " must be finite and nonnegative");
    }
    if (events_[i] != 0 && events_[i] != 1) {
      throw InputError("event indicator at row " + std::to_string(i + 1) +
                       " must be 0 or 1");
    }
  }
  if (!features_.allFinite()) {
    throw InputError("feature matrix contains non-finite values");
  }
  std::set<std::string> seen;
  for (const auto& name : feature_names_) {
    if (name.empty()) throw InputError("feature names must be nonempty");
    if (!seen.insert(name).second) {
      throw InputError("duplicate feature name '" + name + "'");
    }
  }
}

SurvivalDataset SurvivalDataset::WithoutFeatures(std::vector<double> times,
                                                 std::vector<int> events) {
  const auto n = static_cast<Eigen::Index>(times.size());
  return SurvivalDataset(std::move(times), std::move(events),
                         Eigen::MatrixXd(n, 0), {});
}

size_t SurvivalDataset::num_events() const {
  return static_cast<size_t>(std::count(events_.begin(), events_.end(), 1));
}

std::optional<size_t> SurvivalDataset::FeatureIndex(
    const std::string& name) const {
  const auto it =
      std::find(feature_names_.begin(), feature_names_.end(), name);
  if (it == feature_names_.end()) return std::nullopt;
  return static_cast<size_t>(it - feature_names_.begin());
}

size_t SurvivalDataset::RequireFeature(const std::string& name) const {
  if (auto index = FeatureIndex(name)) return *index;
  std::ostringstream msg;
  msg << "unknown variable '" << name << "' (known:";
  for (const auto& known : feature_names_) msg << ' ' << known;
  msg << ')';
  throw InputError(msg.str());
}

SurvivalDataset SurvivalDataset::WithFeatures(Eigen::MatrixXd features) const {
  return SurvivalDataset(times_, events_, std::move(features), feature_names_);
}

SurvivalDataset SurvivalDataset::WithFlippedEvents() const {
  std::vector<int> flipped(events_.size());
  std::transform(events_.begin(), events_.end(), flipped.begin(),
                 [](int e) { return 1 - e; });
  return SurvivalDataset(times_, std::move(flipped), features_, feature_names_);
}

SurvivalDataset SurvivalDataset::Subset(std::span<const size_t> rows) const {
  std::vector<double> times;
  std::vector<int> events;
  Eigen::MatrixXd features(static_cast<Eigen::Index>(rows.size()),
                           features_.cols());
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= size()) throw InputError("row index out of range");
    times.push_back(times_[rows[r]]);
    events.push_back(events_[rows[r]]);
    features.row(static_cast<Eigen::Index>(r)) =
        features_.row(static_cast<Eigen::Index>(rows[r]));
  }
  return SurvivalDataset(std::move(times), std::move(events),
                         std::move(features), feature_names_);
}

TimeGrid::TimeGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw InputError("time grid needs at least two points");
  }
  for (size_t k = 0; k < points_.size(); ++k) {
    if (!std::isfinite(points_[k]) || points_[k] <= 0.0) {
      throw InputError("time grid points must be finite and positive");
    }
    if (k > 0 && !(points_[k] > points_[k - 1])) {
      throw InputError("time grid must be strictly increasing");
    }
  }
}

}  // namespace survlens
