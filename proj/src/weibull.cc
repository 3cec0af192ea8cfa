#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "newton.h"
#include "survlens/errors.h"
#include "survlens/models.h"

namespace survlens {

// theta = (log shape, intercept, b). With k = shape, mu_i = intercept + b'x_i
// and z_i = k (log t_i - mu_i):
//   log L = sum_i d_i (log k - log t_i + z_i) - exp(z_i).
LikelihoodDerivatives WeibullLogLikelihood(const Eigen::MatrixXd& features,
                                           std::span<const double> times,
                                           std::span<const int> events,
                                           const Eigen::VectorXd& theta) {
  const Eigen::Index n = features.rows();
  const Eigen::Index p = features.cols();
  const Eigen::Index dim = p + 2;
  const double log_k = theta(0);
  const double k = std::exp(log_k);

  LikelihoodDerivatives out;
  out.gradient = Eigen::VectorXd::Zero(dim);
  out.hessian = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd design(p + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto idx = static_cast<size_t>(i);
    design(0) = 1.0;
    design.tail(p) = features.row(i).transpose();
    const double mu = theta.tail(p + 1).dot(design);
    const double log_t = std::log(times[idx]);
    const double z = k * (log_t - mu);
    const double ez = std::exp(z);
    const double d = events[idx] == 1 ? 1.0 : 0.0;

    out.value += d * (log_k - log_t + z) - ez;

    out.gradient(0) += d * (1.0 + z) - ez * z;
    out.gradient.tail(p + 1) += k * (ez - d) * design;

    out.hessian(0, 0) += d * z - ez * z * (z + 1.0);
    const Eigen::VectorXd cross = (k * (ez - d) + k * ez * z) * design;
    out.hessian.block(1, 0, p + 1, 1) += cross;
    out.hessian.block(0, 1, 1, p + 1) += cross.transpose();
    out.hessian.block(1, 1, p + 1, p + 1) -=
        k * k * ez * design * design.transpose();
  }
  return out;
}

WeibullAftModel FitWeibullAft(const SurvivalDataset& data,
                              const FitOptions& options) {
  for (size_t i = 0; i < data.size(); ++i) {
    if (!(data.times()[i] > 0.0)) {
      throw InputError("Weibull fit needs positive times (row " +
                       std::to_string(i + 1) + " has time 0)");
    }
  }
  if (data.size() < 2) throw FitError("Weibull fit needs at least two rows");
  if (data.num_events() == 0) {
    throw FitError("Weibull fit needs at least one event");
  }

  const Eigen::Index p = data.features().cols();
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p + 2);
  const double total_time =
      std::accumulate(data.times().begin(), data.times().end(), 0.0);
  theta(1) = std::log(total_time / static_cast<double>(data.num_events()));

  const auto objective = [&](const Eigen::VectorXd& t) {
    return WeibullLogLikelihood(data.features(), data.times(), data.events(), t);
  };
  WeibullAftModel model;
  model.summary = internal::NewtonMaximize(objective, theta, options, 2);
  model.shape = std::exp(theta(0));
  model.intercept = theta(1);
  model.coefficients = theta.tail(p);
  return model;
}

double WeibullAftModel::Scale(std::span<const double> x) const {
  if (x.size() != num_features()) {
    throw InputError("expected " + std::to_string(num_features()) +
                     " features, got " + std::to_string(x.size()));
  }
  double mu = intercept;
  for (size_t j = 0; j < x.size(); ++j) {
    mu += coefficients(static_cast<Eigen::Index>(j)) * x[j];
  }
  return std::exp(mu);
}

StepCurve WeibullAftModel::PredictSurvival(std::span<const double> x,
                                           const TimeGrid& grid) const {
  const double scale = Scale(x);
  std::vector<double> s;
  s.reserve(grid.size());
  for (double t : grid.points()) {
    s.push_back(std::clamp(std::exp(-std::pow(t / scale, shape)), 0.0, 1.0));
  }
  return StepCurve(grid.points(), std::move(s), CurveKind::kSurvival);
}

}  // namespace survlens
