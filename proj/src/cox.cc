#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "newton.h"
#include "survlens/errors.h"
#include "survlens/models.h"

namespace survlens {

LikelihoodDerivatives CoxPartialLikelihood(const Eigen::MatrixXd& centered,
                                           std::span<const double> times,
                                           std::span<const int> events,
                                           const Eigen::VectorXd& beta) {
  const Eigen::Index n = centered.rows();
  const Eigen::Index p = centered.cols();
  const Eigen::VectorXd eta = centered * beta;
  // exp(eta - shift) keeps the risk-set sums in range.
  const double shift = n > 0 ? eta.maxCoeff() : 0.0;

  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return times[static_cast<size_t>(a)] > times[static_cast<size_t>(b)];
  });

  LikelihoodDerivatives out;
  out.gradient = Eigen::VectorXd::Zero(p);
  out.hessian = Eigen::MatrixXd::Zero(p, p);
  double s0 = 0.0;
  Eigen::VectorXd s1 = Eigen::VectorXd::Zero(p);
  Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(p, p);

  size_t i = 0;
  while (i < order.size()) {
    const double t = times[static_cast<size_t>(order[i])];
    size_t group_end = i;
    while (group_end < order.size() &&
           times[static_cast<size_t>(order[group_end])] == t) {
      const Eigen::Index r = order[group_end];
      const double w = std::exp(eta(r) - shift);
      s0 += w;
      s1 += w * centered.row(r).transpose();
      s2 += w * centered.row(r).transpose() * centered.row(r);
      ++group_end;
    }
    double deaths = 0.0;
    for (size_t g = i; g < group_end; ++g) {
      const Eigen::Index r = order[g];
      if (events[static_cast<size_t>(r)] == 1) {
        deaths += 1.0;
        out.value += eta(r);
        out.gradient += centered.row(r).transpose();
      }
    }
    if (deaths > 0.0) {
      const Eigen::VectorXd mean = s1 / s0;
      out.value -= deaths * (std::log(s0) + shift);
      out.gradient -= deaths * mean;
      out.hessian -= deaths * (s2 / s0 - mean * mean.transpose());
    }
    i = group_end;
  }
  return out;
}

namespace {

StepCurve BreslowBaseline(const Eigen::MatrixXd& centered,
                          std::span<const double> times,
                          std::span<const int> events,
                          const Eigen::VectorXd& beta) {
  const Eigen::VectorXd risk = (centered * beta).array().exp();
  std::vector<size_t> order(times.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return times[a] < times[b]; });

  // Risk-set sums from the latest time backwards.
  std::vector<double> tail_sum(order.size() + 1, 0.0);
  for (size_t k = order.size(); k-- > 0;) {
    tail_sum[k] = tail_sum[k + 1] + risk(static_cast<Eigen::Index>(order[k]));
  }
  std::vector<double> knots;
  std::vector<double> values;
  double hazard = 0.0;
  size_t i = 0;
  while (i < order.size()) {
    const double t = times[order[i]];
    size_t end = i;
    double deaths = 0.0;
    while (end < order.size() && times[order[end]] == t) {
      deaths += events[order[end]] == 1 ? 1.0 : 0.0;
      ++end;
    }
    if (deaths > 0.0) {
      hazard += deaths / tail_sum[i];
      knots.push_back(t);
      values.push_back(hazard);
    }
    i = end;
  }
  return StepCurve(std::move(knots), std::move(values), CurveKind::kChf);
}

void CheckRow(std::span<const double> x, size_t p) {
  if (x.size() != p) {
    throw InputError("expected " + std::to_string(p) + " features, got " +
                     std::to_string(x.size()));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw InputError("feature row is not finite");
  }
}

}  // namespace

CoxModel FitCox(const SurvivalDataset& data, const FitOptions& options) {
  if (data.size() < 2) throw FitError("Cox fit needs at least two rows");
  if (data.num_events() == 0) throw FitError("Cox fit needs at least one event");

  const Eigen::VectorXd means = data.features().colwise().mean().transpose();
  const Eigen::MatrixXd centered =
      data.features().rowwise() - means.transpose();
  const auto objective = [&](const Eigen::VectorXd& beta) {
    return CoxPartialLikelihood(centered, data.times(), data.events(), beta);
  };

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(centered.cols());
  CoxModel model;
  model.summary = internal::NewtonMaximize(objective, beta, options, 0);
  model.beta = beta;
  model.feature_means = means;
  model.baseline_chf =
      BreslowBaseline(centered, data.times(), data.events(), beta);
  return model;
}

double CoxModel::LinearPredictor(std::span<const double> x) const {
  CheckRow(x, num_features());
  double lp = 0.0;
  for (size_t j = 0; j < x.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    lp += beta(jj) * (x[j] - feature_means(jj));
  }
  return lp;
}

std::vector<double> CoxModel::PredictChf(std::span<const double> x,
                                         const TimeGrid& grid) const {
  const double relative = std::exp(LinearPredictor(x));
  std::vector<double> chf = baseline_chf.Evaluate(grid.points());
  for (double& h : chf) h = h == 0.0 ? 0.0 : h * relative;
  return chf;
}

StepCurve CoxModel::PredictSurvival(std::span<const double> x,
                                    const TimeGrid& grid) const {
  std::vector<double> s = PredictChf(x, grid);
  for (double& v : s) v = std::clamp(std::exp(-v), 0.0, 1.0);
  return StepCurve(grid.points(), std::move(s), CurveKind::kSurvival);
}

}  // namespace survlens
