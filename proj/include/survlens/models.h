#ifndef SURVLENS_MODELS_H_
#define SURVLENS_MODELS_H_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "survlens/dataset.h"
#include "survlens/step_curve.h"

namespace survlens {

struct FitOptions {
  int max_iter = 50;
  double tol = 1e-9;
};

// Diagnostics of a Newton fit.
struct FitSummary {
  bool converged = false;
  // Set when a coefficient exceeded the divergence bound (|b| > 20), which
  // usually means a covariate separates the data.
  bool diverged = false;
  int iterations = 0;
  double log_likelihood = 0.0;
};

// Value, gradient and Hessian of a log-likelihood at one parameter vector.
struct LikelihoodDerivatives {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

// Cox proportional hazards model with a Breslow baseline.
//   H(t | x) = H0(t) * exp(beta' (x - feature_means))
struct CoxModel {
  Eigen::VectorXd beta;
  StepCurve baseline_chf;
  Eigen::VectorXd feature_means;
  FitSummary summary;

  size_t num_features() const { return static_cast<size_t>(beta.size()); }
  // beta' (x - feature_means).
  double LinearPredictor(std::span<const double> x) const;
  // Cumulative hazard on `grid`, nondecreasing.
  std::vector<double> PredictChf(std::span<const double> x,
                                 const TimeGrid& grid) const;
  // exp(-H) on `grid`, clamped to [0, 1].
  StepCurve PredictSurvival(std::span<const double> x,
                            const TimeGrid& grid) const;
};

// Breslow partial log-likelihood (ties handled by the Breslow approximation)
// for the already-centered design `centered`, with analytic gradient and
// Hessian.
LikelihoodDerivatives CoxPartialLikelihood(const Eigen::MatrixXd& centered,
                                           std::span<const double> times,
                                           std::span<const int> events,
                                           const Eigen::VectorXd& beta);

// Maximizes the Breslow partial likelihood by Newton's method with up to ten
// step halvings per iteration. Throws FitError when there are no events or
// when no finite likelihood can be reached.
CoxModel FitCox(const SurvivalDataset& data, const FitOptions& options = {});

// Weibull accelerated failure time model:
//   S(t | x) = exp(-(t / lambda(x))^shape),  lambda(x) = exp(intercept + b'x)
struct WeibullAftModel {
  double shape = 1.0;
  double intercept = 0.0;
  Eigen::VectorXd coefficients;
  FitSummary summary;

  size_t num_features() const {
    return static_cast<size_t>(coefficients.size());
  }
  double Scale(std::span<const double> x) const;
  StepCurve PredictSurvival(std::span<const double> x,
                            const TimeGrid& grid) const;
};

// Right-censored Weibull log-likelihood in theta = (log shape, intercept, b).
LikelihoodDerivatives WeibullLogLikelihood(const Eigen::MatrixXd& features,
                                           std::span<const double> times,
                                           std::span<const int> events,
                                           const Eigen::VectorXd& theta);

// Newton with step halving on theta = (log shape, intercept, b), started at
// shape 1, intercept log(sum t / sum events), b = 0. Throws InputError for a
// zero time and FitError when there are no events.
WeibullAftModel FitWeibullAft(const SurvivalDataset& data,
                              const FitOptions& options = {});

// Covariate-free reference model: every row gets the Kaplan-Meier curve of
// the training data.
struct KaplanMeierModel {
  StepCurve curve;
  size_t feature_count = 0;

  size_t num_features() const { return feature_count; }
  StepCurve PredictSurvival(std::span<const double> x,
                            const TimeGrid& grid) const;
};

KaplanMeierModel FitKaplanMeier(const SurvivalDataset& data);

}  // namespace survlens

#endif  // SURVLENS_MODELS_H_
