#include "newton.h"

#include <cmath>

#include <Eigen/Dense>

#include "survlens/errors.h"

namespace survlens::internal {

FitSummary NewtonMaximize(
    const std::function<LikelihoodDerivatives(const Eigen::VectorXd&)>& objective,
    Eigen::VectorXd& theta, const FitOptions& options, Eigen::Index guard_begin) {
  FitSummary summary;
  LikelihoodDerivatives current = objective(theta);
  if (!std::isfinite(current.value)) {
    throw FitError("log-likelihood is not finite at the starting point");
  }
  for (int iter = 0; iter < options.max_iter; ++iter) {
    if (theta.size() == 0 ||
        current.gradient.cwiseAbs().maxCoeff() < options.tol) {
      summary.converged = true;
      break;
    }
    const Eigen::MatrixXd information = -current.hessian;
    Eigen::VectorXd step =
        information.completeOrthogonalDecomposition().solve(current.gradient);
    if (!step.allFinite() || current.gradient.dot(step) <= 0.0) {
      // Not an ascent direction: fall back to a damped gradient step.
      step = current.gradient / (1.0 + current.gradient.norm());
    }

    bool accepted = false;
    bool any_finite = false;
    Eigen::VectorXd candidate;
    LikelihoodDerivatives next;
    double scale = 1.0;
    for (int halving = 0; halving <= kMaxStepHalvings; ++halving) {
      candidate = theta + scale * step;
      next = objective(candidate);
      if (std::isfinite(next.value) && next.gradient.allFinite()) {
        any_finite = true;
        const double slack = 1e-12 * (1.0 + std::abs(current.value));
        if (next.value >= current.value - slack) {
          accepted = true;
          break;
        }
      }
      scale *= 0.5;
    }
    if (!accepted) {
      if (!any_finite) {
        throw FitError("log-likelihood became non-finite after " +
                       std::to_string(kMaxStepHalvings) + " step halvings");
      }
      // No halving improves the objective: numerically at the optimum.
      summary.converged = step.norm() * scale < 1e3 * options.tol;
      break;
    }
    const double step_norm = (candidate - theta).norm();
    theta = candidate;
    current = std::move(next);
    summary.iterations = iter + 1;

    if (guard_begin < theta.size() &&
        theta.tail(theta.size() - guard_begin).cwiseAbs().maxCoeff() >
            kDivergenceBound) {
      summary.diverged = true;
      summary.converged = false;
      break;
    }
    if (step_norm < options.tol) {
      summary.converged = true;
      break;
    }
  }
  summary.log_likelihood = current.value;
  return summary;
}

}  // namespace survlens::internal
