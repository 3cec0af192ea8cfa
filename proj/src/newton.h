#ifndef SURVLENS_SRC_NEWTON_H_
#define SURVLENS_SRC_NEWTON_H_

#include <functional>

#include <Eigen/Core>

#include "survlens/models.h"

namespace survlens::internal {

inline constexpr int kMaxStepHalvings = 10;
inline constexpr double kDivergenceBound = 20.0;

// Newton ascent with step halving. Convergence when max |gradient| < tol or
// the accepted step has norm < tol. Parameters from `guard_begin` on are
// checked against the divergence bound. Throws FitError when no finite
// objective can be reached from the current point.
FitSummary NewtonMaximize(
    const std::function<LikelihoodDerivatives(const Eigen::VectorXd&)>& objective,
    Eigen::VectorXd& theta, const FitOptions& options, Eigen::Index guard_begin);

}  // namespace survlens::internal

#endif  // SURVLENS_SRC_NEWTON_H_
