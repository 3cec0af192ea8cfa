#ifndef SURVLENS_ESTIMATORS_H_
#define SURVLENS_ESTIMATORS_H_

#include <span>

#include "survlens/dataset.h"
#include "survlens/step_curve.h"

namespace survlens {

// Product-limit estimate over the distinct event times. Subjects censored at
// an event time are still at risk at that time. Throws InputError on empty
// input or mismatched lengths.
StepCurve KaplanMeier(std::span<const double> times, std::span<const int> events);
StepCurve KaplanMeier(const SurvivalDataset& data);

// Cumulative sum of d_k / r_k over the distinct event times.
StepCurve NelsonAalen(std::span<const double> times, std::span<const int> events);
StepCurve NelsonAalen(const SurvivalDataset& data);

// Kaplan-Meier estimate of the censoring distribution G(t), i.e. the
// product-limit estimator with the event indicator flipped. Used for
// inverse-probability-of-censoring weights.
StepCurve CensoringKaplanMeier(std::span<const double> times,
                               std::span<const int> events);
StepCurve CensoringKaplanMeier(const SurvivalDataset& data);

}  // namespace survlens

#endif  // SURVLENS_ESTIMATORS_H_
