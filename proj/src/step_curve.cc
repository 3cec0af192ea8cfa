#include "survlens/step_curve.h"

#include <algorithm>
#include <cmath>

#include "survlens/errors.h"

namespace survlens {

std::string_view CurveKindName(CurveKind kind) {
  switch (kind) {
    case CurveKind::kSurvival:
      return "survival";
    case CurveKind::kChf:
      return "chf";
    case CurveKind::kGeneric:
      return "generic";
  }
  return "generic";
}

StepCurve::StepCurve(std::vector<double> knots, std::vector<double> values,
                     CurveKind kind)
    : knots_(std::move(knots)), values_(std::move(values)), kind_(kind) {
  if (knots_.size() != values_.size()) {
    throw InputError("step curve knots and values differ in length");
  }
  for (size_t k = 1; k < knots_.size(); ++k) {
    if (!(knots_[k] > knots_[k - 1])) {
      throw InputError("step curve knots must be strictly increasing");
    }
  }
  for (size_t k = 0; k < values_.size(); ++k) {
    const double v = values_[k];
    const double prev = k == 0 ? initial_value() : values_[k - 1];
    if (kind_ == CurveKind::kSurvival) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw InputError("survival value out of [0,1]");
      }
      if (v > prev) throw InputError("survival curve is not nonincreasing");
    } else if (kind_ == CurveKind::kChf) {
      if (!(v >= 0.0) || std::isnan(v)) {
        throw InputError("cumulative hazard must be nonnegative");
      }
      if (v < prev) {
        throw InputError("cumulative hazard is not nondecreasing");
      }
    }
  }
}

double StepCurve::initial_value() const {
  return kind_ == CurveKind::kSurvival ? 1.0 : 0.0;
}

double StepCurve::operator()(double t) const {
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  if (it == knots_.begin()) return initial_value();
  return values_[static_cast<size_t>(it - knots_.begin()) - 1];
}

double StepCurve::LeftLimit(double t) const {
  const auto it = std::lower_bound(knots_.begin(), knots_.end(), t);
  if (it == knots_.begin()) return initial_value();
  return values_[static_cast<size_t>(it - knots_.begin()) - 1];
}

std::vector<double> StepCurve::Evaluate(std::span<const double> times) const {
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back((*this)(t));
  return out;
}

}  // namespace survlens
