#ifndef SURVLENS_STEP_CURVE_H_
#define SURVLENS_STEP_CURVE_H_

#include <span>
#include <string_view>
#include <vector>

namespace survlens {

enum class CurveKind { kSurvival, kChf, kGeneric };

std::string_view CurveKindName(CurveKind kind);

// Right-continuous piecewise-constant function. values[k] holds on
// [knots[k], knots[k+1]). Before the first knot the curve equals its initial
// value: 1 for survival curves, 0 for cumulative hazards and generic curves.
// Knots are strictly increasing; an estimator with no jumps has no knots.
class StepCurve {
 public:
  StepCurve() = default;
  // Throws InputError if the shape or the monotonicity required by `kind`
  // does not hold.
  StepCurve(std::vector<double> knots, std::vector<double> values,
            CurveKind kind);

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }
  CurveKind kind() const { return kind_; }
  size_t size() const { return knots_.size(); }
  bool empty() const { return knots_.empty(); }
  double initial_value() const;

  // Value at t (right-continuous).
  double operator()(double t) const;
  // Left limit at t: value on the last knot strictly before t.
  double LeftLimit(double t) const;

  std::vector<double> Evaluate(std::span<const double> times) const;

  bool operator==(const StepCurve& other) const = default;

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
  CurveKind kind_ = CurveKind::kGeneric;
};

}  // namespace survlens

#endif  // SURVLENS_STEP_CURVE_H_
