#ifndef SURVLENS_LOCAL_EXPLAIN_H_
#define SURVLENS_LOCAL_EXPLAIN_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "survlens/explainer.h"

namespace survlens {

enum class ShapMethod { kAuto, kExact, kSampling };

std::string_view ShapMethodName(ShapMethod method);
ShapMethod ParseShapMethod(std::string_view name);

// Largest feature count handled by full coalition enumeration under kAuto.
inline constexpr size_t kMaxExactShapFeatures = 10;

struct SurvShapOptions {
  size_t n_background = 100;
  ShapMethod method = ShapMethod::kAuto;
  size_t n_permutations = 100;
  OutputType output_type = OutputType::kSurvival;
  uint64_t seed = 42;
};

// Time-dependent Shapley attributions of one prediction.
struct SurvShapResult {
  std::vector<double> instance;
  std::vector<double> times;
  // p x T attributions; rows follow the feature order.
  Eigen::MatrixXd phi;
  // Standard error of each sampled attribution (zero for the exact method).
  Eigen::MatrixXd phi_se;
  // Mean background prediction, one entry per time point.
  std::vector<double> baseline;
  // Model prediction for the instance.
  std::vector<double> prediction;
  // Normalized time integral of |phi| per feature.
  std::vector<double> aggregate;
  ShapMethod method = ShapMethod::kExact;
  size_t n_samples = 0;
  uint64_t seed = 0;
  OutputType output_type = OutputType::kSurvival;
};

// Shapley values of the game v(S)(t) = mean_b f(x_S, b_rest)(t) over a seeded
// background sample. Exact enumeration for p <= 10 under kAuto, otherwise
// permutation sampling.
SurvShapResult PredictPartsSurvShap(const Explainer& explainer,
                                    std::span<const double> x,
                                    const SurvShapOptions& options = {});

struct SurvLimeOptions {
  size_t n_neighbors = 100;
  uint64_t seed = 42;
};

struct SurvLimeResult {
  std::vector<double> instance;
  std::vector<double> surrogate_beta;
  size_t neighborhood_size = 0;
  double kernel_width = 0.0;
  // Weighted least-squares objective at the solution.
  double fit_residual = 0.0;
  // Set when the normal equations were singular and a ridge penalty was used.
  bool degenerate = false;
};

// Local surrogate Cox model: Gaussian neighborhood around x, kernel weights,
// log-cumulative-hazard offsets from the Nelson-Aalen baseline regressed on
// the centered neighbors.
SurvLimeResult PredictPartsSurvLime(const Explainer& explainer,
                                    std::span<const double> x,
                                    const SurvLimeOptions& options = {});

struct IceProfile {
  std::string variable;
  std::vector<double> grid_values;
  std::vector<double> times;
  // grid_values.size() x T (T = 1 for risk).
  Eigen::MatrixXd curves;
  double observed_value = 0.0;
  OutputType output_type = OutputType::kSurvival;
};

struct IceOptions {
  size_t grid_size = 25;
  OutputType output_type = OutputType::kSurvival;
};

// Ceteris paribus profile: x with one variable swept over the background
// quantile grid (the observed value inserted).
IceProfile PredictProfile(const Explainer& explainer, std::span<const double> x,
                          const std::string& variable,
                          const IceOptions& options = {});

struct BeeswarmPoint {
  size_t instance = 0;
  size_t variable = 0;
  double feature_value = 0.0;
  // Normalized time integral of |phi|.
  double aggregate = 0.0;
  // Normalized time integral of phi (keeps the sign).
  double signed_mean = 0.0;
};

struct GlobalSurvShap {
  std::vector<SurvShapResult> per_instance;
  // p x T mean of |phi| over instances.
  Eigen::MatrixXd mean_abs_phi;
  // Mean of the per-instance aggregates, one entry per feature.
  std::vector<double> importance_ranking;
  // Feature indices ordered by decreasing importance.
  std::vector<size_t> order;
  std::vector<BeeswarmPoint> beeswarm;
};

// SurvSHAP(t) for every row of X and their aggregation. All instances share
// one background sample; instance i draws its permutations (sampling method)
// from the stream DeriveSeed(seed, i).
GlobalSurvShap ModelSurvShap(const Explainer& explainer,
                             const Eigen::MatrixXd& X,
                             const SurvShapOptions& options = {},
                             size_t num_threads = 1);

}  // namespace survlens

#endif  // SURVLENS_LOCAL_EXPLAIN_H_
