#ifndef SURVLENS_GLOBAL_EXPLAIN_H_
#define SURVLENS_GLOBAL_EXPLAIN_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "survlens/explainer.h"
#include "survlens/metrics.h"

namespace survlens {

// Permutation importance of one variable. For curve-valued losses the vectors
// have one entry per grid point; for scalar losses they have one entry.
struct VariableImportance {
  std::string variable;
  MetricValues baseline_loss;
  // Mean over repetitions of the loss after permuting the variable.
  MetricValues permuted_loss;
  // permuted_loss - baseline_loss, elementwise.
  MetricValues importance;
  // Importance of each repetition (outer index = repetition).
  std::vector<MetricValues> repetitions;
  int n_permutations = 0;
  uint64_t seed = 0;
};

struct ModelPartsOptions {
  int n_permutations = 10;
  uint64_t seed = 42;
  size_t num_threads = 1;
};

// Permutation variable importance on `data` (defaults to the background).
// The permutation of variable j in repetition r is drawn from the stream
// DeriveSeed(seed, j, r), so results do not depend on the thread count.
std::vector<VariableImportance> ModelParts(
    const Explainer& explainer, const Loss& loss,
    const ModelPartsOptions& options = {},
    const std::optional<SurvivalDataset>& data = std::nullopt);

enum class ProfileMethod { kPdp, kAle };

std::string_view ProfileMethodName(ProfileMethod method);
ProfileMethod ParseProfileMethod(std::string_view name);

// Profile values over one or two variable grids and the time grid.
// shape = {g1, T} or {g1, g2, T}; T is 1 for risk output.
struct ProfileSurface {
  std::vector<std::string> variables;
  std::vector<std::vector<double>> grid_values;
  std::vector<double> times;
  ProfileMethod method = ProfileMethod::kPdp;
  OutputType output_type = OutputType::kSurvival;
  std::vector<size_t> shape;
  std::vector<double> values;

  double At(size_t i, size_t t) const { return values[i * shape[1] + t]; }
  double At(size_t i, size_t k, size_t t) const {
    return values[(i * shape[1] + k) * shape[2] + t];
  }
};

struct ProfileOptions {
  ProfileMethod method = ProfileMethod::kPdp;
  // Grid points (pdp) or bins (ale). Defaults: 25 for pdp, 10 for ale.
  std::optional<size_t> grid_size;
  size_t n_background = 100;
  OutputType output_type = OutputType::kSurvival;
  uint64_t seed = 42;
};

// First min(n, cap) rows of the background after a shuffle seeded by `seed`.
std::vector<size_t> BackgroundSample(size_t n, size_t cap, uint64_t seed);

// Partial dependence or accumulated local effects of one variable.
ProfileSurface ModelProfile(const Explainer& explainer,
                            const std::string& variable,
                            const ProfileOptions& options = {});

struct Profile2dOptions {
  size_t grid_size = 10;
  size_t n_background = 100;
  OutputType output_type = OutputType::kSurvival;
  uint64_t seed = 42;
};

// Two-variable partial dependence.
ProfileSurface ModelProfile2d(const Explainer& explainer,
                              const std::string& variable_a,
                              const std::string& variable_b,
                              const Profile2dOptions& options = {});

struct ResidualSet {
  std::vector<double> observed_times;
  std::vector<int> events;
  std::vector<double> cox_snell;
  std::vector<double> martingale;
  // nullopt where the deviance residual is undefined (an event whose
  // Cox-Snell residual is zero).
  std::vector<std::optional<double>> deviance;
};

// Cox-Snell, martingale and deviance residuals of the explainer's model on
// `data`. The cumulative hazard is evaluated at each observed time.
ResidualSet ModelDiagnostics(const Explainer& explainer,
                             const SurvivalDataset& data);

}  // namespace survlens

#endif  // SURVLENS_GLOBAL_EXPLAIN_H_
