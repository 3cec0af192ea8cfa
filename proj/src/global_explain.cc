#include "survlens/global_explain.h"

#include <algorithm>
#include <cmath>

#include "survlens/errors.h"
#include "survlens/numeric.h"
#include "survlens/random.h"

namespace survlens {

namespace {

// a - b, undefined when either side is.
std::optional<double> Difference(const std::optional<double>& a,
                                 const std::optional<double>& b) {
  if (!a || !b) return std::nullopt;
  return *a - *b;
}

std::vector<double> ColumnValues(const Eigen::MatrixXd& features, size_t j) {
  const Eigen::VectorXd column = features.col(static_cast<Eigen::Index>(j));
  return std::vector<double>(column.data(), column.data() + column.size());
}

size_t OutputWidth(const Explainer& explainer, OutputType type) {
  return type == OutputType::kRisk ? 1 : explainer.grid().size();
}

// Mean prediction over `rows` with column j (and optionally column k) set.
void AccumulateMean(const Explainer& explainer, const Eigen::MatrixXd& rows,
                    OutputType type, std::span<double> out) {
  const Eigen::MatrixXd predictions = explainer.Predict(rows, type);
  const auto count = static_cast<double>(rows.rows());
  for (Eigen::Index t = 0; t < predictions.cols(); ++t) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < predictions.rows(); ++i) {
      sum += predictions(i, t);
    }
    out[static_cast<size_t>(t)] = sum / count;
  }
}

Eigen::MatrixXd SampleRows(const Explainer& explainer, size_t cap,
                           uint64_t seed) {
  const auto& features = explainer.background().features();
  const std::vector<size_t> rows =
      BackgroundSample(explainer.background().size(), cap, seed);
  Eigen::MatrixXd sample(static_cast<Eigen::Index>(rows.size()),
                         features.cols());
  for (size_t r = 0; r < rows.size(); ++r) {
    sample.row(static_cast<Eigen::Index>(r)) =
        features.row(static_cast<Eigen::Index>(rows[r]));
  }
  return sample;
}

}  // namespace

std::vector<VariableImportance> ModelParts(
    const Explainer& explainer, const Loss& loss,
    const ModelPartsOptions& options,
    const std::optional<SurvivalDataset>& data) {
  if (options.n_permutations < 1) {
    throw InputError("n_permutations must be at least 1");
  }
  const SurvivalDataset& d = data ? *data : explainer.background();
  if (d.num_features() != explainer.num_features()) {
    throw InputError("data has " + std::to_string(d.num_features()) +
                     " features, explainer expects " +
                     std::to_string(explainer.num_features()));
  }
  const size_t p = d.num_features();
  const auto reps = static_cast<size_t>(options.n_permutations);
  const MetricValues baseline = loss.eval(explainer, d);

  std::vector<MetricValues> runs(p * reps);
  ParallelFor(p * reps, options.num_threads, [&](size_t item) {
    const size_t j = item / reps;
    const size_t r = item % reps;
    Rng rng(DeriveSeed(options.seed, j, r));
    const std::vector<size_t> perm = rng.Permutation(d.size());
    Eigen::MatrixXd permuted = d.features();
    const auto col = static_cast<Eigen::Index>(j);
    for (size_t i = 0; i < perm.size(); ++i) {
      permuted(static_cast<Eigen::Index>(i), col) =
          d.features()(static_cast<Eigen::Index>(perm[i]), col);
    }
    runs[item] = loss.eval(explainer, d.WithFeatures(std::move(permuted)));
  });

  std::vector<VariableImportance> result;
  for (size_t j = 0; j < p; ++j) {
    VariableImportance vi;
    vi.variable = d.feature_names()[j];
    vi.baseline_loss = baseline;
    vi.n_permutations = options.n_permutations;
    vi.seed = options.seed;
    for (size_t r = 0; r < reps; ++r) {
      const MetricValues& run = runs[j * reps + r];
      if (run.size() != baseline.size()) {
        throw NumericError("loss changed shape under permutation");
      }
      MetricValues diff(run.size());
      for (size_t k = 0; k < run.size(); ++k) {
        diff[k] = Difference(run[k], baseline[k]);
      }
      vi.repetitions.push_back(std::move(diff));
    }
    // Averaging differences (not raw losses) keeps the importance of a
    // variable that never changes the loss exactly zero.
    vi.importance.resize(baseline.size());
    vi.permuted_loss.resize(baseline.size());
    for (size_t k = 0; k < baseline.size(); ++k) {
      double sum = 0.0;
      bool defined = true;
      for (size_t r = 0; r < reps; ++r) {
        if (!vi.repetitions[r][k]) {
          defined = false;
          break;
        }
        sum += *vi.repetitions[r][k];
      }
      if (defined && baseline[k]) {
        vi.importance[k] = sum / static_cast<double>(reps);
        vi.permuted_loss[k] = *baseline[k] + *vi.importance[k];
      }
    }
    result.push_back(std::move(vi));
  }
  return result;
}

std::string_view ProfileMethodName(ProfileMethod method) {
  return method == ProfileMethod::kAle ? "ale" : "pdp";
}

ProfileMethod ParseProfileMethod(std::string_view name) {
  if (name == "pdp") return ProfileMethod::kPdp;
  if (name == "ale") return ProfileMethod::kAle;
  throw InputError("unknown profile method '" + std::string(name) +
                   "' (expected pdp or ale)");
}

std::vector<size_t> BackgroundSample(size_t n, size_t cap, uint64_t seed) {
  if (cap == 0) throw InputError("background sample size must be positive");
  Rng rng(seed);
  std::vector<size_t> rows = rng.Permutation(n);
  rows.resize(std::min(n, cap));
  std::sort(rows.begin(), rows.end());
  return rows;
}

ProfileSurface ModelProfile(const Explainer& explainer,
                            const std::string& variable,
                            const ProfileOptions& options) {
  const SurvivalDataset& background = explainer.background();
  const size_t j = background.RequireFeature(variable);
  const auto col = static_cast<Eigen::Index>(j);
  const std::vector<double> column = ColumnValues(background.features(), j);
  const Eigen::MatrixXd sample =
      SampleRows(explainer, options.n_background, options.seed);
  const size_t width = OutputWidth(explainer, options.output_type);

  ProfileSurface profile;
  profile.variables = {variable};
  profile.method = options.method;
  profile.output_type = options.output_type;
  if (options.output_type != OutputType::kRisk) {
    profile.times = explainer.grid().points();
  }

  if (options.method == ProfileMethod::kPdp) {
    const std::vector<double> grid =
        QuantileGrid(column, options.grid_size.value_or(25));
    profile.grid_values = {grid};
    profile.shape = {grid.size(), width};
    profile.values.assign(grid.size() * width, 0.0);
    Eigen::MatrixXd rows = sample;
    for (size_t g = 0; g < grid.size(); ++g) {
      rows.col(col).setConstant(grid[g]);
      AccumulateMean(explainer, rows, options.output_type,
                     std::span<double>(profile.values).subspan(g * width, width));
    }
    return profile;
  }

  const size_t bins = options.grid_size.value_or(10);
  if (bins < 1) throw InputError("ALE needs at least one bin");
  const std::vector<double> edges = QuantileGrid(column, bins + 1);
  if (edges.size() < 2) {
    throw InputError("variable '" + variable +
                     "' is constant: ALE bins would have zero width");
  }
  profile.grid_values = {edges};
  profile.shape = {edges.size(), width};
  profile.values.assign(edges.size() * width, 0.0);

  std::vector<double> effect(width);
  std::vector<double> upper(width);
  std::vector<double> lower(width);
  for (size_t b = 1; b < edges.size(); ++b) {
    std::vector<Eigen::Index> members;
    for (Eigen::Index i = 0; i < sample.rows(); ++i) {
      const double v = sample(i, col);
      const bool in_bin = (v > edges[b - 1] && v <= edges[b]) ||
                          (b == 1 && v == edges[0]);
      if (in_bin) members.push_back(i);
    }
    std::fill(effect.begin(), effect.end(), 0.0);
    if (!members.empty()) {
      Eigen::MatrixXd rows(static_cast<Eigen::Index>(members.size()),
                           sample.cols());
      for (size_t m = 0; m < members.size(); ++m) {
        rows.row(static_cast<Eigen::Index>(m)) = sample.row(members[m]);
      }
      rows.col(col).setConstant(edges[b]);
      AccumulateMean(explainer, rows, options.output_type, upper);
      rows.col(col).setConstant(edges[b - 1]);
      AccumulateMean(explainer, rows, options.output_type, lower);
      for (size_t t = 0; t < width; ++t) effect[t] = upper[t] - lower[t];
    }
    for (size_t t = 0; t < width; ++t) {
      profile.values[b * width + t] =
          profile.values[(b - 1) * width + t] + effect[t];
    }
  }
  for (size_t t = 0; t < width; ++t) {
    double mean = 0.0;
    for (size_t g = 0; g < edges.size(); ++g) {
      mean += profile.values[g * width + t];
    }
    mean /= static_cast<double>(edges.size());
    for (size_t g = 0; g < edges.size(); ++g) {
      profile.values[g * width + t] -= mean;
    }
  }
  return profile;
}

ProfileSurface ModelProfile2d(const Explainer& explainer,
                              const std::string& variable_a,
                              const std::string& variable_b,
                              const Profile2dOptions& options) {
  if (variable_a == variable_b) {
    throw InputError("2-D profile needs two distinct variables, got '" +
                     variable_a + "' twice");
  }
  const SurvivalDataset& background = explainer.background();
  const size_t ja = background.RequireFeature(variable_a);
  const size_t jb = background.RequireFeature(variable_b);
  const std::vector<double> grid_a =
      QuantileGrid(ColumnValues(background.features(), ja), options.grid_size);
  const std::vector<double> grid_b =
      QuantileGrid(ColumnValues(background.features(), jb), options.grid_size);
  const Eigen::MatrixXd sample =
      SampleRows(explainer, options.n_background, options.seed);
  const size_t width = OutputWidth(explainer, options.output_type);

  ProfileSurface profile;
  profile.variables = {variable_a, variable_b};
  profile.grid_values = {grid_a, grid_b};
  if (options.output_type != OutputType::kRisk) {
    profile.times = explainer.grid().points();
  }
  profile.method = ProfileMethod::kPdp;
  profile.output_type = options.output_type;
  profile.shape = {grid_a.size(), grid_b.size(), width};
  profile.values.assign(grid_a.size() * grid_b.size() * width, 0.0);

  Eigen::MatrixXd rows = sample;
  for (size_t a = 0; a < grid_a.size(); ++a) {
    rows.col(static_cast<Eigen::Index>(ja)).setConstant(grid_a[a]);
    for (size_t b = 0; b < grid_b.size(); ++b) {
      rows.col(static_cast<Eigen::Index>(jb)).setConstant(grid_b[b]);
      const size_t offset = (a * grid_b.size() + b) * width;
      AccumulateMean(explainer, rows, options.output_type,
                     std::span<double>(profile.values).subspan(offset, width));
    }
  }
  return profile;
}

ResidualSet ModelDiagnostics(const Explainer& explainer,
                             const SurvivalDataset& data) {
  // Predict directly at the observed times so no interpolation is involved.
  std::vector<double> points;
  for (double t : data.times()) {
    if (t > 0.0) points.push_back(t);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  while (points.size() < 2) {
    points.push_back(points.empty() ? 1.0 : points.back() + 1.0);
  }
  const TimeGrid grid(points);
  const Eigen::MatrixXd chf =
      explainer.Predict(data.features(), OutputType::kChf, grid);

  ResidualSet residuals;
  residuals.observed_times = data.times();
  residuals.events = data.events();
  for (size_t i = 0; i < data.size(); ++i) {
    const double t = data.times()[i];
    const auto it = std::lower_bound(points.begin(), points.end(), t);
    const double cox_snell =
        (it != points.end() && *it == t)
            ? chf(static_cast<Eigen::Index>(i),
                  static_cast<Eigen::Index>(it - points.begin()))
            : 0.0;
    const double delta = data.events()[i] == 1 ? 1.0 : 0.0;
    const double martingale = delta - cox_snell;
    residuals.cox_snell.push_back(cox_snell);
    residuals.martingale.push_back(martingale);

    std::optional<double> deviance;
    if (delta == 0.0) {
      deviance = martingale == 0.0 ? 0.0 : -std::sqrt(-2.0 * martingale);
    } else if (delta - martingale > 0.0) {
      const double inner =
          std::max(0.0, -2.0 * (martingale + std::log(delta - martingale)));
      const double sign = martingale > 0.0 ? 1.0 : (martingale < 0.0 ? -1.0 : 0.0);
      deviance = sign * std::sqrt(inner);
    }
    residuals.deviance.push_back(deviance);
  }
  return residuals;
}

}  // namespace survlens
