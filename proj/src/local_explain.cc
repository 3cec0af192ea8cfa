#include "survlens/local_explain.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "survlens/errors.h"
#include "survlens/estimators.h"
#include "survlens/global_explain.h"
#include "survlens/numeric.h"
#include "survlens/random.h"

namespace survlens {

namespace {

// Hard limit for forced exact enumeration.
constexpr size_t kMaxForcedExactFeatures = 20;

std::vector<double> MeanPrediction(const Explainer& explainer,
                                   const Eigen::MatrixXd& rows,
                                   OutputType type) {
  const Eigen::MatrixXd predictions = explainer.Predict(rows, type);
  // Offsets from the first row: rows that all predict the same value average
  // to exactly that value.
  std::vector<double> mean(static_cast<size_t>(predictions.cols()));
  for (Eigen::Index t = 0; t < predictions.cols(); ++t) {
    const double first = predictions(0, t);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < predictions.rows(); ++i) {
      sum += predictions(i, t) - first;
    }
    mean[static_cast<size_t>(t)] =
        first + sum / static_cast<double>(predictions.rows());
  }
  return mean;
}

Eigen::MatrixXd RowsOf(const Eigen::MatrixXd& features,
                       std::span<const size_t> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), features.cols());
  for (size_t r = 0; r < rows.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) =
        features.row(static_cast<Eigen::Index>(rows[r]));
  }
  return out;
}

void CheckInstance(const Explainer& explainer, std::span<const double> x) {
  if (x.size() != explainer.num_features()) {
    throw InputError("instance has " + std::to_string(x.size()) +
                     " features, explainer expects " +
                     std::to_string(explainer.num_features()));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw InputError("instance is not finite");
  }
}

std::vector<double> AggregateOverTime(const std::vector<double>& times,
                                      const Eigen::MatrixXd& phi, bool absolute) {
  std::vector<double> aggregate(static_cast<size_t>(phi.rows()));
  std::vector<double> row(static_cast<size_t>(phi.cols()));
  for (Eigen::Index j = 0; j < phi.rows(); ++j) {
    for (Eigen::Index t = 0; t < phi.cols(); ++t) {
      row[static_cast<size_t>(t)] = absolute ? std::abs(phi(j, t)) : phi(j, t);
    }
    aggregate[static_cast<size_t>(j)] =
        row.size() == 1 ? row[0] : TrapezoidMean(times, row).value_or(0.0);
  }
  return aggregate;
}

// Shapley weights |S|! (p - |S| - 1)! / p! indexed by |S|.
std::vector<double> ShapleyWeights(size_t p) {
  std::vector<double> weights(p);
  for (size_t s = 0; s < p; ++s) {
    // 1 / (p * C(p - 1, s)), built as a product to stay exact for small p.
    double binom = 1.0;
    for (size_t i = 1; i <= s; ++i) {
      binom = binom * static_cast<double>(p - 1 - s + i) / static_cast<double>(i);
    }
    weights[s] = 1.0 / (static_cast<double>(p) * binom);
  }
  return weights;
}

SurvShapResult ShapForInstance(const Explainer& explainer,
                               std::span<const double> x,
                               const Eigen::MatrixXd& sample,
                               const SurvShapOptions& options,
                               uint64_t permutation_seed) {
  const size_t p = explainer.num_features();
  if (p == 0) throw InputError("SurvSHAP needs at least one feature");
  CheckInstance(explainer, x);

  ShapMethod method = options.method;
  if (method == ShapMethod::kAuto) {
    method = p <= kMaxExactShapFeatures ? ShapMethod::kExact : ShapMethod::kSampling;
  }
  if (method == ShapMethod::kExact && p > kMaxForcedExactFeatures) {
    throw InputError("exact SurvSHAP is limited to " +
                     std::to_string(kMaxForcedExactFeatures) + " features");
  }
  if (method == ShapMethod::kSampling && options.n_permutations == 0) {
    throw InputError("n_permutations must be at least 1");
  }

  SurvShapResult result;
  result.instance.assign(x.begin(), x.end());
  result.method = method;
  result.seed = options.seed;
  result.output_type = options.output_type;
  if (options.output_type != OutputType::kRisk) {
    result.times = explainer.grid().points();
  }
  result.prediction = explainer.PredictRow(x, options.output_type);
  result.baseline = MeanPrediction(explainer, sample, options.output_type);
  const size_t width = result.prediction.size();
  const auto rows = static_cast<Eigen::Index>(p);
  const auto cols = static_cast<Eigen::Index>(width);
  result.phi = Eigen::MatrixXd::Zero(rows, cols);
  result.phi_se = Eigen::MatrixXd::Zero(rows, cols);

  // Value of a coalition: background rows with the coalition's coordinates
  // taken from x.
  Eigen::MatrixXd z = sample;
  const auto set_coordinate = [&](size_t j, bool from_instance) {
    const auto col = static_cast<Eigen::Index>(j);
    if (from_instance) {
      z.col(col).setConstant(x[j]);
    } else {
      z.col(col) = sample.col(col);
    }
  };

  if (method == ShapMethod::kExact) {
    const size_t coalitions = size_t{1} << p;
    const size_t full = coalitions - 1;
    std::vector<std::vector<double>> value(coalitions);
    for (size_t mask = 0; mask < coalitions; ++mask) {
      if (mask == 0) {
        value[mask] = result.baseline;
      } else if (mask == full) {
        value[mask] = result.prediction;
      } else {
        for (size_t j = 0; j < p; ++j) set_coordinate(j, (mask >> j) & 1U);
        value[mask] = MeanPrediction(explainer, z, options.output_type);
      }
    }
    const std::vector<double> weights = ShapleyWeights(p);
    std::vector<double> terms;
    terms.reserve(coalitions / 2);
    for (size_t j = 0; j < p; ++j) {
      const size_t bit = size_t{1} << j;
      for (size_t t = 0; t < width; ++t) {
        terms.clear();
        for (size_t mask = 0; mask < coalitions; ++mask) {
          if (mask & bit) continue;
          const double w = weights[static_cast<size_t>(std::popcount(mask))];
          terms.push_back(w * (value[mask | bit][t] - value[mask][t]));
        }
        // Summing in sorted order makes the result independent of the
        // coalition enumeration order, so interchangeable players get
        // bit-identical values.
        std::sort(terms.begin(), terms.end());
        double sum = 0.0;
        for (double term : terms) sum += term;
        result.phi(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(t)) = sum;
      }
    }
    result.n_samples = coalitions;
  } else {
    const size_t reps = options.n_permutations;
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(rows, cols);
    Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(rows, cols);
    for (size_t r = 0; r < reps; ++r) {
      Rng rng(DeriveSeed(permutation_seed, r));
      const std::vector<size_t> order = rng.Permutation(p);
      z = sample;
      std::vector<double> previous = result.baseline;
      for (size_t step = 0; step < p; ++step) {
        const size_t j = order[step];
        std::vector<double> current;
        if (step + 1 == p) {
          current = result.prediction;
        } else {
          set_coordinate(j, true);
          current = MeanPrediction(explainer, z, options.output_type);
        }
        for (size_t t = 0; t < width; ++t) {
          const double delta = current[t] - previous[t];
          const auto jj = static_cast<Eigen::Index>(j);
          const auto tt = static_cast<Eigen::Index>(t);
          sum(jj, tt) += delta;
          sum_sq(jj, tt) += delta * delta;
        }
        previous = std::move(current);
      }
    }
    const auto n = static_cast<double>(reps);
    result.phi = sum / n;
    if (reps > 1) {
      const Eigen::MatrixXd variance =
          ((sum_sq - n * result.phi.cwiseProduct(result.phi)) / (n - 1.0))
              .cwiseMax(0.0);
      result.phi_se = (variance / n).cwiseSqrt();
    }
    result.n_samples = reps;
  }
  result.aggregate = AggregateOverTime(result.times, result.phi, true);
  return result;
}

}  // namespace

std::string_view ShapMethodName(ShapMethod method) {
  switch (method) {
    case ShapMethod::kAuto:
      return "auto";
    case ShapMethod::kExact:
      return "exact";
    case ShapMethod::kSampling:
      return "sampling";
  }
  return "auto";
}

ShapMethod ParseShapMethod(std::string_view name) {
  if (name == "auto") return ShapMethod::kAuto;
  if (name == "exact") return ShapMethod::kExact;
  if (name == "sampling") return ShapMethod::kSampling;
  throw InputError("unknown SHAP method '" + std::string(name) +
                   "' (expected auto, exact or sampling)");
}

SurvShapResult PredictPartsSurvShap(const Explainer& explainer,
                                    std::span<const double> x,
                                    const SurvShapOptions& options) {
  const std::vector<size_t> rows = BackgroundSample(
      explainer.background().size(), options.n_background, options.seed);
  const Eigen::MatrixXd sample = RowsOf(explainer.background().features(), rows);
  return ShapForInstance(explainer, x, sample, options,
                         DeriveSeed(options.seed, 0));
}

GlobalSurvShap ModelSurvShap(const Explainer& explainer,
                             const Eigen::MatrixXd& X,
                             const SurvShapOptions& options,
                             size_t num_threads) {
  if (X.rows() < 1) throw InputError("need at least one instance");
  if (static_cast<size_t>(X.cols()) != explainer.num_features()) {
    throw InputError("instances have " + std::to_string(X.cols()) +
                     " features, explainer expects " +
                     std::to_string(explainer.num_features()));
  }
  const std::vector<size_t> rows = BackgroundSample(
      explainer.background().size(), options.n_background, options.seed);
  const Eigen::MatrixXd sample = RowsOf(explainer.background().features(), rows);

  const auto m = static_cast<size_t>(X.rows());
  GlobalSurvShap global;
  global.per_instance.resize(m);
  ParallelFor(m, num_threads, [&](size_t i) {
    const Eigen::RowVectorXd x = X.row(static_cast<Eigen::Index>(i));
    try {
      global.per_instance[i] = ShapForInstance(
          explainer, std::span<const double>(x.data(), x.size()), sample,
          options, DeriveSeed(options.seed, i));
    } catch (const InputError& e) {
      throw InputError("row " + std::to_string(i + 1) + ": " + e.what());
    } catch (const NumericError& e) {
      throw NumericError("row " + std::to_string(i + 1) + ": " + e.what());
    }
  });

  const size_t p = explainer.num_features();
  const Eigen::MatrixXd& first = global.per_instance[0].phi;
  global.mean_abs_phi = Eigen::MatrixXd::Zero(first.rows(), first.cols());
  global.importance_ranking.assign(p, 0.0);
  for (size_t i = 0; i < m; ++i) {
    const SurvShapResult& r = global.per_instance[i];
    global.mean_abs_phi += r.phi.cwiseAbs();
    const std::vector<double> signed_mean =
        AggregateOverTime(r.times, r.phi, false);
    for (size_t j = 0; j < p; ++j) {
      global.importance_ranking[j] += r.aggregate[j];
      global.beeswarm.push_back({i, j, r.instance[j], r.aggregate[j],
                                 signed_mean[j]});
    }
  }
  global.mean_abs_phi /= static_cast<double>(m);
  for (double& v : global.importance_ranking) v /= static_cast<double>(m);
  global.order.resize(p);
  std::iota(global.order.begin(), global.order.end(), size_t{0});
  std::stable_sort(global.order.begin(), global.order.end(),
                   [&](size_t a, size_t b) {
                     return global.importance_ranking[a] >
                            global.importance_ranking[b];
                   });
  return global;
}

SurvLimeResult PredictPartsSurvLime(const Explainer& explainer,
                                    std::span<const double> x,
                                    const SurvLimeOptions& options) {
  CheckInstance(explainer, x);
  const size_t p = explainer.num_features();
  if (options.n_neighbors < 2) {
    throw InputError("SurvLIME needs at least two neighbors");
  }
  const Eigen::MatrixXd& background = explainer.background().features();
  const Eigen::RowVectorXd means = background.colwise().mean();
  const double denom = static_cast<double>(background.rows() - 1);
  std::vector<double> stddev(p);
  std::vector<size_t> varying;
  for (size_t j = 0; j < p; ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    const double ss =
        (background.col(col).array() - means(col)).square().sum();
    stddev[j] = std::sqrt(ss / denom);
    if (stddev[j] > 0.0) varying.push_back(j);
  }

  const auto n = static_cast<Eigen::Index>(options.n_neighbors);
  Rng rng(options.seed);
  Eigen::MatrixXd neighbors(n, static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (size_t j = 0; j < p; ++j) {
      const auto col = static_cast<Eigen::Index>(j);
      neighbors(i, col) = stddev[j] > 0.0 ? x[j] + stddev[j] * rng.Normal() : x[j];
    }
  }

  Eigen::RowVectorXd center(static_cast<Eigen::Index>(p));
  for (size_t j = 0; j < p; ++j) center(static_cast<Eigen::Index>(j)) = x[j];
  double pair_sum = 0.0;
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) {
      pair_sum += (neighbors.row(a) - neighbors.row(b)).norm();
    }
  }
  const double width =
      pair_sum / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
  Eigen::VectorXd weights(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d2 = (neighbors.row(i) - center).squaredNorm();
    weights(i) = width > 0.0 ? std::exp(-d2 / (width * width)) : 1.0;
  }
  if (!(weights.sum() > 0.0)) {
    throw NumericError("SurvLIME kernel weights are all zero");
  }

  // Time-averaged log-CHF offset of each neighbor from the Nelson-Aalen
  // baseline, with trapezoid weights over the grid.
  const TimeGrid& grid = explainer.grid();
  const StepCurve baseline = NelsonAalen(explainer.background());
  const size_t T = grid.size();
  std::vector<double> log_base(T);
  std::vector<double> dt(T, 0.0);
  for (size_t k = 0; k < T; ++k) {
    log_base[k] = std::log(std::max(baseline(grid[k]), kMinSurvival));
    if (k > 0) dt[k] += 0.5 * (grid[k] - grid[k - 1]);
    if (k + 1 < T) dt[k] += 0.5 * (grid[k + 1] - grid[k]);
  }
  const double dt_total = std::accumulate(dt.begin(), dt.end(), 0.0);
  const Eigen::MatrixXd chf = explainer.Predict(neighbors, OutputType::kChf);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (size_t k = 0; k < T; ++k) {
      const double h = chf(i, static_cast<Eigen::Index>(k));
      acc += dt[k] * (std::log(std::max(h, kMinSurvival)) - log_base[k]);
    }
    y(i) = acc / dt_total;
  }

  const auto q = static_cast<Eigen::Index>(varying.size());
  Eigen::MatrixXd design(n, q + 1);
  design.col(0).setOnes();
  for (Eigen::Index c = 0; c < q; ++c) {
    const auto col = static_cast<Eigen::Index>(varying[static_cast<size_t>(c)]);
    design.col(c + 1) = neighbors.col(col).array() - means(col);
  }
  const Eigen::MatrixXd weighted = design.transpose() * weights.asDiagonal();
  Eigen::MatrixXd normal = weighted * design;
  const Eigen::VectorXd rhs = weighted * y;

  SurvLimeResult result;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(normal);
  if (lu.rank() < normal.rows()) {
    result.degenerate = true;
    for (Eigen::Index c = 1; c < normal.rows(); ++c) normal(c, c) += 1e-8;
  }
  const Eigen::VectorXd coef = normal.ldlt().solve(rhs);
  if (!coef.allFinite()) {
    throw NumericError("SurvLIME surrogate coefficients are not finite");
  }
  const Eigen::VectorXd residual = y - design * coef;
  result.fit_residual = weights.dot(residual.cwiseProduct(residual));
  result.instance.assign(x.begin(), x.end());
  result.surrogate_beta.assign(p, 0.0);
  for (Eigen::Index c = 0; c < q; ++c) {
    result.surrogate_beta[varying[static_cast<size_t>(c)]] = coef(c + 1);
  }
  result.neighborhood_size = options.n_neighbors;
  result.kernel_width = width;
  return result;
}

IceProfile PredictProfile(const Explainer& explainer, std::span<const double> x,
                          const std::string& variable,
                          const IceOptions& options) {
  CheckInstance(explainer, x);
  const SurvivalDataset& background = explainer.background();
  const size_t j = background.RequireFeature(variable);
  const auto col = static_cast<Eigen::Index>(j);
  const Eigen::VectorXd column = background.features().col(col);
  std::vector<double> grid = QuantileGrid(
      std::span<const double>(column.data(), column.size()), options.grid_size);
  grid.push_back(x[j]);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  Eigen::MatrixXd rows(static_cast<Eigen::Index>(grid.size()),
                       static_cast<Eigen::Index>(x.size()));
  for (Eigen::Index g = 0; g < rows.rows(); ++g) {
    for (size_t k = 0; k < x.size(); ++k) {
      rows(g, static_cast<Eigen::Index>(k)) = x[k];
    }
    rows(g, col) = grid[static_cast<size_t>(g)];
  }

  IceProfile profile;
  profile.variable = variable;
  profile.grid_values = std::move(grid);
  if (options.output_type != OutputType::kRisk) {
    profile.times = explainer.grid().points();
  }
  profile.curves = explainer.Predict(rows, options.output_type);
  profile.observed_value = x[j];
  profile.output_type = options.output_type;
  return profile;
}

}  // namespace survlens
