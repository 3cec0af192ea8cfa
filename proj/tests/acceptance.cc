// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "survlens/estimators.h"
#include "survlens/explainer.h"
#include "survlens/global_explain.h"
#include "survlens/io.h"
#include "survlens/local_explain.h"
#include "survlens/metrics.h"
#include "survlens/models.h"
#include "cli_corpus.h"
#include "test_util.h"

namespace survlens {
namespace {

using namespace ::survlens::testing;
namespace fs = std::filesystem;

// Collects failed checks of one criterion.
class Checker {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  void Near(double a, double b, double tol, const std::string& what) {
    std::ostringstream ss;
    ss << what << " (" << a << " vs " << b << ")";
    Expect(std::abs(a - b) <= tol, ss.str());
  }
  bool ok() const { return failed_ == 0; }
  std::string Summary() const {
    std::string s = std::to_string(failed_) + " failed check(s)";
    for (const auto& f : failures_) s += "; " + f;
    return s;
  }

 private:
  std::vector<std::string> failures_;
  int failed_ = 0;
};

Eigen::MatrixXd Column(const std::vector<double>& x) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(x.size()), 1);
  for (size_t i = 0; i < x.size(); ++i) X(static_cast<Eigen::Index>(i), 0) = x[i];
  return X;
}

std::vector<double> Row(const Eigen::MatrixXd& X, Eigen::Index i) {
  std::vector<double> row(static_cast<size_t>(X.cols()));
  for (Eigen::Index j = 0; j < X.cols(); ++j) row[static_cast<size_t>(j)] = X(i, j);
  return row;
}

// 1. Kaplan-Meier / Nelson-Aalen on hand-computed fixtures.
void KmNaOracle(Checker& c) {
  struct Fixture {
    std::vector<double> times;
    std::vector<int> events;
    std::vector<double> at;
    std::vector<double> km;
    std::vector<double> na;
  };
  const std::vector<Fixture> fixtures = {
      {{1, 2, 3}, {1, 1, 1}, {0.5, 1, 2, 3}, {1, 2.0 / 3, 1.0 / 3, 0},
       {0, 1.0 / 3, 1.0 / 3 + 1.0 / 2, 1.0 / 3 + 1.0 / 2 + 1}},
      {{1, 2, 3}, {0, 0, 0}, {1, 3, 10}, {1, 1, 1}, {0, 0, 0}},
      {{1, 2}, {1, 0}, {1, 2, 5}, {0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}},
      {{5}, {1}, {4, 5}, {1, 0}, {0, 1}},
      {{1, 1, 2, 3, 3, 4},
       {1, 0, 1, 1, 1, 0},
       {1, 2, 3, 4},
       {5.0 / 6, 5.0 / 6 * 3 / 4, 5.0 / 6 * 3 / 4 * 1 / 3, 5.0 / 6 * 3 / 4 * 1 / 3},
       {1.0 / 6, 1.0 / 6 + 1.0 / 4, 1.0 / 6 + 1.0 / 4 + 2.0 / 3,
        1.0 / 6 + 1.0 / 4 + 2.0 / 3}},
  };
  for (size_t f = 0; f < fixtures.size(); ++f) {
    const Fixture& fx = fixtures[f];
    const StepCurve km = KaplanMeier(fx.times, fx.events);
    const StepCurve na = NelsonAalen(fx.times, fx.events);
    for (size_t k = 0; k < fx.at.size(); ++k) {
      const std::string where = "fixture " + std::to_string(f + 1) + " t=" +
                                std::to_string(fx.at[k]);
      c.Near(km(fx.at[k]), fx.km[k], 1e-12, "KM " + where);
      c.Near(na(fx.at[k]), fx.na[k], 1e-12, "NA " + where);
    }
  }
}

// 2. Cox derivatives against finite differences; MLE against grid search.
void CoxFitting(Checker& c) {
  const SurvivalDataset raw = CoxData(60, {0.8, -0.5, 0.3}, 5);
  std::vector<double> times = raw.times();
  for (double& t : times) t = std::ceil(t);
  const SurvivalDataset data(times, raw.events(), raw.features(), raw.feature_names());
  const Eigen::MatrixXd centered =
      data.features().rowwise() - data.features().colwise().mean();
  const auto brute = [&](const Eigen::VectorXd& b) {
    return BruteCoxLogLik(data.features(), data.times(), data.events(), b);
  };
  Rng rng(99);
  for (int point = 0; point < 5; ++point) {
    Eigen::VectorXd beta(3);
    for (int j = 0; j < 3; ++j) beta(j) = rng.Uniform() * 2.0 - 1.0;
    const LikelihoodDerivatives d =
        CoxPartialLikelihood(centered, data.times(), data.events(), beta);
    c.Expect(RelativeError(d.gradient, CentralGradient(brute, beta)) < 1e-5,
             "gradient at point " + std::to_string(point));
    c.Expect(RelativeError(d.hessian, CentralHessian(brute, beta)) < 1e-5,
             "Hessian at point " + std::to_string(point));
  }

  const SurvivalDataset one({1, 2, 3, 4}, {1, 1, 1, 1}, Column({1, 0, 1, 0}), {"x"});
  const auto loglik = [&](double b) {
    return BruteCoxLogLik(one.features(), one.times(), one.events(),
                          Eigen::VectorXd::Constant(1, b));
  };
  double best = -10.0;
  for (int k = 0; k <= 20000; ++k) {
    const double b = -10.0 + 1e-3 * k;
    if (loglik(b) > loglik(best)) best = b;
  }
  double lo = best - 1e-3;
  double hi = best + 1e-3;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (loglik(m1) < loglik(m2)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  const CoxModel model = FitCox(one);
  c.Expect(model.summary.converged, "1-covariate fit converged");
  c.Near(model.beta(0), 0.5 * (lo + hi), 1e-6, "beta vs grid search");
}

double FixtureSurvival(double x, double t) { return std::exp(-0.1 * t * std::exp(x)); }

const SurvivalFunction kFixtureModel = [](std::span<const double> x, const TimeGrid& grid) {
  std::vector<double> s(grid.size());
  for (size_t k = 0; k < grid.size(); ++k) s[k] = FixtureSurvival(x[0], grid[k]);
  return s;
};

const RiskFunction kFeatureRisk = [](std::span<const double> x) { return x[0]; };

// 3. Metrics against term and pair enumeration.
void MetricOracle(Checker& c) {
  const SurvivalDataset data({1, 2, 2, 3, 4, 5, 6, 7}, {1, 0, 1, 1, 0, 1, 1, 0},
                             Column({0.5, -0.2, 0.3, 1.0, 0.3, -1.0, -0.5, 0.1}), {"x"});
  const TimeGrid grid({1.5, 2, 3, 4.5, 6});
  const Explainer explainer = Explain(kFixtureModel, data, grid, "fixture", kFeatureRisk);
  const auto& T = data.times();
  const auto& D = data.events();
  const auto x = [&](size_t i) { return data.features()(static_cast<Eigen::Index>(i), 0); };

  const MetricCurve brier = BrierScore(explainer, data, grid);
  const MetricCurve auc = CumulativeDynamicAuc(explainer, data, grid);
  for (size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    double sum = 0.0;
    double num = 0.0;
    double cases = 0.0;
    double controls = 0.0;
    for (size_t i = 0; i < data.size(); ++i) {
      const double s = FixtureSurvival(x(i), t);
      if (T[i] <= t && D[i] == 1) {
        sum += s * s / BruteCensoringSurvival(T, D, T[i], true);
      } else if (T[i] > t) {
        sum += (1 - s) * (1 - s) / BruteCensoringSurvival(T, D, t, false);
        controls += 1.0;
      }
    }
    for (size_t i = 0; i < data.size(); ++i) {
      if (!(T[i] <= t && D[i] == 1)) continue;
      const double g = BruteCensoringSurvival(T, D, T[i], true);
      cases += 1.0 / (g * g);
      for (size_t j = 0; j < data.size(); ++j) {
        if (T[j] > t) {
          num += (x(i) > x(j) ? 1.0 : x(i) == x(j) ? 0.5 : 0.0) / (g * g);
        }
      }
    }
    c.Near(brier.values[k].value_or(NAN), sum / 8.0, 1e-12, "Brier t=" + std::to_string(t));
    c.Near(auc.values[k].value_or(NAN), num / (cases * controls), 1e-12,
           "AUC t=" + std::to_string(t));
  }
  double concordant = 0.0;
  double pairs = 0.0;
  for (size_t i = 0; i < data.size(); ++i) {
    for (size_t j = 0; j < data.size(); ++j) {
      if (T[i] < T[j] && D[i] == 1) {
        pairs += 1.0;
        concordant += x(i) > x(j) ? 1.0 : x(i) == x(j) ? 0.5 : 0.0;
      }
    }
  }
  c.Near(ConcordanceIndex(explainer, data), concordant / pairs, 1e-12, "C-index");

  // No censoring: Brier equals the plain mean squared error.
  const SurvivalDataset full({1, 2, 3, 4, 5, 6}, {1, 1, 1, 1, 1, 1},
                             Column({0.3, -0.1, 0.8, 0.2, -0.7, 1.1}), {"x"});
  const Explainer full_explainer = Explain(kFixtureModel, full, grid);
  const MetricCurve mse = BrierScore(full_explainer, full, grid);
  for (size_t k = 0; k < grid.size(); ++k) {
    double sum = 0.0;
    for (size_t i = 0; i < full.size(); ++i) {
      const double y = full.times()[i] > grid[k] ? 1.0 : 0.0;
      const double d = y - FixtureSurvival(full.features()(static_cast<Eigen::Index>(i), 0), grid[k]);
      sum += d * d;
    }
    c.Expect(mse.values[k] == sum / 6.0, "Brier equals MSE at t=" + std::to_string(grid[k]));
  }

  // Perfect model and all-ties model.
  const SurvivalDataset perfect({1, 2, 3, 4, 5, 6}, {1, 1, 1, 1, 1, 1},
                                Column({1, 2, 3, 4, 5, 6}), {"x"});
  const Explainer oracle = Explain(
      [](std::span<const double> v, const TimeGrid& g) {
        std::vector<double> s(g.size());
        for (size_t k = 0; k < g.size(); ++k) s[k] = g[k] < v[0] ? 1.0 : 0.0;
        return s;
      },
      perfect);
  for (const auto& v : BrierScore(oracle, perfect).values) c.Expect(v == 0.0, "perfect BS = 0");
  for (const auto& v : CumulativeDynamicAuc(oracle, perfect).values) {
    if (v) c.Expect(*v == 1.0, "perfect AUC = 1");
  }
  c.Expect(ConcordanceIndex(oracle, perfect) == 1.0, "perfect C = 1");
  const Explainer ties = Explain(
      [](std::span<const double>, const TimeGrid& g) {
        return std::vector<double>(g.size(), 0.5);
      },
      data);
  for (const auto& v : CumulativeDynamicAuc(ties, data).values) {
    if (v) c.Expect(*v == 0.5, "all-ties AUC = 0.5");
  }
  c.Expect(ConcordanceIndex(ties, data) == 0.5, "all-ties C = 0.5");
}

double InteractionSurvival(std::span<const double> x, double t) {
  double lp = 0.7 * x[0];
  if (x.size() > 1) lp += -0.4 * x[1];
  if (x.size() > 2) lp += 0.3 * x[0] * x[2];
  for (size_t j = 3; j < x.size(); ++j) lp += 0.2 * static_cast<double>(j) * x[j];
  return std::exp(-0.05 * t * std::exp(lp));
}

const SurvivalFunction kInteraction = [](std::span<const double> x, const TimeGrid& grid) {
  std::vector<double> s(grid.size());
  for (size_t k = 0; k < grid.size(); ++k) s[k] = InteractionSurvival(x, grid[k]);
  return s;
};

// 4. Shapley axioms and brute-force coalition oracle.
void ShapleyAxioms(Checker& c) {
  for (size_t p : {1u, 2u, 3u}) {
    const SurvivalDataset data = CoxData(30, std::vector<double>(p, 0.5), 100 + p);
    const Explainer explainer = Explain(kInteraction, data);
    const std::vector<double> x = Row(data.features(), 4);
    const SurvShapResult r = PredictPartsSurvShap(explainer, x);
    for (size_t k = 0; k < explainer.grid().size(); ++k) {
      const double t = explainer.grid()[k];
      const auto value = [&](const std::vector<bool>& in) {
        double sum = 0.0;
        for (Eigen::Index b = 0; b < data.features().rows(); ++b) {
          std::vector<double> z = Row(data.features(), b);
          for (size_t j = 0; j < p; ++j) {
            if (in[j]) z[j] = x[j];
          }
          sum += InteractionSurvival(z, t);
        }
        return sum / static_cast<double>(data.size());
      };
      const std::vector<double> oracle = BruteShapley(p, value);
      for (size_t j = 0; j < p; ++j) {
        c.Near(r.phi(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)), oracle[j],
               1e-12, "brute oracle p=" + std::to_string(p));
      }
      c.Near(r.phi.col(static_cast<Eigen::Index>(k)).sum(), r.prediction[k] - r.baseline[k],
             1e-10, "efficiency p=" + std::to_string(p));
    }
  }

  // Null player.
  const SurvivalDataset data3 = CoxData(30, {0.5, 0.5, 0.5}, 301);
  const Explainer null_explainer = Explain(
      [](std::span<const double> x, const TimeGrid& grid) {
        const std::vector<double> z = {x[0], 0.0, x[2]};
        return kInteraction(z, grid);
      },
      data3);
  const SurvShapResult null_r = PredictPartsSurvShap(null_explainer, Row(data3.features(), 0));
  c.Expect(null_r.phi.row(1).cwiseAbs().maxCoeff() == 0.0, "null player is exactly 0");

  // Symmetry.
  Eigen::MatrixXd X = data3.features();
  X.col(1) = X.col(0);
  const Explainer sym = Explain(
      [](std::span<const double> x, const TimeGrid& grid) {
        std::vector<double> s(grid.size());
        for (size_t k = 0; k < grid.size(); ++k) {
          s[k] = std::exp(-0.05 * grid[k] * std::exp(0.6 * (x[0] + x[1]) - 0.3 * x[2]));
        }
        return s;
      },
      data3.WithFeatures(X));
  const SurvShapResult sym_r = PredictPartsSurvShap(sym, std::vector<double>{1.3, 1.3, -0.2});
  c.Expect(sym_r.phi.row(0) == sym_r.phi.row(1), "symmetric players are identical");

  // Sampling at p = 5 against exact, 20 seeds.
  const SurvivalDataset data5 = CoxData(40, std::vector<double>(5, 0.4), 501);
  const Explainer e5 = Explain(kInteraction, data5);
  const std::vector<double> x5 = Row(data5.features(), 7);
  SurvShapOptions exact_options;
  exact_options.method = ShapMethod::kExact;
  const Eigen::MatrixXd exact = PredictPartsSurvShap(e5, x5, exact_options).phi;
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(exact.rows(), exact.cols());
  Eigen::MatrixXd var = mean;
  int within = 0;
  int total = 0;
  for (int s = 0; s < 20; ++s) {
    SurvShapOptions options;
    options.method = ShapMethod::kSampling;
    options.seed = 1000 + static_cast<uint64_t>(s);
    const SurvShapResult r = PredictPartsSurvShap(e5, x5, options);
    mean += r.phi / 20.0;
    var += r.phi_se.cwiseProduct(r.phi_se);
    total += static_cast<int>(r.phi.size());
    within += static_cast<int>(
        ((r.phi - exact).cwiseAbs().array() <= 3.0 * r.phi_se.array() + 1e-12).count());
  }
  c.Expect(within >= 0.95 * total, "per-seed estimates within 3 SE: " +
                                       std::to_string(within) + "/" + std::to_string(total));
  const Eigen::MatrixXd se_mean = var.cwiseSqrt() / 20.0;
  c.Expect(((mean - exact).cwiseAbs().array() <= 3.0 * se_mean.array() + 1e-12).all(),
           "mean over seeds within 3 SE");
}

// 5. SurvLIME recovers a known Cox model.
void SurvLimeRecovery(Checker& c) {
  const std::vector<double> beta = {0.8, -0.5, 0.0};
  const SurvivalDataset data = CoxData(200, beta, 701);
  const Explainer explainer = Explain(
      [beta](std::span<const double> x, const TimeGrid& grid) {
        double lp = 0.0;
        for (size_t j = 0; j < beta.size(); ++j) lp += beta[j] * x[j];
        std::vector<double> s(grid.size());
        for (size_t k = 0; k < grid.size(); ++k) s[k] = std::exp(-0.1 * grid[k] * std::exp(lp));
        return s;
      },
      data);
  const SurvLimeResult r =
      PredictPartsSurvLime(explainer, Row(data.features(), 3), {.n_neighbors = 500, .seed = 42});
  for (size_t j = 0; j < 3; ++j) {
    c.Expect(std::abs(r.surrogate_beta[j] - beta[j]) < 0.1, "coefficient " + std::to_string(j));
  }
  c.Expect(std::abs(r.surrogate_beta[2]) < 0.05, "ignored variable coefficient");
}

// 6. ICE/PDP identity and zero importance of an ignored variable.
void IcePdpIdentity(Checker& c) {
  const SurvivalDataset data = CoxData(40, {0.6, -0.4, 0.3}, 801);
  const Explainer explainer = Explain(kInteraction, data);
  const ProfileSurface pdp = ModelProfile(explainer, "x1");
  const std::vector<double>& grid = pdp.grid_values[0];
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid.size()),
                                              static_cast<Eigen::Index>(pdp.shape[1]));
  for (Eigen::Index i = 0; i < data.features().rows(); ++i) {
    const IceProfile ice = PredictProfile(explainer, Row(data.features(), i), "x1");
    for (size_t g = 0; g < grid.size(); ++g) {
      const auto it = std::find(ice.grid_values.begin(), ice.grid_values.end(), grid[g]);
      if (it == ice.grid_values.end()) {
        c.Expect(false, "ICE grid lacks a PDP grid value");
        return;
      }
      sum.row(static_cast<Eigen::Index>(g)) += ice.curves.row(it - ice.grid_values.begin());
    }
  }
  sum /= static_cast<double>(data.size());
  for (size_t g = 0; g < grid.size(); ++g) {
    for (size_t t = 0; t < pdp.shape[1]; ++t) {
      c.Near(sum(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(t)), pdp.At(g, t),
             1e-12, "mean ICE vs PDP");
    }
  }

  const SurvivalDataset data2 = CoxData(120, {1.0, 0.0}, 17);
  const Explainer first_only = Explain(
      [](std::span<const double> x, const TimeGrid& g) {
        std::vector<double> s(g.size());
        for (size_t k = 0; k < g.size(); ++k) s[k] = std::exp(-0.1 * g[k] * std::exp(x[0]));
        return s;
      },
      data2);
  for (const std::string& loss : LossNames()) {
    const auto parts = ModelParts(first_only, LossAdapter(loss), {.n_permutations = 5});
    for (const auto& v : parts[1].importance) {
      if (v) c.Expect(*v == 0.0, "ignored variable importance (" + loss + ")");
    }
  }
}

// 7. Residual identities.
void ResidualIdentities(Checker& c) {
  const SurvivalDataset data = CoxData(200, {0.9, -0.5}, 71);
  const ResidualSet r = ModelDiagnostics(Explain(FitCox(data), data), data);
  double sum = 0.0;
  for (size_t i = 0; i < data.size(); ++i) {
    c.Expect(r.martingale[i] == static_cast<double>(data.events()[i]) - r.cox_snell[i],
             "martingale = delta - Cox-Snell");
    sum += r.martingale[i];
  }
  c.Expect(std::abs(sum) < 1e-6, "sum of martingale residuals " + std::to_string(sum));

  const SurvivalDataset big = CoxData(500, {1.0, -0.5}, 73);
  const ResidualSet rb = ModelDiagnostics(Explain(FitCox(big), big), big);
  const StepCurve km = KaplanMeier(rb.cox_snell, big.events());
  double worst = 0.0;
  for (double t : km.knots()) {
    worst = std::max({worst, std::abs(km(t) - std::exp(-t)),
                      std::abs(km.LeftLimit(t) - std::exp(-t))});
  }
  c.Expect(worst < 0.1, "KM of Cox-Snell vs exp(-r) sup " + std::to_string(worst));
}

// 8. CLI determinism and round trip, through the installed binary.
void CliDeterminism(Checker& c) {
  const fs::path root = FreshDirectory("acceptance");
  std::vector<std::pair<std::string, fs::path>> produced;
  for (const auto& cc : CliCorpus(SURVLENS_EXAMPLE_CSV)) {
    for (const char* run : {"a", "b"}) {
      const fs::path dir = root / cc.name / run;
      std::string cmd = SURVLENS_CLI_PATH;
      for (const auto& arg : cc.args) cmd += " '" + arg + "'";
      cmd += " --out '" + dir.string() + "' > /dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      c.Expect(status == 0, cc.name + " exit status");
    }
    produced.push_back({cc.name, root / cc.name});
  }
  // plot over two artifacts.
  const fs::path plot_dir = root / "plot";
  for (const char* run : {"a", "b"}) {
    const std::string cmd = std::string(SURVLENS_CLI_PATH) + " plot --input '" +
                            (root / "fit_cox" / "a" / "fit.json").string() + "' --input '" +
                            (root / "fit_km" / "a" / "fit.json").string() + "' --out '" +
                            (plot_dir / run).string() + "' > /dev/null 2>&1";
    c.Expect(std::system(cmd.c_str()) == 0, "plot exit status");
  }
  produced.push_back({"plot", plot_dir});

  for (const auto& [name, dir] : produced) {
    size_t files = 0;
    if (!fs::exists(dir / "a")) continue;
    for (const auto& entry : fs::directory_iterator(dir / "a")) {
      ++files;
      const std::string bytes = ReadFileBytes(entry.path());
      c.Expect(bytes == ReadFileBytes(dir / "b" / entry.path().filename()),
               name + ": " + entry.path().filename().string() + " differs between runs");
      if (entry.path().extension() == ".json") {
        c.Expect(DumpJson(Json::parse(bytes)) == bytes, name + ": JSON round trip");
        const Json j = Json::parse(bytes);
        const std::vector<double> grid = VectorFromJson(j["grid"]);
        c.Expect(ToJson(grid) == j["grid"], name + ": grid round trip");
      }
    }
    c.Expect(files > 0, name + ": no artifacts");
  }
  fs::remove_all(root);
}

struct Criterion {
  const char* name;
  void (*run)(Checker&);
  double limit_seconds;
};

}  // namespace
}  // namespace survlens

int main() {
  using namespace survlens;
  const Criterion criteria[] = {
      {"1 KM/Nelson-Aalen oracle suite", KmNaOracle, 1.0},
      {"2 Cox fitting derivatives and grid-search MLE", CoxFitting, 5.0},
      {"3 metric oracle suite", MetricOracle, 1.0},
      {"4 Shapley axioms", ShapleyAxioms, 30.0},
      {"5 SurvLIME self-recovery", SurvLimeRecovery, 10.0},
      {"6 ICE/PDP identity and ignored-variable importance", IcePdpIdentity, 0.0},
      {"7 residual identities", ResidualIdentities, 0.0},
      {"8 end-to-end CLI determinism", CliDeterminism, 120.0},
  };
  int failed = 0;
  for (const Criterion& criterion : criteria) {
    Checker checker;
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      criterion.run(checker);
    } catch (const std::exception& e) {
      error = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string detail = error.empty() ? checker.Summary() : error;
    bool ok = error.empty() && checker.ok();
    if (criterion.limit_seconds > 0.0 && seconds > criterion.limit_seconds) {
      ok = false;
      detail += "; runtime over " + std::to_string(criterion.limit_seconds) + " s";
    }
    std::printf("%s criterion %s (%.3f s)%s%s\n", ok ? "PASS" : "FAIL", criterion.name,
                seconds, ok ? "" : ": ", ok ? "" : detail.c_str());
    if (!ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
