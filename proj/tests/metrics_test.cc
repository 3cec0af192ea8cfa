#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "survlens/errors.h"
#include "survlens/explainer.h"
#include "survlens/metrics.h"
#include "survlens/numeric.h"
#include "test_util.h"

namespace survlens {
namespace {

using ::survlens::testing::BruteCensoringSurvival;

// S(t|x) = exp(-0.1 t e^x), so x orders the risk.
double FixtureSurvival(double x, double t) { return std::exp(-0.1 * t * std::exp(x)); }

const SurvivalFunction kFixtureModel = [](std::span<const double> x,
                                          const TimeGrid& grid) {
  std::vector<double> s(grid.size());
  for (size_t k = 0; k < grid.size(); ++k) s[k] = FixtureSurvival(x[0], grid[k]);
  return s;
};

SurvivalDataset Fixture(std::vector<double> times, std::vector<int> events,
                        std::vector<double> x) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(x.size()), 1);
  for (size_t i = 0; i < x.size(); ++i) X(static_cast<Eigen::Index>(i), 0) = x[i];
  return SurvivalDataset(std::move(times), std::move(events), std::move(X), {"x"});
}

// 8 rows with ties in time and in risk, censoring interleaved.
SurvivalDataset EightRows() {
  return Fixture({1, 2, 2, 3, 4, 5, 6, 7}, {1, 0, 1, 1, 0, 1, 1, 0},
                 {0.5, -0.2, 0.3, 1.0, 0.3, -1.0, -0.5, 0.1});
}

Explainer FixtureExplainer(const SurvivalDataset& data,
                           RiskFunction risk = [](std::span<const double> x) {
                             return x[0];
                           }) {
  return Explain(kFixtureModel, data, TimeGrid({1.5, 2, 3, 4.5, 6}), "fixture",
                 std::move(risk));
}

TEST(BrierScoreTest, MatchesTermEnumeration) {
  for (const SurvivalDataset& data :
       {EightRows(), Fixture({2, 3, 3, 5, 8}, {1, 0, 1, 1, 0},
                             {0.2, -0.4, 0.9, 0.0, -1.2})}) {
    const Explainer explainer = FixtureExplainer(data);
    const MetricCurve curve = BrierScore(explainer, data, explainer.grid());
    for (size_t k = 0; k < explainer.grid().size(); ++k) {
      const double t = explainer.grid()[k];
      double sum = 0.0;
      for (size_t i = 0; i < data.size(); ++i) {
        const double ti = data.times()[i];
        const double s = FixtureSurvival(data.features()(static_cast<Eigen::Index>(i), 0), t);
        if (ti <= t && data.events()[i] == 1) {
          sum += s * s / BruteCensoringSurvival(data.times(), data.events(), ti, true);
        } else if (ti > t) {
          sum += (1 - s) * (1 - s) /
                 BruteCensoringSurvival(data.times(), data.events(), t, false);
        }
      }
      ASSERT_TRUE(curve.values[k].has_value());
      EXPECT_NEAR(*curve.values[k], sum / static_cast<double>(data.size()), 1e-12);
    }
  }
}

TEST(BrierScoreTest, EqualsPlainMseWithoutCensoring) {
  const SurvivalDataset data =
      Fixture({1, 2, 3, 4, 5, 6}, {1, 1, 1, 1, 1, 1}, {0.3, -0.1, 0.8, 0.2, -0.7, 1.1});
  const Explainer explainer = FixtureExplainer(data);
  const MetricCurve curve = BrierScore(explainer, data, explainer.grid());
  for (size_t k = 0; k < explainer.grid().size(); ++k) {
    const double t = explainer.grid()[k];
    double sum = 0.0;
    for (size_t i = 0; i < data.size(); ++i) {
      const double y = data.times()[i] > t ? 1.0 : 0.0;
      const double d = y - FixtureSurvival(data.features()(static_cast<Eigen::Index>(i), 0), t);
      sum += d * d;
    }
    EXPECT_EQ(*curve.values[k], sum / 6.0);
  }
}

// S(t|x) = 1(t < x): the observed time itself is the feature.
const SurvivalFunction kOracleModel = [](std::span<const double> x,
                                         const TimeGrid& grid) {
  std::vector<double> s(grid.size());
  for (size_t k = 0; k < grid.size(); ++k) s[k] = grid[k] < x[0] ? 1.0 : 0.0;
  return s;
};

TEST(MetricsTest, PerfectModel) {
  const SurvivalDataset data =
      Fixture({1, 2, 3, 4, 5, 6}, {1, 1, 1, 1, 1, 1}, {1, 2, 3, 4, 5, 6});
  const Explainer explainer = Explain(kOracleModel, data);
  const MetricCurve brier = BrierScore(explainer, data);
  for (const auto& v : brier.values) EXPECT_EQ(*v, 0.0);
  const MetricCurve auc = CumulativeDynamicAuc(explainer, data);
  for (size_t k = 0; k + 1 < auc.values.size(); ++k) EXPECT_EQ(*auc.values[k], 1.0);
  // No subject survives past the last event time.
  EXPECT_FALSE(auc.values.back().has_value());
  EXPECT_EQ(ConcordanceIndex(explainer, data), 1.0);
  EXPECT_EQ(RocAtTime(explainer, data, 3.0).Auc(), 1.0);
}

TEST(MetricsTest, AllTies) {
  const SurvivalDataset data = EightRows();
  const Explainer explainer = Explain(
      [](std::span<const double>, const TimeGrid& grid) {
        return std::vector<double>(grid.size(), 0.5);
      },
      data);
  const MetricCurve auc = CumulativeDynamicAuc(explainer, data);
  for (const auto& v : auc.values) {
    if (v) EXPECT_EQ(*v, 0.5);
  }
  EXPECT_EQ(*auc.integrated, 0.5);
  EXPECT_EQ(ConcordanceIndex(explainer, data), 0.5);
  const RocCurve roc = RocAtTime(explainer, data, 3.0);
  EXPECT_EQ(roc.points.size(), 2u);
  EXPECT_EQ(roc.Auc(), 0.5);
}

TEST(BrierScoreTest, ConstantHalfGivesQuarter) {
  const SurvivalDataset data =
      Fixture({1, 2, 3, 4, 5, 6}, {1, 1, 1, 1, 1, 1}, {0, 0, 0, 0, 0, 0});
  const Explainer explainer = Explain(
      [](std::span<const double>, const TimeGrid& grid) {
        return std::vector<double>(grid.size(), 0.5);
      },
      data);
  for (const auto& v : BrierScore(explainer, data).values) EXPECT_EQ(*v, 0.25);
}

TEST(MetricsTest, PerfectRiskScores) {
  const SurvivalDataset data =
      Fixture({1, 2, 3, 4, 5, 6}, {1, 1, 1, 1, 1, 1}, {1, 2, 3, 4, 5, 6});
  const Explainer explainer = Explain(
      kFixtureModel, data, TimeGrid({1, 2, 3}), "minus_time",
      [](std::span<const double> x) { return -x[0]; });
  EXPECT_EQ(ConcordanceIndex(explainer, data), 1.0);
  EXPECT_EQ(*LossAdapter("one_minus_cindex").eval(explainer, data)[0], 0.0);
  const RocCurve roc = RocFromScores(data, 3.0, {6, 5, 4, 3, 2, 1});
  bool corner = false;
  for (const RocPoint& point : roc.points) corner |= point.fpr == 0.0 && point.tpr == 1.0;
  EXPECT_TRUE(corner);
  EXPECT_EQ(roc.Auc(), 1.0);
}

TEST(LossAdapterTest, AllTiesAucLossIsHalf) {
  const SurvivalDataset data = EightRows();
  const Explainer explainer = Explain(
      [](std::span<const double>, const TimeGrid& grid) {
        return std::vector<double>(grid.size(), 0.5);
      },
      data);
  EXPECT_EQ(*LossAdapter("cd_auc_integrated").eval(explainer, data)[0], 0.5);
}

TEST(CumulativeDynamicAucTest, MatchesPairEnumeration) {
  const SurvivalDataset data = Fixture({1, 1.5, 2, 2, 3, 4}, {1, 0, 1, 1, 0, 1},
                                       {0.4, 0.9, 0.4, -0.3, 0.0, -0.8});
  const Explainer explainer = FixtureExplainer(data);
  const TimeGrid grid({1, 2, 2.5, 3.5});
  const MetricCurve curve = CumulativeDynamicAuc(explainer, data, grid);
  const auto& t_ = data.times();
  const auto& d_ = data.events();
  for (size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    double num = 0.0;
    double cases = 0.0;
    double controls = 0.0;
    for (size_t j = 0; j < data.size(); ++j) controls += t_[j] > t ? 1.0 : 0.0;
    for (size_t i = 0; i < data.size(); ++i) {
      if (!(t_[i] <= t && d_[i] == 1)) continue;
      const double g = BruteCensoringSurvival(t_, d_, t_[i], true);
      const double w = 1.0 / (g * g);
      cases += w;
      for (size_t j = 0; j < data.size(); ++j) {
        if (!(t_[j] > t)) continue;
        const double ri = data.features()(static_cast<Eigen::Index>(i), 0);
        const double rj = data.features()(static_cast<Eigen::Index>(j), 0);
        num += w * (ri > rj ? 1.0 : ri == rj ? 0.5 : 0.0);
      }
    }
    ASSERT_TRUE(curve.values[k].has_value()) << "t=" << t;
    EXPECT_NEAR(*curve.values[k], num / (cases * controls), 1e-12);
  }
}

TEST(ConcordanceTest, MatchesPairEnumeration) {
  for (const SurvivalDataset& data :
       {EightRows(), Fixture({1, 1.5, 2, 2, 3, 4}, {1, 0, 1, 1, 0, 1},
                             {0.4, 0.9, 0.4, -0.3, 0.0, -0.8})}) {
    const Explainer explainer = FixtureExplainer(data);
    double concordant = 0.0;
    double pairs = 0.0;
    for (size_t i = 0; i < data.size(); ++i) {
      for (size_t j = 0; j < data.size(); ++j) {
        if (!(data.times()[i] < data.times()[j] && data.events()[i] == 1)) continue;
        const double ri = data.features()(static_cast<Eigen::Index>(i), 0);
        const double rj = data.features()(static_cast<Eigen::Index>(j), 0);
        pairs += 1.0;
        concordant += ri > rj ? 1.0 : ri == rj ? 0.5 : 0.0;
      }
    }
    EXPECT_NEAR(ConcordanceIndex(explainer, data), concordant / pairs, 1e-12);
  }
}

TEST(ConcordanceTest, NoComparablePairsIsNumericError) {
  const SurvivalDataset data = Fixture({1, 2}, {0, 0}, {0.1, 0.2});
  EXPECT_THROW(ConcordanceIndexFromRisk(data, Eigen::VectorXd::Zero(2)),
               NumericError);
}

TEST(RocTest, MatchesSortAndCount) {
  const SurvivalDataset data = EightRows();
  const Explainer explainer = FixtureExplainer(data);
  const double t = 3.0;  // a grid point
  const RocCurve roc = RocAtTime(explainer, data, t);
  std::vector<double> pos;
  std::vector<double> neg;
  for (size_t i = 0; i < data.size(); ++i) {
    const double score =
        1.0 - FixtureSurvival(data.features()(static_cast<Eigen::Index>(i), 0), t);
    if (data.times()[i] <= t && data.events()[i] == 1) {
      pos.push_back(score);
    } else if (data.times()[i] > t) {
      neg.push_back(score);
    }
  }
  // Row 2 (censored at 2 < 3) is excluded.
  EXPECT_EQ(roc.positives, pos.size());
  EXPECT_EQ(roc.negatives, neg.size());
  EXPECT_EQ(pos.size() + neg.size(), 7u);
  double wins = 0.0;
  for (double a : pos) {
    for (double b : neg) wins += a > b ? 1.0 : a == b ? 0.5 : 0.0;
  }
  EXPECT_NEAR(roc.Auc(), wins / static_cast<double>(pos.size() * neg.size()), 1e-12);
  for (const RocPoint& point : roc.points) {
    double tp = 0.0;
    double fp = 0.0;
    for (double a : pos) tp += a >= point.threshold ? 1.0 : 0.0;
    for (double b : neg) fp += b >= point.threshold ? 1.0 : 0.0;
    EXPECT_NEAR(point.tpr, tp / static_cast<double>(pos.size()), 1e-12);
    EXPECT_NEAR(point.fpr, fp / static_cast<double>(neg.size()), 1e-12);
  }
  EXPECT_EQ(roc.points.back().fpr, 0.0);
  EXPECT_EQ(roc.points.front().fpr, 1.0);
  EXPECT_EQ(roc.points.front().tpr, 1.0);
}

TEST(RocTest, EmptyClassIsNumericError) {
  const SurvivalDataset data = EightRows();
  EXPECT_THROW(RocAtTime(FixtureExplainer(data), data, 0.5), NumericError);
}

TEST(MetricsTest, RankMetricsInvariantUnderIncreasingTransform) {
  const SurvivalDataset data = EightRows();
  const Explainer plain = FixtureExplainer(data);
  const Explainer transformed = FixtureExplainer(
      data, [](std::span<const double> x) { return std::exp(3.0 * x[0]) + 5.0; });
  EXPECT_EQ(ConcordanceIndex(plain, data), ConcordanceIndex(transformed, data));
  const MetricCurve a = CumulativeDynamicAuc(plain, data);
  const MetricCurve b = CumulativeDynamicAuc(transformed, data);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.integrated, b.integrated);
}

TEST(TrapezoidTest, DuplicatePointsDoNotChangeIntegral) {
  const std::vector<double> x = {1, 2, 4, 7};
  const std::vector<double> y = {0.1, 0.3, 0.2, 0.25};
  const std::vector<double> x2 = {1, 2, 2, 4, 7};
  const std::vector<double> y2 = {0.1, 0.3, 0.3, 0.2, 0.25};
  const double expected = (0.5 * 1 * 0.4 + 0.5 * 2 * 0.5 + 0.5 * 3 * 0.45) / 6.0;
  EXPECT_NEAR(*TrapezoidMean(x, y), expected, 1e-15);
  EXPECT_EQ(*TrapezoidMean(x, y), *TrapezoidMean(x2, y2));
}

TEST(TrapezoidTest, SkipsUndefinedPoints) {
  const std::vector<double> x = {1, 2, 3};
  const MetricValues y = {0.5, std::nullopt, 0.7};
  EXPECT_DOUBLE_EQ(*TrapezoidMean(x, y), 0.6);
  EXPECT_FALSE(TrapezoidMean(x, MetricValues{0.5, std::nullopt, std::nullopt}));
}

TEST(LossAdapterTest, OrientationAndDefinitions) {
  const SurvivalDataset data = EightRows();
  const Explainer explainer = FixtureExplainer(data);
  EXPECT_EQ(*LossAdapter("brier_integrated").eval(explainer, data)[0],
            *BrierScore(explainer, data).integrated);
  EXPECT_EQ(LossAdapter("brier_curve").eval(explainer, data),
            BrierScore(explainer, data).values);
  EXPECT_EQ(*LossAdapter("one_minus_cindex").eval(explainer, data)[0],
            1.0 - ConcordanceIndex(explainer, data));
  EXPECT_EQ(*LossAdapter("one_minus_cindex", LossDirection::kNative)
                 .eval(explainer, data)[0],
            ConcordanceIndex(explainer, data));
  EXPECT_EQ(*LossAdapter("cd_auc_integrated").eval(explainer, data)[0],
            1.0 - *CumulativeDynamicAuc(explainer, data).integrated);
  EXPECT_TRUE(LossAdapter("brier_curve").curve_valued);
  EXPECT_THROW(LossAdapter("accuracy"), InputError);
}

}  // namespace
}  // namespace survlens
