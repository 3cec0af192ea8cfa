#include "survlens/io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "survlens/errors.h"

namespace survlens {

namespace {

std::string Trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

// Splits one CSV record. Double quotes enclose fields containing commas;
// "" inside a quoted field is a literal quote.
std::vector<std::string> SplitRecord(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(Trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(Trim(field));
  return fields;
}

std::optional<double> ParseNumber(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (*begin == '+') ++begin;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

SurvivalDataset ReadSurvivalCsv(std::istream& in, const std::string& time_column,
                                const std::string& event_column) {
  if (time_column == event_column) {
    throw InputError("time column and event column must differ");
  }
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (!Trim(line).empty()) {
      header = SplitRecord(line);
      break;
    }
  }
  if (header.empty()) throw InputError("CSV file is empty");
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) {
    header[0] = header[0].substr(3);
  }

  std::optional<size_t> time_index;
  std::optional<size_t> event_index;
  std::vector<size_t> feature_columns;
  std::vector<std::string> feature_names;
  for (size_t c = 0; c < header.size(); ++c) {
    if (header[c] == time_column) {
      time_index = c;
    } else if (header[c] == event_column) {
      event_index = c;
    } else {
      feature_columns.push_back(c);
      feature_names.push_back(header[c]);
    }
  }
  if (!time_index) throw InputError("missing column '" + time_column + "'");
  if (!event_index) throw InputError("missing column '" + event_column + "'");

  std::vector<double> times;
  std::vector<int> events;
  std::vector<std::vector<double>> rows;
  size_t row = 0;
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    ++row;
    const std::vector<std::string> fields = SplitRecord(line);
    if (fields.size() != header.size()) {
      throw InputError("row " + std::to_string(row) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(header.size()));
    }
    const auto cell = [&](size_t c) {
      if (fields[c].empty()) {
        throw InputError("missing value at row " + std::to_string(row) +
                         ", column '" + header[c] + "'");
      }
      const auto value = ParseNumber(fields[c]);
      if (!value) {
        throw InputError("non-numeric value '" + fields[c] + "' at row " +
                         std::to_string(row) + ", column '" + header[c] + "'");
      }
      return *value;
    };
    const double t = cell(*time_index);
    if (t < 0.0) {
      throw InputError("negative time at row " + std::to_string(row));
    }
    const double e = cell(*event_index);
    if (e != 0.0 && e != 1.0) {
      throw InputError("event column must be 0/1 (row " + std::to_string(row) +
                       ")");
    }
    times.push_back(t);
    events.push_back(static_cast<int>(e));
    std::vector<double> features;
    features.reserve(feature_columns.size());
    for (size_t c : feature_columns) features.push_back(cell(c));
    rows.push_back(std::move(features));
  }
  if (rows.empty()) throw InputError("CSV file has no data rows");

  Eigen::MatrixXd features(static_cast<Eigen::Index>(rows.size()),
                           static_cast<Eigen::Index>(feature_columns.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) {
      features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  return SurvivalDataset(std::move(times), std::move(events),
                         std::move(features), std::move(feature_names));
}

SurvivalDataset ReadSurvivalCsvFile(const std::string& path,
                                    const std::string& time_column,
                                    const std::string& event_column) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open data file '" + path + "'");
  return ReadSurvivalCsv(in, time_column, event_column);
}

Json ToJson(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

Json ToJson(const std::optional<double>& value) {
  return value ? ToJson(*value) : Json(nullptr);
}

Json ToJson(const std::vector<double>& values) {
  Json j = Json::array();
  for (double v : values) j.push_back(ToJson(v));
  return j;
}

Json ToJson(const MetricValues& values) {
  Json j = Json::array();
  for (const auto& v : values) j.push_back(ToJson(v));
  return j;
}

Json ToJson(const Eigen::MatrixXd& matrix) {
  Json j = Json::array();
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      row.push_back(ToJson(matrix(r, c)));
    }
    j.push_back(std::move(row));
  }
  return j;
}

namespace {

Json VectorJson(const Eigen::VectorXd& v) {
  return ToJson(std::vector<double>(v.data(), v.data() + v.size()));
}

Json SummaryJson(const FitSummary& s) {
  return {{"converged", s.converged},
          {"diverged", s.diverged},
          {"iterations", s.iterations},
          {"log_likelihood", ToJson(s.log_likelihood)}};
}

const Json& Field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(std::string("artifact is missing field '") + key + "'");
  }
  return j.at(key);
}

}  // namespace

Json ToJson(const StepCurve& curve) {
  return {{"kind", CurveKindName(curve.kind())},
          {"knots", ToJson(curve.knots())},
          {"values", ToJson(curve.values())}};
}

Json ToJson(const MetricCurve& curve) {
  return {{"metric", curve.metric_name},
          {"grid", ToJson(curve.grid)},
          {"values", ToJson(curve.values)},
          {"integrated", ToJson(curve.integrated)}};
}

Json ToJson(const RocCurve& roc) {
  Json points = Json::array();
  for (const auto& p : roc.points) {
    points.push_back({{"fpr", ToJson(p.fpr)},
                      {"tpr", ToJson(p.tpr)},
                      {"threshold", ToJson(p.threshold)}});
  }
  return {{"time", ToJson(roc.time)},
          {"positives", roc.positives},
          {"negatives", roc.negatives},
          {"auc", ToJson(roc.Auc())},
          {"points", std::move(points)}};
}

Json ToJson(const CoxModel& model) {
  return {{"model", "cox"},
          {"beta", VectorJson(model.beta)},
          {"feature_means", VectorJson(model.feature_means)},
          {"baseline_chf", ToJson(model.baseline_chf)},
          {"fit", SummaryJson(model.summary)}};
}

Json ToJson(const WeibullAftModel& model) {
  return {{"model", "weibull_aft"},
          {"shape", ToJson(model.shape)},
          {"intercept", ToJson(model.intercept)},
          {"coefficients", VectorJson(model.coefficients)},
          {"fit", SummaryJson(model.summary)}};
}

Json ToJson(const KaplanMeierModel& model) {
  return {{"model", "km"}, {"curve", ToJson(model.curve)}};
}

Json ToJson(const VariableImportance& importance) {
  Json reps = Json::array();
  for (const auto& r : importance.repetitions) reps.push_back(ToJson(r));
  return {{"variable", importance.variable},
          {"baseline_loss", ToJson(importance.baseline_loss)},
          {"permuted_loss", ToJson(importance.permuted_loss)},
          {"importance", ToJson(importance.importance)},
          {"repetitions", std::move(reps)},
          {"n_permutations", importance.n_permutations},
          {"seed", importance.seed}};
}

Json ToJson(const ProfileSurface& profile) {
  Json grids = Json::array();
  for (const auto& g : profile.grid_values) grids.push_back(ToJson(g));
  return {{"variables", profile.variables},
          {"grid_values", std::move(grids)},
          {"times", ToJson(profile.times)},
          {"method", ProfileMethodName(profile.method)},
          {"output_type", OutputTypeName(profile.output_type)},
          {"shape", profile.shape},
          {"values", ToJson(profile.values)}};
}

Json ToJson(const ResidualSet& residuals) {
  Json deviance = Json::array();
  for (const auto& d : residuals.deviance) deviance.push_back(ToJson(d));
  return {{"observed_times", ToJson(residuals.observed_times)},
          {"events", residuals.events},
          {"cox_snell", ToJson(residuals.cox_snell)},
          {"martingale", ToJson(residuals.martingale)},
          {"deviance", std::move(deviance)}};
}

Json ToJson(const SurvShapResult& result) {
  return {{"instance", ToJson(result.instance)},
          {"times", ToJson(result.times)},
          {"output_type", OutputTypeName(result.output_type)},
          {"method", ShapMethodName(result.method)},
          {"n_samples", result.n_samples},
          {"seed", result.seed},
          {"baseline", ToJson(result.baseline)},
          {"prediction", ToJson(result.prediction)},
          {"phi", ToJson(result.phi)},
          {"phi_se", ToJson(result.phi_se)},
          {"aggregate", ToJson(result.aggregate)}};
}

Json ToJson(const SurvLimeResult& result) {
  return {{"instance", ToJson(result.instance)},
          {"surrogate_beta", ToJson(result.surrogate_beta)},
          {"neighborhood_size", result.neighborhood_size},
          {"kernel_width", ToJson(result.kernel_width)},
          {"fit_residual", ToJson(result.fit_residual)},
          {"degenerate", result.degenerate}};
}

Json ToJson(const IceProfile& profile) {
  return {{"variable", profile.variable},
          {"grid_values", ToJson(profile.grid_values)},
          {"times", ToJson(profile.times)},
          {"output_type", OutputTypeName(profile.output_type)},
          {"observed_value", ToJson(profile.observed_value)},
          {"curves", ToJson(profile.curves)}};
}

Json ToJson(const GlobalSurvShap& result) {
  Json beeswarm = Json::array();
  for (const auto& b : result.beeswarm) {
    beeswarm.push_back({{"instance", b.instance},
                        {"variable", b.variable},
                        {"feature_value", ToJson(b.feature_value)},
                        {"aggregate", ToJson(b.aggregate)},
                        {"signed_mean", ToJson(b.signed_mean)}});
  }
  Json instances = Json::array();
  for (const auto& r : result.per_instance) instances.push_back(ToJson(r));
  return {{"importance_ranking", ToJson(result.importance_ranking)},
          {"order", result.order},
          {"mean_abs_phi", ToJson(result.mean_abs_phi)},
          {"beeswarm", std::move(beeswarm)},
          {"per_instance", std::move(instances)}};
}

double DoubleFromJson(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) throw InputError("expected a number in artifact");
  return j.get<double>();
}

std::vector<double> VectorFromJson(const Json& j) {
  if (!j.is_array()) throw InputError("expected an array in artifact");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(DoubleFromJson(v));
  return out;
}

MetricValues MetricValuesFromJson(const Json& j) {
  if (!j.is_array()) throw InputError("expected an array in artifact");
  MetricValues out;
  out.reserve(j.size());
  for (const auto& v : j) {
    out.push_back(v.is_null() ? std::nullopt
                              : std::optional<double>(DoubleFromJson(v)));
  }
  return out;
}

Eigen::MatrixXd MatrixFromJson(const Json& j) {
  if (!j.is_array()) throw InputError("expected a matrix in artifact");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::vector<double> row = VectorFromJson(j[static_cast<size_t>(r)]);
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw InputError("ragged matrix in artifact");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      out(r, c) = row[static_cast<size_t>(c)];
    }
  }
  return out;
}

StepCurve StepCurveFromJson(const Json& j) {
  const std::string kind = Field(j, "kind").get<std::string>();
  CurveKind k = CurveKind::kGeneric;
  if (kind == "survival") k = CurveKind::kSurvival;
  if (kind == "chf") k = CurveKind::kChf;
  return StepCurve(VectorFromJson(Field(j, "knots")),
                   VectorFromJson(Field(j, "values")), k);
}

MetricCurve MetricCurveFromJson(const Json& j) {
  MetricCurve curve;
  curve.metric_name = Field(j, "metric").get<std::string>();
  curve.grid = VectorFromJson(Field(j, "grid"));
  curve.values = MetricValuesFromJson(Field(j, "values"));
  const Json& integrated = Field(j, "integrated");
  if (!integrated.is_null()) curve.integrated = DoubleFromJson(integrated);
  return curve;
}

RocCurve RocCurveFromJson(const Json& j) {
  RocCurve roc;
  roc.time = DoubleFromJson(Field(j, "time"));
  roc.positives = Field(j, "positives").get<size_t>();
  roc.negatives = Field(j, "negatives").get<size_t>();
  for (const auto& p : Field(j, "points")) {
    const Json& threshold = Field(p, "threshold");
    roc.points.push_back({DoubleFromJson(Field(p, "fpr")),
                          DoubleFromJson(Field(p, "tpr")),
                          threshold.is_null()
                              ? std::numeric_limits<double>::infinity()
                              : DoubleFromJson(threshold)});
  }
  return roc;
}

ProfileSurface ProfileSurfaceFromJson(const Json& j) {
  ProfileSurface profile;
  profile.variables = Field(j, "variables").get<std::vector<std::string>>();
  for (const auto& g : Field(j, "grid_values")) {
    profile.grid_values.push_back(VectorFromJson(g));
  }
  profile.times = VectorFromJson(Field(j, "times"));
  profile.method = ParseProfileMethod(Field(j, "method").get<std::string>());
  profile.output_type =
      ParseOutputType(Field(j, "output_type").get<std::string>());
  profile.shape = Field(j, "shape").get<std::vector<size_t>>();
  profile.values = VectorFromJson(Field(j, "values"));
  return profile;
}

ResidualSet ResidualSetFromJson(const Json& j) {
  ResidualSet residuals;
  residuals.observed_times = VectorFromJson(Field(j, "observed_times"));
  residuals.events = Field(j, "events").get<std::vector<int>>();
  residuals.cox_snell = VectorFromJson(Field(j, "cox_snell"));
  residuals.martingale = VectorFromJson(Field(j, "martingale"));
  residuals.deviance = MetricValuesFromJson(Field(j, "deviance"));
  return residuals;
}

SurvShapResult SurvShapResultFromJson(const Json& j) {
  SurvShapResult result;
  result.instance = VectorFromJson(Field(j, "instance"));
  result.times = VectorFromJson(Field(j, "times"));
  result.output_type =
      ParseOutputType(Field(j, "output_type").get<std::string>());
  result.method = ParseShapMethod(Field(j, "method").get<std::string>());
  result.n_samples = Field(j, "n_samples").get<size_t>();
  result.seed = Field(j, "seed").get<uint64_t>();
  result.baseline = VectorFromJson(Field(j, "baseline"));
  result.prediction = VectorFromJson(Field(j, "prediction"));
  result.phi = MatrixFromJson(Field(j, "phi"));
  result.phi_se = MatrixFromJson(Field(j, "phi_se"));
  result.aggregate = VectorFromJson(Field(j, "aggregate"));
  return result;
}

std::string DumpJson(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace survlens
