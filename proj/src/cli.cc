#include "survlens/cli.h"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "survlens/errors.h"
#include "survlens/estimators.h"
#include "survlens/explainer.h"
#include "survlens/global_explain.h"
#include "survlens/io.h"
#include "survlens/local_explain.h"
#include "survlens/metrics.h"
#include "survlens/models.h"
#include "survlens/svg.h"

namespace survlens {

namespace {

const std::vector<std::string> kCommands = {
    "fit",         "predict", "performance", "parts",
    "profile",     "profile2d", "diagnostics", "shap",
    "lime",        "ice",     "survshap-global", "plot"};

struct RunConfig {
  std::string command;
  std::string data_path;
  std::string time_column = "time";
  std::string event_column = "event";
  std::string model = "cox";
  std::string label;
  std::vector<std::string> variables;
  std::vector<double> at_times;
  std::vector<double> times;
  uint64_t seed = 42;
  std::string out_dir = ".";
  bool emit_svg = false;
  std::string output_type = "survival";
  std::optional<size_t> grid_size;
  size_t n_background = 100;
  std::optional<size_t> n_permutations;
  std::optional<std::string> method;
  std::string loss = "brier_integrated";
  bool ratio = false;
  size_t n_neighbors = 100;
  size_t row = 1;
  size_t n_instances = 0;
  size_t threads = 1;
  int max_iter = 50;
  double tol = 1e-9;
  std::vector<std::string> inputs;

  Json Echo() const {
    Json j = {{"data", data_path},
              {"time_column", time_column},
              {"event_column", event_column},
              {"model", model},
              {"label", label},
              {"seed", seed},
              {"output_type", output_type},
              {"max_iter", max_iter},
              {"tol", tol}};
    if (!times.empty()) j["times"] = times;
    return j;
  }
};

// Fitted model of any built-in kind.
struct FittedModel {
  std::optional<CoxModel> cox;
  std::optional<WeibullAftModel> weibull;
  std::optional<KaplanMeierModel> km;

  Json ToJsonValue() const {
    if (cox) return ToJson(*cox);
    if (weibull) return ToJson(*weibull);
    return ToJson(*km);
  }
};

FittedModel Fit(const RunConfig& config, const SurvivalDataset& data) {
  const FitOptions options{config.max_iter, config.tol};
  FittedModel fitted;
  if (config.model == "cox") {
    fitted.cox = FitCox(data, options);
  } else if (config.model == "weibull_aft") {
    fitted.weibull = FitWeibullAft(data, options);
  } else if (config.model == "km") {
    fitted.km = FitKaplanMeier(data);
  } else {
    throw InputError("unknown model '" + config.model +
                     "' (expected km, cox or weibull_aft)");
  }
  return fitted;
}

Explainer MakeExplainer(const RunConfig& config, const FittedModel& fitted,
                        const SurvivalDataset& data) {
  std::optional<TimeGrid> grid;
  if (!config.times.empty()) grid = TimeGrid(config.times);
  const std::string& label = config.label;
  if (fitted.cox) return Explain(*fitted.cox, data, grid, label);
  if (fitted.weibull) return Explain(*fitted.weibull, data, grid, label);
  return Explain(*fitted.km, data, grid, label);
}

std::vector<double> Row(const SurvivalDataset& data, size_t row) {
  if (row < 1 || row > data.size()) {
    throw InputError("--row " + std::to_string(row) + " is outside 1.." +
                     std::to_string(data.size()));
  }
  const Eigen::RowVectorXd x =
      data.features().row(static_cast<Eigen::Index>(row - 1));
  return std::vector<double>(x.data(), x.data() + x.size());
}

const std::string& RequireVariable(const RunConfig& config, size_t count) {
  if (config.variables.size() != count) {
    throw InputError("command '" + config.command + "' needs exactly " +
                     std::to_string(count) + " --variable flag(s)");
  }
  return config.variables[0];
}

std::string FormatNumber(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

Json Series(const std::string& label, const std::vector<double>& x,
            const Json& y) {
  return {{"label", label}, {"x", ToJson(x)}, {"y", y}};
}

Json Series(const std::string& label, const std::vector<double>& x,
            const std::vector<double>& y) {
  return Series(label, x, ToJson(y));
}

std::vector<double> MatrixRow(const Eigen::MatrixXd& m, Eigen::Index r) {
  const Eigen::RowVectorXd row = m.row(r);
  return std::vector<double>(row.data(), row.data() + row.size());
}

Json PlotBlock(const std::string& title, const std::string& x_label,
               const std::string& y_label, Json series) {
  return {{"title", title},
          {"x_label", x_label},
          {"y_label", y_label},
          {"series", std::move(series)}};
}

// Lines of a (grid value x time) surface, one per grid value; falls back to
// a single line over the grid values when there is one column (risk).
Json SurfaceSeries(const std::string& variable,
                   const std::vector<double>& grid_values,
                   const std::vector<double>& times,
                   const Eigen::MatrixXd& values) {
  Json series = Json::array();
  if (values.cols() == 1) {
    series.push_back(Series(variable, grid_values, MatrixRow(values.transpose(), 0)));
    return series;
  }
  for (Eigen::Index g = 0; g < values.rows(); ++g) {
    series.push_back(Series(
        variable + "=" + FormatNumber(grid_values[static_cast<size_t>(g)]),
        times, MatrixRow(values, g)));
  }
  return series;
}

struct CommandOutput {
  Json result;
  std::vector<double> grid;
  std::optional<Json> plot;
};

CommandOutput RunFit(const RunConfig& config, const SurvivalDataset& data,
                     const FittedModel& fitted, const Explainer& explainer) {
  CommandOutput out;
  out.result = fitted.ToJsonValue();
  out.grid = explainer.grid().points();
  const Eigen::RowVectorXd means = data.features().colwise().mean();
  const std::vector<double> curve = explainer.PredictSurvival(
      std::span<const double>(means.data(), means.size()));
  Json series = Json::array();
  series.push_back(Series("survival at feature means", out.grid, curve));
  out.plot = PlotBlock(config.model + " fit", "time", "survival", series);
  return out;
}

CommandOutput RunPredict(const RunConfig& config, const SurvivalDataset& data,
                         const Explainer& explainer) {
  const OutputType type = ParseOutputType(config.output_type);
  const Eigen::MatrixXd predictions = explainer.Predict(data.features(), type);
  CommandOutput out;
  out.grid = explainer.grid().points();
  out.result = {{"output_type", OutputTypeName(type)},
                {"times", type == OutputType::kRisk ? Json::array()
                                                    : ToJson(out.grid)},
                {"predictions", ToJson(predictions)}};
  if (type != OutputType::kRisk) {
    Json series = Json::array();
    const Eigen::Index shown = std::min<Eigen::Index>(predictions.rows(), 10);
    for (Eigen::Index r = 0; r < shown; ++r) {
      series.push_back(Series("row " + std::to_string(r + 1), out.grid,
                              MatrixRow(predictions, r)));
    }
    out.plot = PlotBlock("predictions", "time", std::string(OutputTypeName(type)),
                         series);
  }
  return out;
}

CommandOutput RunPerformance(const RunConfig& config,
                             const SurvivalDataset& data,
                             const Explainer& explainer) {
  (void)config;
  const MetricCurve brier = BrierScore(explainer, data);
  const MetricCurve auc = CumulativeDynamicAuc(explainer, data);
  const double c_index = ConcordanceIndex(explainer, data);
  std::vector<double> roc_times = config.at_times;
  if (roc_times.empty()) {
    roc_times.push_back(explainer.grid()[explainer.grid().size() / 2]);
  }
  Json rocs = Json::array();
  for (double t : roc_times) rocs.push_back(ToJson(RocAtTime(explainer, data, t)));

  CommandOutput out;
  out.grid = explainer.grid().points();
  out.result = {{"brier_score", ToJson(brier)},
                {"cd_auc", ToJson(auc)},
                {"c_index", ToJson(c_index)},
                {"roc", std::move(rocs)}};
  Json series = Json::array();
  series.push_back(Series("brier_score", brier.grid, ToJson(brier.values)));
  series.push_back(Series("cd_auc", auc.grid, ToJson(auc.values)));
  out.plot = PlotBlock("performance", "time", "metric", series);
  return out;
}

CommandOutput RunParts(const RunConfig& config, const Explainer& explainer) {
  const Loss loss = LossAdapter(config.loss);
  ModelPartsOptions options;
  options.n_permutations = static_cast<int>(config.n_permutations.value_or(10));
  options.seed = config.seed;
  options.num_threads = config.threads;
  const std::vector<VariableImportance> parts =
      ModelParts(explainer, loss, options);

  CommandOutput out;
  out.grid = explainer.grid().points();
  Json variables = Json::array();
  Json series = Json::array();
  for (const auto& vi : parts) {
    Json entry = ToJson(vi);
    if (config.ratio) {
      MetricValues ratio(vi.baseline_loss.size());
      for (size_t k = 0; k < ratio.size(); ++k) {
        if (vi.baseline_loss[k] && vi.permuted_loss[k] &&
            *vi.baseline_loss[k] != 0.0) {
          ratio[k] = *vi.permuted_loss[k] / *vi.baseline_loss[k];
        }
      }
      entry["ratio"] = ToJson(ratio);
    }
    variables.push_back(std::move(entry));
    if (loss.curve_valued) {
      series.push_back(Series(vi.variable, out.grid, ToJson(vi.importance)));
    }
  }
  out.result = {{"loss", loss.name},
                {"curve_valued", loss.curve_valued},
                {"n_permutations", options.n_permutations},
                {"variables", std::move(variables)}};
  if (loss.curve_valued) {
    out.plot = PlotBlock("permutation importance", "time",
                         "loss increase", series);
  }
  return out;
}

CommandOutput RunProfile(const RunConfig& config, const Explainer& explainer) {
  const std::string& variable = RequireVariable(config, 1);
  ProfileOptions options;
  options.method = ParseProfileMethod(config.method.value_or("pdp"));
  options.grid_size = config.grid_size;
  options.n_background = config.n_background;
  options.output_type = ParseOutputType(config.output_type);
  options.seed = config.seed;
  const ProfileSurface profile = ModelProfile(explainer, variable, options);

  CommandOutput out;
  out.grid = explainer.grid().points();
  out.result = ToJson(profile);
  const Eigen::MatrixXd values = Eigen::Map<const Eigen::Matrix<
      double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      profile.values.data(), static_cast<Eigen::Index>(profile.shape[0]),
      static_cast<Eigen::Index>(profile.shape[1]));
  const bool risk = options.output_type == OutputType::kRisk;
  out.plot = PlotBlock(std::string(ProfileMethodName(options.method)) + " of " +
                           variable,
                       risk ? variable : "time",
                       std::string(OutputTypeName(options.output_type)),
                       SurfaceSeries(variable, profile.grid_values[0],
                                     profile.times, values));
  return out;
}

CommandOutput RunProfile2d(const RunConfig& config, const Explainer& explainer) {
  RequireVariable(config, 2);
  Profile2dOptions options;
  options.grid_size = config.grid_size.value_or(10);
  options.n_background = config.n_background;
  options.output_type = ParseOutputType(config.output_type);
  options.seed = config.seed;
  CommandOutput out;
  out.grid = explainer.grid().points();
  out.result = ToJson(ModelProfile2d(explainer, config.variables[0],
                                     config.variables[1], options));
  return out;
}

CommandOutput RunDiagnostics(const SurvivalDataset& data,
                             const Explainer& explainer) {
  CommandOutput out;
  out.grid = explainer.grid().points();
  out.result = ToJson(ModelDiagnostics(explainer, data));
  return out;
}

SurvShapOptions ShapOptions(const RunConfig& config) {
  SurvShapOptions options;
  options.n_background = config.n_background;
  options.method = ParseShapMethod(config.method.value_or("auto"));
  options.n_permutations = config.n_permutations.value_or(100);
  options.output_type = ParseOutputType(config.output_type);
  options.seed = config.seed;
  return options;
}

Json PhiSeries(const std::vector<std::string>& names,
               const std::vector<double>& times, const Eigen::MatrixXd& phi) {
  Json series = Json::array();
  for (Eigen::Index j = 0; j < phi.rows(); ++j) {
    series.push_back(
        Series(names[static_cast<size_t>(j)], times, MatrixRow(phi, j)));
  }
  return series;
}

CommandOutput RunShap(const RunConfig& config, const SurvivalDataset& data,
                      const Explainer& explainer) {
  const std::vector<double> x = Row(data, config.row);
  const SurvShapResult result =
      PredictPartsSurvShap(explainer, x, ShapOptions(config));
  CommandOutput out;
  out.grid = explainer.grid().points();
  out.result = ToJson(result);
  out.result["row"] = config.row;
  out.result["variables"] = data.feature_names();
  if (result.times.size() > 1) {
    out.plot = PlotBlock("SurvSHAP(t) for row " + std::to_string(config.row),
                         "time", "attribution",
                         PhiSeries(data.feature_names(), result.times, result.phi));
  }
  return out;
}

CommandOutput RunLime(const RunConfig& config, const SurvivalDataset& data,
                      const Explainer& explainer) {
  SurvLimeOptions options;
  options.n_neighbors = config.n_neighbors;
  options.seed = config.seed;
  const SurvLimeResult result =
      PredictPartsSurvLime(explainer, Row(data, config.row), options);
  CommandOutput out;
  out.grid = explainer.grid().points();
  out.result = ToJson(result);
  out.result["row"] = config.row;
  out.result["variables"] = data.feature_names();
  return out;
}

CommandOutput RunIce(const RunConfig& config, const SurvivalDataset& data,
                     const Explainer& explainer) {
  const std::string& variable = RequireVariable(config, 1);
  IceOptions options;
  options.grid_size = config.grid_size.value_or(25);
  options.output_type = ParseOutputType(config.output_type);
  const IceProfile profile =
      PredictProfile(explainer, Row(data, config.row), variable, options);
  CommandOutput out;
  out.grid = explainer.grid().points();
  out.result = ToJson(profile);
  out.result["row"] = config.row;
  const bool risk = options.output_type == OutputType::kRisk;
  out.plot = PlotBlock("ICE of " + variable + " for row " +
                           std::to_string(config.row),
                       risk ? variable : "time",
                       std::string(OutputTypeName(options.output_type)),
                       SurfaceSeries(variable, profile.grid_values,
                                     profile.times, profile.curves));
  return out;
}

CommandOutput RunGlobalShap(const RunConfig& config, const SurvivalDataset& data,
                            const Explainer& explainer) {
  const size_t m = config.n_instances == 0
                       ? data.size()
                       : std::min(config.n_instances, data.size());
  const Eigen::MatrixXd X =
      data.features().topRows(static_cast<Eigen::Index>(m));
  const GlobalSurvShap result =
      ModelSurvShap(explainer, X, ShapOptions(config), config.threads);
  CommandOutput out;
  out.grid = explainer.grid().points();
  out.result = ToJson(result);
  out.result["variables"] = data.feature_names();
  const std::vector<double>& times = result.per_instance[0].times;
  if (times.size() > 1) {
    out.plot = PlotBlock("mean |SurvSHAP(t)|", "time", "mean |attribution|",
                         PhiSeries(data.feature_names(), times,
                                   result.mean_abs_phi));
  }
  return out;
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open artifact '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("artifact '" + path + "' is not valid JSON: " + e.what());
  }
}

void WriteFile(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

int Dispatch(RunConfig config, std::ostream& out) {
  const std::filesystem::path out_dir(config.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw InputError("cannot create output directory '" + config.out_dir +
                     "': " + ec.message());
  }

  if (config.command == "plot") {
    if (config.inputs.empty()) throw InputError("plot needs --input <artifact>");
    std::vector<Json> artifacts;
    for (const auto& path : config.inputs) artifacts.push_back(ReadJsonFile(path));
    const auto path = out_dir / "plot.svg";
    WriteFile(path, EmitSvg(artifacts));
    out << path.string() << "\n";
    return kExitOk;
  }

  if (config.data_path.empty()) {
    throw InputError("command '" + config.command + "' needs --data <path>");
  }
  if (config.label.empty()) config.label = config.model;
  const SurvivalDataset data = ReadSurvivalCsvFile(
      config.data_path, config.time_column, config.event_column);
  const FittedModel fitted = Fit(config, data);
  const Explainer explainer = MakeExplainer(config, fitted, data);

  Json params = Json::object();
  CommandOutput result;
  const std::string& c = config.command;
  if (c == "fit") {
    result = RunFit(config, data, fitted, explainer);
  } else if (c == "predict") {
    result = RunPredict(config, data, explainer);
  } else if (c == "performance") {
    params["at_time"] = config.at_times;
    result = RunPerformance(config, data, explainer);
  } else if (c == "parts") {
    params = {{"loss", config.loss},
              {"n_permutations", config.n_permutations.value_or(10)},
              {"threads", config.threads},
              {"ratio", config.ratio}};
    result = RunParts(config, explainer);
  } else if (c == "profile") {
    params = {{"variable", config.variables},
              {"method", config.method.value_or("pdp")},
              {"grid_size", config.grid_size ? Json(*config.grid_size) : Json()},
              {"n_background", config.n_background}};
    result = RunProfile(config, explainer);
  } else if (c == "profile2d") {
    params = {{"variable", config.variables},
              {"grid_size", config.grid_size.value_or(10)},
              {"n_background", config.n_background}};
    result = RunProfile2d(config, explainer);
  } else if (c == "diagnostics") {
    result = RunDiagnostics(data, explainer);
  } else if (c == "shap" || c == "survshap-global") {
    params = {{"method", config.method.value_or("auto")},
              {"n_background", config.n_background},
              {"n_permutations", config.n_permutations.value_or(100)}};
    if (c == "shap") {
      params["row"] = config.row;
      result = RunShap(config, data, explainer);
    } else {
      params["n_instances"] = config.n_instances;
      params["threads"] = config.threads;
      result = RunGlobalShap(config, data, explainer);
    }
  } else if (c == "lime") {
    params = {{"row", config.row}, {"n_neighbors", config.n_neighbors}};
    result = RunLime(config, data, explainer);
  } else if (c == "ice") {
    params = {{"row", config.row},
              {"variable", config.variables},
              {"grid_size", config.grid_size.value_or(25)}};
    result = RunIce(config, data, explainer);
  } else {
    throw InputError("unknown command '" + c + "'");
  }

  Json config_echo = config.Echo();
  config_echo["parameters"] = std::move(params);
  Json envelope = {{"tool_version", kToolVersion},
                   {"command", c},
                   {"label", config.label},
                   {"config", std::move(config_echo)},
                   {"grid", ToJson(result.grid)},
                   {"result", std::move(result.result)}};
  if (result.plot) envelope["plot"] = std::move(*result.plot);

  const auto json_path = out_dir / (c + ".json");
  WriteFile(json_path, DumpJson(envelope));
  out << json_path.string() << "\n";
  if (config.emit_svg) {
    const auto svg_path = out_dir / (c + ".svg");
    WriteFile(svg_path, EmitSvg({envelope}));
    out << svg_path.string() << "\n";
  }
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Model-agnostic explanations for survival models.",
               "survival-explain"};
  RunConfig config;
  app.add_option("command", config.command, "Command to run")
      ->required()
      ->check(CLI::IsMember(kCommands));
  app.add_option("--data", config.data_path, "Input CSV with a header row");
  app.add_option("--time-col", config.time_column, "Name of the time column")
      ->capture_default_str();
  app.add_option("--event-col", config.event_column,
                 "Name of the event column (0/1)")
      ->capture_default_str();
  app.add_option("--model", config.model, "km, cox or weibull_aft")
      ->capture_default_str();
  app.add_option("--label", config.label, "Label of the explainer");
  app.add_option("--variable", config.variables,
                 "Variable to explain (repeat for profile2d)");
  app.add_option("--at-time", config.at_times, "ROC time points (performance)");
  app.add_option("--times", config.times,
                 "Explicit time grid, comma separated")
      ->delimiter(',');
  app.add_option("--seed", config.seed, "Random seed")->capture_default_str();
  app.add_option("--out", config.out_dir, "Output directory")
      ->capture_default_str();
  app.add_flag("--svg", config.emit_svg, "Also write an SVG chart");
  app.add_option("--output-type", config.output_type, "survival, chf or risk")
      ->capture_default_str();
  app.add_option("--grid-size", config.grid_size,
                 "Profile grid points (pdp 25, ale bins 10, 2-D 10, ice 25)");
  app.add_option("--n-background", config.n_background,
                 "Background rows used by profiles and SurvSHAP")
      ->capture_default_str();
  app.add_option("--n-permutations", config.n_permutations,
                 "Permutations (parts 10, SurvSHAP sampling 100)");
  app.add_option("--method", config.method,
                 "profile: pdp|ale; shap: auto|exact|sampling");
  app.add_option("--loss", config.loss,
                 "brier_integrated, brier_curve, cd_auc_integrated, "
                 "one_minus_cindex")
      ->capture_default_str();
  app.add_flag("--ratio", config.ratio,
               "parts: also report permuted/baseline loss ratios");
  app.add_option("--n-neighbors", config.n_neighbors, "SurvLIME neighborhood")
      ->capture_default_str();
  app.add_option("--row", config.row, "Data row to explain (1-based)")
      ->capture_default_str();
  app.add_option("--n-instances", config.n_instances,
                 "survshap-global: first N rows (0 = all)")
      ->capture_default_str();
  app.add_option("--threads", config.threads, "Worker threads")
      ->capture_default_str();
  app.add_option("--max-iter", config.max_iter, "Newton iterations")
      ->capture_default_str();
  app.add_option("--tol", config.tol, "Newton tolerance")->capture_default_str();
  app.add_option("--input", config.inputs, "plot: artifact JSON file(s)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    return Dispatch(std::move(config), out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumericError;
  } catch (const Json::exception& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumericError;
  }
}

}  // namespace survlens
