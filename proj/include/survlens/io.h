#ifndef SURVLENS_IO_H_
#define SURVLENS_IO_H_

#include <istream>
#include <string>

#include "json.hpp"
#include "survlens/dataset.h"
#include "survlens/global_explain.h"
#include "survlens/local_explain.h"
#include "survlens/metrics.h"
#include "survlens/models.h"
#include "survlens/step_curve.h"

namespace survlens {

using Json = nlohmann::ordered_json;

// Reads a header-first CSV. `time_column` and `event_column` are required;
// every other column becomes a numeric feature in file order. Rows are
// numbered from 1 (first data row) in error messages.
SurvivalDataset ReadSurvivalCsv(std::istream& in, const std::string& time_column,
                                const std::string& event_column);
SurvivalDataset ReadSurvivalCsvFile(const std::string& path,
                                    const std::string& time_column,
                                    const std::string& event_column);

// JSON conversions. Doubles are written in shortest round-trip form and
// non-finite values as null, so parsing a document restores every finite
// value bit for bit.
Json ToJson(double value);
Json ToJson(const std::optional<double>& value);
Json ToJson(const std::vector<double>& values);
Json ToJson(const MetricValues& values);
Json ToJson(const Eigen::MatrixXd& matrix);
Json ToJson(const StepCurve& curve);
Json ToJson(const MetricCurve& curve);
Json ToJson(const RocCurve& roc);
Json ToJson(const CoxModel& model);
Json ToJson(const WeibullAftModel& model);
Json ToJson(const KaplanMeierModel& model);
Json ToJson(const VariableImportance& importance);
Json ToJson(const ProfileSurface& profile);
Json ToJson(const ResidualSet& residuals);
Json ToJson(const SurvShapResult& result);
Json ToJson(const SurvLimeResult& result);
Json ToJson(const IceProfile& profile);
Json ToJson(const GlobalSurvShap& result);

double DoubleFromJson(const Json& j);
std::vector<double> VectorFromJson(const Json& j);
MetricValues MetricValuesFromJson(const Json& j);
Eigen::MatrixXd MatrixFromJson(const Json& j);
StepCurve StepCurveFromJson(const Json& j);
MetricCurve MetricCurveFromJson(const Json& j);
RocCurve RocCurveFromJson(const Json& j);
ProfileSurface ProfileSurfaceFromJson(const Json& j);
ResidualSet ResidualSetFromJson(const Json& j);
SurvShapResult SurvShapResultFromJson(const Json& j);

// Serialized form used for every artifact written to disk.
std::string DumpJson(const Json& j);

}  // namespace survlens

#endif  // SURVLENS_IO_H_
