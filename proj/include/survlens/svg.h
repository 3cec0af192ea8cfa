#ifndef SURVLENS_SVG_H_
#define SURVLENS_SVG_H_

#include <optional>
#include <string>
#include <vector>

#include "survlens/io.h"

namespace survlens {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  // Undefined points are skipped.
  std::vector<std::optional<double>> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label = "time";
  std::string y_label = "value";
  std::vector<PlotSeries> series;
};

// Static SVG 1.1 line chart: one polyline per series, five ticks per axis,
// a legend with one entry per series. The y range is padded by 5% on each
// side. Output depends only on the input.
std::string RenderSvg(const PlotSpec& spec);

// Reads the "plot" block of an artifact envelope. Throws InputError when the
// artifact carries no curves.
PlotSpec PlotSpecFromArtifact(const Json& artifact);

// Merges several artifacts into one chart, prefixing series labels with the
// artifact label when more than one artifact is given.
std::string EmitSvg(const std::vector<Json>& artifacts);

}  // namespace survlens

#endif  // SURVLENS_SVG_H_
