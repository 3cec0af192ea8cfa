#include "survlens/svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "survlens/errors.h"

namespace survlens {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 200.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;
constexpr int kTicks = 5;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                    "#bcbd22", "#17becf"};

std::string Coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string TickLabel(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string Escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void Add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool empty() const { return lo > hi; }
};

// Pads the range by 5% of its width on both sides; a degenerate range is
// padded by 5% of its magnitude (or 0.05 around zero).
Range Padded(Range r) {
  double pad = 0.05 * (r.hi - r.lo);
  if (pad == 0.0) pad = r.lo == 0.0 ? 0.05 : 0.05 * std::abs(r.lo);
  return {r.lo - pad, r.hi + pad};
}

}  // namespace

std::string RenderSvg(const PlotSpec& spec) {
  Range xr;
  Range yr;
  for (const auto& s : spec.series) {
    if (s.x.size() != s.y.size()) {
      throw InputError("plot series '" + s.label + "' has mismatched x and y");
    }
    for (size_t k = 0; k < s.x.size(); ++k) {
      if (s.y[k] && std::isfinite(s.x[k]) && std::isfinite(*s.y[k])) {
        xr.Add(s.x[k]);
        yr.Add(*s.y[k]);
      }
    }
  }
  if (xr.empty()) throw InputError("nothing to plot: no defined points");
  if (xr.hi == xr.lo) xr = Padded(xr);
  yr = Padded(yr);

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const auto px = [&](double x) {
    return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w;
  };
  const auto py = [&](double y) {
    return kTop + plot_h - (y - yr.lo) / (yr.hi - yr.lo) * plot_h;
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << Coord(kWidth) << "\" height=\"" << Coord(kHeight) << "\" viewBox=\"0 0 "
      << Coord(kWidth) << ' ' << Coord(kHeight) << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << Coord(kWidth) << "\" height=\""
      << Coord(kHeight) << "\" fill=\"white\"/>\n"
      << "<text x=\"" << Coord(kLeft) << "\" y=\"24\" font-family=\"sans-serif\" "
      << "font-size=\"14\">" << Escape(spec.title) << "</text>\n";

  // Axes.
  svg << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << Coord(kLeft) << "\" y1=\"" << Coord(kTop + plot_h)
      << "\" x2=\"" << Coord(kLeft + plot_w) << "\" y2=\"" << Coord(kTop + plot_h)
      << "\"/>\n"
      << "<line x1=\"" << Coord(kLeft) << "\" y1=\"" << Coord(kTop) << "\" x2=\""
      << Coord(kLeft) << "\" y2=\"" << Coord(kTop + plot_h) << "\"/>\n"
      << "</g>\n";
  svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int k = 0; k < kTicks; ++k) {
    const double f = static_cast<double>(k) / (kTicks - 1);
    const double xv = xr.lo + f * (xr.hi - xr.lo);
    const double yv = yr.lo + f * (yr.hi - yr.lo);
    svg << "<line x1=\"" << Coord(px(xv)) << "\" y1=\"" << Coord(kTop + plot_h)
        << "\" x2=\"" << Coord(px(xv)) << "\" y2=\"" << Coord(kTop + plot_h + 5)
        << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << Coord(px(xv)) << "\" y=\"" << Coord(kTop + plot_h + 18)
        << "\" text-anchor=\"middle\">" << TickLabel(xv) << "</text>\n"
        << "<line x1=\"" << Coord(kLeft - 5) << "\" y1=\"" << Coord(py(yv))
        << "\" x2=\"" << Coord(kLeft) << "\" y2=\"" << Coord(py(yv))
        << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << Coord(kLeft - 8) << "\" y=\"" << Coord(py(yv) + 4)
        << "\" text-anchor=\"end\">" << TickLabel(yv) << "</text>\n";
  }
  svg << "<text x=\"" << Coord(kLeft + plot_w / 2) << "\" y=\""
      << Coord(kHeight - 10) << "\" text-anchor=\"middle\">"
      << Escape(spec.x_label) << "</text>\n"
      << "<text x=\"16\" y=\"" << Coord(kTop + plot_h / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << Coord(kTop + plot_h / 2) << ")\">" << Escape(spec.y_label)
      << "</text>\n</g>\n";

  for (size_t s = 0; s < spec.series.size(); ++s) {
    const PlotSeries& series = spec.series[s];
    const char* color = kPalette[s % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (size_t k = 0; k < series.x.size(); ++k) {
      if (!series.y[k] || !std::isfinite(*series.y[k])) continue;
      if (!first) svg << ' ';
      svg << Coord(px(series.x[k])) << ',' << Coord(py(*series.y[k]));
      first = false;
    }
    svg << "\"/>\n";
    const double ly = kTop + 14.0 * static_cast<double>(s) + 6.0;
    const double lx = kLeft + plot_w + 16.0;
    svg << "<line x1=\"" << Coord(lx) << "\" y1=\"" << Coord(ly) << "\" x2=\""
        << Coord(lx + 20) << "\" y2=\"" << Coord(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << Coord(lx + 26) << "\" y=\"" << Coord(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << Escape(series.label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

PlotSpec PlotSpecFromArtifact(const Json& artifact) {
  const std::string command =
      artifact.contains("command") ? artifact["command"].get<std::string>() : "?";
  if (!artifact.contains("plot") || !artifact["plot"].contains("series") ||
      artifact["plot"]["series"].empty()) {
    throw InputError("artifact of command '" + command +
                     "' has no curves to plot (plottable: fit, predict, "
                     "performance, parts, profile, ice, shap, survshap-global)");
  }
  const Json& plot = artifact["plot"];
  PlotSpec spec;
  spec.title = plot.value("title", command);
  spec.x_label = plot.value("x_label", "time");
  spec.y_label = plot.value("y_label", "value");
  for (const auto& s : plot["series"]) {
    spec.series.push_back({s.at("label").get<std::string>(),
                           VectorFromJson(s.at("x")),
                           MetricValuesFromJson(s.at("y"))});
  }
  return spec;
}

std::string EmitSvg(const std::vector<Json>& artifacts) {
  if (artifacts.empty()) throw InputError("no artifact to plot");
  if (artifacts.size() == 1) return RenderSvg(PlotSpecFromArtifact(artifacts[0]));
  std::map<std::string, int> label_count;
  for (const auto& a : artifacts) ++label_count[a.value("label", "artifact")];
  PlotSpec merged;
  for (size_t k = 0; k < artifacts.size(); ++k) {
    PlotSpec spec = PlotSpecFromArtifact(artifacts[k]);
    std::string prefix = artifacts[k].value("label", "artifact");
    if (label_count[prefix] > 1) prefix += " #" + std::to_string(k + 1);
    if (k == 0) {
      merged.title = spec.title;
      merged.x_label = spec.x_label;
      merged.y_label = spec.y_label;
    }
    for (auto& s : spec.series) {
      s.label = prefix + ": " + s.label;
      merged.series.push_back(std::move(s));
    }
  }
  return RenderSvg(merged);
}

}  // namespace survlens
