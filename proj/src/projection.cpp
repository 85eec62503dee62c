#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include "sprachbund/error.hpp"
#include "sprachbund/io.hpp"
#include "sprachbund/projection.hpp"

namespace sprachbund {

using nlohmann::json;

std::vector<Point2> minmax_normalize(std::span<const Point2> points) {
  std::vector<Point2> out(points.begin(), points.end());
  if (out.empty()) {
    return out;
  }
  for (std::size_t axis = 0; axis < 2; ++axis) {
    double lo = out.front()[axis], hi = out.front()[axis];
    for (const auto& p : out) {
      lo = std::min(lo, p[axis]);
      hi = std::max(hi, p[axis]);
    }
    const double span = hi - lo;
    for (auto& p : out) {
      if (span > 0.0) {
        p[axis] = (p[axis] == hi) ? 1.0 : (p[axis] - lo) / span;
      } else {
        p[axis] = 0.5;
      }
    }
  }
  return out;
}

Projection2D minmax_normalize(std::vector<std::string> languages, std::span<const Point2> points, json params) {
  if (languages.size() != points.size()) {
    throw DataError("projection: " + std::to_string(languages.size()) + " languages but " +
                    std::to_string(points.size()) + " points");
  }
  if (points.empty()) {
    throw DataError("projection: nothing to normalize");
  }
  return {std::move(languages), minmax_normalize(points), std::move(params)};
}

json Projection2D::to_json() const {
  json xy = json::array();
  for (const auto& p : points) {
    xy.push_back({p[0], p[1]});
  }
  return {{"v", kSchemaVersion}, {"languages", languages}, {"xy", std::move(xy)}, {"params", params}};
}

Projection2D Projection2D::from_json(const json& doc) {
  require_schema_version(doc, "projection");
  Projection2D out;
  try {
    out.languages = doc.at("languages").get<std::vector<std::string>>();
    for (const auto& p : doc.at("xy")) {
      out.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    if (doc.contains("params")) {
      out.params = doc["params"];
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("projection: ") + e.what());
  }
  if (out.languages.size() != out.points.size()) {
    throw DataError("projection: one point per language required");
  }
  return out;
}

namespace {

constexpr const char* kMissingColor = "#b0b0b0";

// 24 distinguishable colors; categories beyond that cycle.
constexpr const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
    "#bcbd22", "#393b79", "#637939", "#8c6d31", "#843c39", "#7b4173", "#3182bd", "#e6550d",
    "#31a354", "#756bb1", "#636363", "#fd8d3c", "#74c476", "#9e9ac8", "#ad494a", "#6baed6",
};

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

PlotOutput emit_plot(const Projection2D& projection, const Registry& registry, const std::string& color_by,
                     const PlotStyle& style) {
  const bool by_family = color_by == "family";
  if (!by_family && !registry.feature_names().contains(color_by)) {
    throw UsageError("unknown color attribute \"" + color_by + "\" (use \"family\" or a syntax feature name)");
  }
  std::vector<std::optional<std::string>> category;
  for (const auto& code : projection.languages) {
    const auto* rec = registry.find(code);
    if (rec == nullptr) {
      throw DataError("projected language \"" + code + "\" is not registered");
    }
    category.push_back(by_family ? rec->family : rec->feature(color_by));
  }
  std::set<std::string> present;
  for (const auto& c : category) {
    if (c) {
      present.insert(*c);
    }
  }
  std::map<std::string, std::string> colors;
  PlotOutput out;
  for (const auto& c : present) {
    colors[c] = kPalette[out.legend.size() % std::size(kPalette)];
    out.legend.push_back(c);
  }

  // Plot area on the left, legend column on the right.
  constexpr double kLeft = 40.0, kTop = 40.0, kWidth = 700.0, kHeight = 920.0, kLegendX = 780.0;
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\" width=\"1000\" height=\"1000\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"white\"/>\n";
  svg += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(kWidth) + "\" height=\"" +
         fmt(kHeight) + "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
  svg += "<g font-family=\"sans-serif\" font-size=\"" + fmt(style.font_size) + "\">\n";

  json points = json::array();
  for (std::size_t i = 0; i < projection.languages.size(); ++i) {
    const auto& p = projection.points[i];
    const double cx = kLeft + p[0] * kWidth;
    const double cy = kTop + (1.0 - p[1]) * kHeight;
    const std::string color = category[i] ? colors[*category[i]] : kMissingColor;
    const std::string code = xml_escape(projection.languages[i]);
    svg += "<circle cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"" + fmt(style.point_radius) + "\" fill=\"" +
           color + "\"><title>" + code + "</title></circle>\n";
    svg += "<text x=\"" + fmt(cx + style.point_radius + 2.0) + "\" y=\"" + fmt(cy + style.font_size / 3.0) +
           "\">" + code + "</text>\n";
    points.push_back({{"code", projection.languages[i]},
                      {"x", p[0]},
                      {"y", p[1]},
                      {"category", category[i] ? json(*category[i]) : json(nullptr)},
                      {"color", color}});
  }
  svg += "</g>\n";

  json legend = json::array();
  svg += "<g font-family=\"sans-serif\" font-size=\"" + fmt(style.font_size) + "\">\n";
  svg += "<text x=\"" + fmt(kLegendX) + "\" y=\"" + fmt(kTop) + "\" font-weight=\"bold\">" + xml_escape(color_by) +
         "</text>\n";
  for (std::size_t i = 0; i < out.legend.size(); ++i) {
    const double y = kTop + (static_cast<double>(i) + 1.0) * (style.font_size * 1.6);
    const auto& name = out.legend[i];
    svg += "<circle cx=\"" + fmt(kLegendX + style.point_radius) + "\" cy=\"" + fmt(y - style.font_size / 3.0) +
           "\" r=\"" + fmt(style.point_radius) + "\" fill=\"" + colors[name] + "\"/>\n";
    svg += "<text x=\"" + fmt(kLegendX + 2.0 * style.point_radius + 6.0) + "\" y=\"" + fmt(y) + "\">" +
           xml_escape(name) + "</text>\n";
    legend.push_back({{"category", name}, {"color", colors[name]}});
  }
  svg += "</g>\n</svg>\n";

  out.svg = std::move(svg);
  out.data = {{"v", kSchemaVersion},
              {"color_by", color_by},
              {"legend", std::move(legend)},
              {"points", std::move(points)},
              {"params", projection.params}};
  return out;
}

}  // namespace sprachbund
