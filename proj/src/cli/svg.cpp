#include "ccr/cli/svg.hpp"

#include <fmt/format.h>

namespace ccr::cli {

namespace {

constexpr double kSize = 400.0;
constexpr double kLeft = 60.0;
constexpr double kTop = 40.0;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};

std::string escape_xml(const std::string& text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

double px(double fpr) { return kLeft + fpr * kSize; }
double py(double tpr) { return kTop + (1.0 - tpr) * kSize; }

}  // namespace

std::string render_roc_svg(std::span<const LabeledCurve> curves, const std::string& title) {
  const double legend_height = 20.0 * static_cast<double>(curves.size());
  const double width = kLeft + kSize + 30.0;
  const double height = kTop + kSize + 60.0 + legend_height;

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" viewBox=\"0 0 {0:.0f} "
      "{1:.0f}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      width, height);
  svg += fmt::format("<rect width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n", width, height);
  svg += fmt::format("<text x=\"{:.1f}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                     kLeft + kSize / 2, escape_xml(title));
  svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", kLeft,
                     kTop, kSize, kSize);
  for (int tick = 0; tick <= 5; ++tick) {
    const double v = tick / 5.0;
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.1f}</text>\n", px(v),
                       kTop + kSize + 16, v);
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.1f}</text>\n", kLeft - 6, py(v) + 4,
                       v);
  }
  svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">False positive rate</text>\n",
                     kLeft + kSize / 2, kTop + kSize + 34);
  svg += fmt::format(
      "<text x=\"16\" y=\"{:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1f})\">True positive "
      "rate</text>\n",
      kTop + kSize / 2, kTop + kSize / 2);
  svg += fmt::format(
      "<line class=\"diagonal\" x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"gray\" "
      "stroke-dasharray=\"4 4\"/>\n",
      px(0), py(0), px(1), py(1));

  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto* color = kColors[i % std::size(kColors)];
    std::string points;
    for (const auto& p : curves[i].curve.points) {
      if (!points.empty()) points.push_back(' ');
      points += fmt::format("{:.2f},{:.2f}", px(p.fpr), py(p.tpr));
    }
    svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n", color, points);
    const double y = kTop + kSize + 56 + 20.0 * static_cast<double>(i);
    svg += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"{3}\" "
                       "stroke-width=\"2\"/>\n",
                       kLeft, y - 4, kLeft + 24, color);
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{} (AUC = {:.4f})</text>\n", kLeft + 30, y,
                       escape_xml(curves[i].label), curves[i].curve.auc);
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace ccr::cli
