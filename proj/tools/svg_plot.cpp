#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace rlab {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(int exponent) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "1e%d", exponent);
  return buf;
}

}  // namespace

std::string render_log_curve_svg(const std::vector<SvgSeries>& series, int marker_step,
                                 const std::string& title, const std::string& y_label) {
  const double width = 760, height = 480;
  const double left = 70, right = 30, top = 40, bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const double floor_value = 1e-12;

  int steps = 1;
  double lo = 1e300, hi = -1e300;
  for (const SvgSeries& s : series) {
    steps = std::max(steps, static_cast<int>(s.values.size()));
    for (double v : s.values) {
      if (std::isnan(v)) continue;
      double clamped = std::max(v, floor_value);
      lo = std::min(lo, clamped);
      hi = std::max(hi, clamped);
    }
  }
  if (hi < lo) {
    lo = 1e-3;
    hi = 1.0;
  }
  int exp_lo = static_cast<int>(std::floor(std::log10(lo)));
  int exp_hi = static_cast<int>(std::ceil(std::log10(hi)));
  if (exp_hi <= exp_lo) exp_hi = exp_lo + 1;

  auto x_of = [&](double step) { return left + plot_w * (step - 1) / std::max(1, steps - 1); };
  auto y_of = [&](double value) {
    double l = std::log10(std::max(value, floor_value));
    return top + plot_h * (exp_hi - l) / (exp_hi - exp_lo);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\""
      << " font-size=\"16\">" << title << "</text>\n";

  // Decade gridlines.
  for (int e = exp_lo; e <= exp_hi; ++e) {
    double y = y_of(std::pow(10.0, e));
    svg << "<line x1=\"" << left << "\" y1=\"" << fmt(y) << "\" x2=\"" << width - right
        << "\" y2=\"" << fmt(y) << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << left - 8 << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt_tick(e)
        << "</text>\n";
  }
  // X ticks at powers of two.
  for (int x = 1; x <= steps; x *= 2) {
    double px = x_of(x);
    svg << "<line x1=\"" << fmt(px) << "\" y1=\"" << top + plot_h << "\" x2=\"" << fmt(px)
        << "\" y2=\"" << top + plot_h + 5 << "\" stroke=\"#333333\"/>\n";
    svg << "<text x=\"" << fmt(px) << "\" y=\"" << top + plot_h + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << x
        << "</text>\n";
  }

  // Axes.
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << top + plot_h << "\" stroke=\"#333333\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << width - right
      << "\" y2=\"" << top + plot_h << "\" stroke=\"#333333\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">step</text>\n";
  svg << "<text x=\"18\" y=\"" << top + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 18 "
      << top + plot_h / 2 << ")\">" << y_label << "</text>\n";

  // Training-horizon marker.
  if (marker_step > 0 && marker_step <= steps) {
    double px = x_of(marker_step);
    svg << "<line x1=\"" << fmt(px) << "\" y1=\"" << top << "\" x2=\"" << fmt(px) << "\" y2=\""
        << top + plot_h << "\" stroke=\"#555555\" stroke-dasharray=\"6,4\"/>\n";
  }

  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::ostringstream points;
    bool pen_down = false;
    for (size_t i = 0; i < series[s].values.size(); ++i) {
      double v = series[s].values[i];
      if (std::isnan(v)) continue;
      points << (pen_down ? " L" : "M") << fmt(x_of(static_cast<double>(i + 1))) << ' '
             << fmt(y_of(v));
      pen_down = true;
    }
    svg << "<path d=\"" << points.str() << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.8\"/>\n";
    double ly = top + 16 + 16 * static_cast<double>(s);
    svg << "<line x1=\"" << width - right - 150 << "\" y1=\"" << fmt(ly - 4) << "\" x2=\""
        << width - right - 126 << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << width - right - 120 << "\" y=\"" << fmt(ly)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[s].label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace rlab
