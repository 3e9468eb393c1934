#pragma once

#include <string>
#include <vector>

namespace rlab {

struct SvgSeries {
  std::string label;
  std::vector<double> values;  // one value per step, NaN entries skipped
};

/// Self-contained SVG line chart with a log-scale y axis and a dashed
/// vertical marker (the training-horizon boundary). Deterministic output for
/// identical inputs.
std::string render_log_curve_svg(const std::vector<SvgSeries>& series, int marker_step,
                                 const std::string& title, const std::string& y_label);

}  // namespace rlab
