#pragma once

#include <string>

namespace scrip {

/// Renders a CSV dataset as a self-contained SVG. Styles: "line" (first
/// column against the second), "step" (staircase plus the y=x diagonal,
/// second and third columns as a band), "series2" (columns 1 and 3 against
/// column 0), "points" (markers plus line). An empty dataset produces an
/// empty-axes plot and a warning on stderr.
void emit_plot(const std::string& csvPath, const std::string& style,
               const std::string& svgPath);

}  // namespace scrip
