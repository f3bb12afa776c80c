#pragma once

#include <string>
#include <vector>

namespace toa::cli {

/// Minimal SVG scatter plot: x = point index, y = value, with a zero line.
std::string scatter_svg(const std::vector<double>& values, const std::string& title);

}  // namespace toa::cli
