#include "svg.hpp"

#include <algorithm>
#include <sstream>

namespace toa::cli {

std::string scatter_svg(const std::vector<double>& values, const std::string& title) {
    constexpr double width = 640.0;
    constexpr double height = 400.0;
    constexpr double margin = 40.0;

    double lo = 0.0;
    double hi = 0.0;
    for (const double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi == lo) hi = lo + 1.0;
    const double span_x = std::max<double>(1.0, static_cast<double>(values.size()) - 1.0);
    auto px = [&](std::size_t i) { return margin + (width - 2 * margin) * static_cast<double>(i) / span_x; };
    auto py = [&](double v) { return height - margin - (height - 2 * margin) * (v - lo) / (hi - lo); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n"
        << "<text x=\"" << margin << "\" y=\"20\" font-size=\"14\">" << title << "</text>\n"
        << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
        << height - margin << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << height - margin
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << margin << "\" y1=\"" << py(0.0) << "\" x2=\"" << width - margin << "\" y2=\"" << py(0.0)
        << "\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n"
        << "<text x=\"4\" y=\"" << margin << "\" font-size=\"10\">" << hi << "</text>\n"
        << "<text x=\"4\" y=\"" << height - margin << "\" font-size=\"10\">" << lo << "</text>\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        svg << "<circle cx=\"" << px(i) << "\" cy=\"" << py(values[i]) << "\" r=\"2.5\" fill=\""
            << (values[i] < 0.0 ? "firebrick" : "steelblue") << "\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace toa::cli
