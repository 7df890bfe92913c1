#pragma once

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

#include "barrierlab/report.hpp"

namespace barrierlab {

struct SvgSeries {
    std::string label;
    std::string color = "#1f6fb2";
    std::vector<double> x, y;
};

/// Minimal standalone line plot; enough for profile and ratio curves without
/// pulling in a plotting dependency.
inline void write_svg(std::ostream& os, const std::vector<SvgSeries>& series, int width = 640,
                      int height = 420) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;
    const double mx = 50, my = 30;
    auto px = [&](double x) { return mx + (x - xmin) / (xmax - xmin) * (width - 2 * mx); };
    auto py = [&](double y) { return height - my - (y - ymin) / (ymax - ymin) * (height - 2 * my); };
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
       << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    os << "<line x1='" << mx << "' y1='" << height - my << "' x2='" << width - mx << "' y2='"
       << height - my << "' stroke='black'/>\n";
    os << "<line x1='" << mx << "' y1='" << my << "' x2='" << mx << "' y2='" << height - my
       << "' stroke='black'/>\n";
    int li = 0;
    for (const auto& s : series) {
        os << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.5' points='";
        for (size_t i = 0; i < s.x.size(); ++i) {
            os << format_double(px(s.x[i])) << ',' << format_double(py(s.y[i]));
            if (i + 1 < s.x.size()) os << ' ';
        }
        os << "'/>\n";
        os << "<text x='" << width - mx - 150 << "' y='" << my + 16 * (li + 1) << "' fill='"
           << s.color << "' font-size='12'>" << s.label << "</text>\n";
        ++li;
    }
    os << "</svg>\n";
}

}  // namespace barrierlab
