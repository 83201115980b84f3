#pragma once

#include "npisim/interface/simulation.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace npisim::interface {

/// Static line chart of one series with stay-at-home windows drawn as bars
/// along the top edge.
inline void write_svg(std::ostream& out, const SimResponse& r, const std::string& series = "daily_confirmed")
{
    constexpr double width = 800, height = 400, left = 60, right = 20, top = 30, bottom = 40;
    const auto& ys = r.result.at(series);
    const std::size_t n = ys.size();
    const double ymax = std::max(1e-12, *std::max_element(ys.begin(), ys.end()));
    auto x = [&](std::size_t i) { return left + (width - left - right) * static_cast<double>(i) / static_cast<double>(n - 1); };
    auto y = [&](double v) { return height - bottom - (height - top - bottom) * v / ymax; };

    char buf[128];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    const auto& stay = r.result.at("stay_at_home");
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (stay[i] > 0.5) {
            std::snprintf(buf, sizeof buf, "<rect x=\"%.2f\" y=\"8\" width=\"%.2f\" height=\"8\" fill=\"#d95f02\"/>\n",
                          x(i), x(i + 1) - x(i));
            out << buf;
        }
    }

    out << "<polyline fill=\"none\" stroke=\"#1b9e77\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", x(i), y(ys[i]));
        out << buf;
    }
    out << "\"/>\n";

    std::snprintf(buf, sizeof buf, "%.6g", ymax);
    out << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
        << height - bottom << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"4\" y=\"" << top + 4 << "\" font-size=\"11\">" << buf << "</text>\n";
    out << "<text x=\"4\" y=\"" << height - bottom << "\" font-size=\"11\">0</text>\n";
    out << "<text x=\"" << left << "\" y=\"" << height - 10 << "\" font-size=\"11\">"
        << format_iso_date(r.result.dates.front()) << "</text>\n";
    out << "<text x=\"" << width - right - 70 << "\" y=\"" << height - 10 << "\" font-size=\"11\">"
        << format_iso_date(r.result.dates.back()) << "</text>\n";
    out << "<text x=\"" << left + 10 << "\" y=\"" << top + 14 << "\" font-size=\"12\">" << r.scenario.scenario.name
        << ": " << series << "</text>\n";
    out << "</svg>\n";
}

} // namespace npisim::interface
