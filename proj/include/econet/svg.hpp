#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "econet/errors.hpp"
#include "econet/matrix.hpp"
#include "econet/text.hpp"

namespace econet {

// Cold-to-hot cell colour: linear blend from blue (low) to red (high).
// NaN cells render grey.
inline std::string heat_color(double value, double lo, double hi) {
    if (std::isnan(value)) return "#cccccc";
    double t = 0.5;  // degenerate range: everything mid-scale
    if (hi > lo) t = std::clamp((value - lo) / (hi - lo), 0.0, 1.0);
    int r = static_cast<int>(std::lround(255.0 * t));
    int b = static_cast<int>(std::lround(255.0 * (1.0 - t)));
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, 0, b);
    return buf;
}

struct Heatmap {
    std::string title;
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    Matrix values;
    std::optional<std::pair<double, double>> range;  // override the value range
};

namespace detail {
inline std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
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
}  // namespace detail

// Plain hand-rolled SVG: one rect per cell, labels on both axes, and a
// horizontal legend bar annotated with the value range.
inline void render_heatmap_svg(std::ostream& os, const Heatmap& map) {
    const std::size_t nrows = map.values.rows();
    const std::size_t ncols = map.values.cols();
    if (nrows == 0 || ncols == 0) throw contract_error("heatmap: empty value matrix");
    if (!map.row_labels.empty() && map.row_labels.size() != nrows)
        throw contract_error("heatmap: row label count mismatch");
    if (!map.col_labels.empty() && map.col_labels.size() != ncols)
        throw contract_error("heatmap: column label count mismatch");

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    if (map.range) {
        lo = map.range->first;
        hi = map.range->second;
    } else {
        for (double v : map.values.values())
            if (!std::isnan(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        if (lo > hi) {  // all-NaN matrix
            lo = 0.0;
            hi = 0.0;
        }
    }

    const int cell = 18;
    const int left = 90;                       // row label gutter
    const int top = map.title.empty() ? 30 : 52;
    const int legend_h = 46;
    // Keep room for the grid, the title (~9px/char at size 15), and a
    // full-size legend bar, whichever is widest.
    const int grid_w = left + static_cast<int>(ncols) * cell + 20;
    const int title_w = map.title.empty() ? 0
                        : left + static_cast<int>(map.title.size()) * 9 + 10;
    const int legend_w = left + 160 + 20;
    const int width = std::max({grid_w, title_w, legend_w});
    const int grid_bottom = top + static_cast<int>(nrows) * cell;
    const int height = grid_bottom + 24 + legend_h;

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    if (!map.title.empty())
        os << "<text x=\"" << left << "\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\""
           << " font-weight=\"bold\">" << detail::xml_escape(map.title) << "</text>\n";

    for (std::size_t r = 0; r < nrows; ++r) {
        for (std::size_t c = 0; c < ncols; ++c) {
            int x = left + static_cast<int>(c) * cell;
            int y = top + static_cast<int>(r) * cell;
            os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
               << "\" height=\"" << cell << "\" fill=\"" << heat_color(map.values(r, c), lo, hi)
               << "\"><title>" << format_sig(map.values(r, c)) << "</title></rect>\n";
        }
        if (!map.row_labels.empty())
            os << "<text x=\"" << left - 6 << "\" y=\"" << top + static_cast<int>(r) * cell + 13
               << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
               << detail::xml_escape(map.row_labels[r]) << "</text>\n";
    }
    if (!map.col_labels.empty())
        for (std::size_t c = 0; c < ncols; ++c) {
            int x = left + static_cast<int>(c) * cell + cell / 2;
            os << "<text x=\"" << x << "\" y=\"" << top - 6
               << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
               << detail::xml_escape(map.col_labels[c]) << "</text>\n";
        }

    // Legend: a strip of sample swatches plus the numeric range.
    const int ly = grid_bottom + 20;
    const int lw = std::min(width - left - 20, 160);
    const int steps = 32;
    for (int s = 0; s < steps; ++s) {
        double t = steps > 1 ? double(s) / (steps - 1) : 0.5;
        os << "<rect x=\"" << left + s * lw / steps << "\" y=\"" << ly << "\" width=\""
           << (lw + steps - 1) / steps << "\" height=\"12\" fill=\""
           << heat_color(lo + t * (hi - lo), lo, hi) << "\"/>\n";
    }
    os << "<text x=\"" << left << "\" y=\"" << ly + 26
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << format_sig(lo) << "</text>\n";
    os << "<text x=\"" << left + lw << "\" y=\"" << ly + 26
       << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << format_sig(hi)
       << "</text>\n";
    os << "</svg>\n";
}

inline std::string render_heatmap_svg(const Heatmap& map) {
    std::ostringstream os;
    render_heatmap_svg(os, map);
    return os.str();
}

}  // namespace econet
