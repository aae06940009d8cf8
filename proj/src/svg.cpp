#include "codasplr/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "codasplr/error.hpp"

namespace codasplr {

namespace {

double cell_number(const Table& table, size_t row, size_t col) {
    const std::string& cell = table.rows[row][col];
    double parsed = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), parsed);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
        throw Error(ErrorKind::UnsupportedKind,
                    "cell '" + cell + "' is not numeric; table does not match the chart kind");
    return parsed;
}

// Pixel coordinates are rounded to 1/100 so the text form is short and
// platform-stable.
std::string px(double v) {
    const double r = std::round(v * 100.0) / 100.0;
    return fmt_double(r == 0.0 ? 0.0 : r);  // normalizes -0
}

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch; break;
        }
    }
    return out;
}

void open_svg(std::string& out, double width, double height) {
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(width) + "\" height=\"" +
           px(height) + "\" viewBox=\"0 0 " + px(width) + " " + px(height) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + px(width) + "\" height=\"" + px(height) +
           "\" fill=\"#ffffff\"/>\n";
}

void text_at(std::string& out, double x, double y, const std::string& content,
             const std::string& anchor, double size) {
    out += "<text x=\"" + px(x) + "\" y=\"" + px(y) + "\" font-family=\"monospace\" font-size=\"" +
           px(size) + "\" fill=\"#1a1a1a\" text-anchor=\"" + anchor + "\">" + escape_xml(content) +
           "</text>\n";
}

std::string render_tradeoff(const Table& table) {
    if (table.header.size() < 3 || table.rows.empty())
        throw Error(ErrorKind::UnsupportedKind, "two-series chart needs 3 columns and data rows");

    const size_t n = table.rows.size();
    std::vector<double> x(n), s1(n), s2(n);
    for (size_t r = 0; r < n; ++r) {
        x[r] = cell_number(table, r, 0);
        s1[r] = cell_number(table, r, 1);
        s2[r] = cell_number(table, r, 2);
    }
    const double x_min = *std::min_element(x.begin(), x.end());
    const double x_max = *std::max_element(x.begin(), x.end());
    const double data_max = std::max(*std::max_element(s1.begin(), s1.end()),
                                     *std::max_element(s2.begin(), s2.end()));
    const double y_max = data_max <= 1.0 ? 1.0 : 100.0;

    const double W = 640, H = 400, ml = 64, mr = 16, mt = 40, mb = 48;
    const double pw = W - ml - mr, ph = H - mt - mb;
    auto sx = [&](double v) {
        return x_max > x_min ? ml + pw * (v - x_min) / (x_max - x_min) : ml + pw / 2.0;
    };
    auto sy = [&](double v) { return mt + ph * (1.0 - v / y_max); };

    std::string out;
    open_svg(out, W, H);

    // frame and horizontal gridlines with tick labels
    out += "<rect x=\"" + px(ml) + "\" y=\"" + px(mt) + "\" width=\"" + px(pw) + "\" height=\"" +
           px(ph) + "\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1\"/>\n";
    for (int tick = 0; tick <= 5; ++tick) {
        const double v = y_max * tick / 5.0;
        const double y = sy(v);
        if (tick > 0 && tick < 5)
            out += "<line x1=\"" + px(ml) + "\" y1=\"" + px(y) + "\" x2=\"" + px(ml + pw) +
                   "\" y2=\"" + px(y) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        text_at(out, ml - 6, y + 4, fmt_double(v), "end", 11);
    }
    for (int tick = 0; tick <= 4; ++tick) {
        const double v = x_min + (x_max - x_min) * tick / 4.0;
        text_at(out, sx(v), mt + ph + 16, fmt_double(std::round(v * 1e6) / 1e6), "middle", 11);
    }
    text_at(out, ml + pw / 2.0, H - 10, table.header[0], "middle", 12);

    auto polyline = [&](const std::vector<double>& s, const char* color, const char* dash) {
        out += "<polyline fill=\"none\" stroke=\"";
        out += color;
        out += "\" stroke-width=\"2\"";
        if (dash[0] != '\0') out += std::string(" stroke-dasharray=\"") + dash + "\"";
        out += " points=\"";
        for (size_t r = 0; r < s.size(); ++r) {
            if (r > 0) out += ' ';
            out += px(sx(x[r])) + "," + px(sy(s[r]));
        }
        out += "\"/>\n";
    };
    polyline(s1, "#1a1a1a", "");
    polyline(s2, "#b05050", "7,4");

    // legend: solid vs dashed keeps the series apart in grayscale
    out += "<line x1=\"" + px(ml) + "\" y1=\"18\" x2=\"" + px(ml + 28) +
           "\" y2=\"18\" stroke=\"#1a1a1a\" stroke-width=\"2\"/>\n";
    text_at(out, ml + 34, 22, table.header[1], "start", 12);
    out += "<line x1=\"" + px(ml + 220) + "\" y1=\"18\" x2=\"" + px(ml + 248) +
           "\" y2=\"18\" stroke=\"#b05050\" stroke-width=\"2\" stroke-dasharray=\"7,4\"/>\n";
    text_at(out, ml + 254, 22, table.header[2], "start", 12);

    out += "</svg>\n";
    return out;
}

std::string render_stability(const Table& table) {
    if (table.header.size() < 4 || table.rows.empty())
        throw Error(ErrorKind::UnsupportedKind,
                    "selection heatmap needs label, grid, total, and exvar columns");
    const size_t G = table.header.size() - 3;
    const size_t M = table.rows.size();

    const double cell = 10, label_w = 150, annot_w = 120, mt = 28, mb = 20;
    const double W = label_w + static_cast<double>(G) * cell + annot_w + 16;
    const double H = mt + static_cast<double>(M) * cell + mb;

    std::string out;
    open_svg(out, W, H);
    text_at(out, label_w, 18, "<- denser  (alpha grid)  sparser ->", "start", 11);
    text_at(out, label_w + static_cast<double>(G) * cell + 8, 18, "total  exvar%", "start", 11);

    for (size_t r = 0; r < M; ++r) {
        const double y = mt + static_cast<double>(r) * cell;
        text_at(out, label_w - 6, y + cell - 2, table.rows[r][0], "end", 9);
        for (size_t g = 0; g < G; ++g) {
            const double v = cell_number(table, r, g + 1);
            if (v != 0.0 && v != 1.0)
                throw Error(ErrorKind::UnsupportedKind, "selection cells must be 0 or 1");
            const double xpos = label_w + static_cast<double>(g) * cell;
            out += "<rect x=\"" + px(xpos) + "\" y=\"" + px(y) + "\" width=\"" + px(cell) +
                   "\" height=\"" + px(cell) + "\" fill=\"" +
                   (v != 0.0 ? "#39618f" : "#ffffff") + "\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n";
        }
        const std::string total = table.rows[r][table.header.size() - 2];
        const std::string exvar = table.rows[r][table.header.size() - 1];
        text_at(out, label_w + static_cast<double>(G) * cell + 8, y + cell - 2,
                total + "  " + exvar, "start", 9);
    }

    out += "</svg>\n";
    return out;
}

std::string render_parts(const Table& table) {
    if (table.header.size() < 2 || table.rows.empty())
        throw Error(ErrorKind::UnsupportedKind, "parts heatmap needs a label column and counts");
    const size_t G = table.header.size() - 1;
    const size_t D = table.rows.size();

    double max_count = 0.0;
    for (size_t r = 0; r < D; ++r)
        for (size_t g = 0; g < G; ++g) {
            const double v = cell_number(table, r, g + 1);
            if (v < 0.0)
                throw Error(ErrorKind::UnsupportedKind, "part counts must be nonnegative");
            max_count = std::max(max_count, v);
        }

    const double cell = 12, label_w = 110, mt = 28, mb = 20;
    const double W = label_w + static_cast<double>(G) * cell + 16;
    const double H = mt + static_cast<double>(D) * cell + mb;

    std::string out;
    open_svg(out, W, H);
    text_at(out, label_w, 18, "<- denser  (alpha grid)  sparser ->", "start", 11);

    for (size_t r = 0; r < D; ++r) {
        const double y = mt + static_cast<double>(r) * cell;
        text_at(out, label_w - 6, y + cell - 3, table.rows[r][0], "end", 10);
        for (size_t g = 0; g < G; ++g) {
            const double v = cell_number(table, r, g + 1);
            const double opacity =
                max_count > 0.0 ? std::round(v / max_count * 1000.0) / 1000.0 : 0.0;
            const double xpos = label_w + static_cast<double>(g) * cell;
            out += "<rect x=\"" + px(xpos) + "\" y=\"" + px(y) + "\" width=\"" + px(cell) +
                   "\" height=\"" + px(cell) + "\" fill=\"#39618f\" fill-opacity=\"" +
                   fmt_double(opacity) + "\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n";
        }
    }

    out += "</svg>\n";
    return out;
}

}  // namespace

std::string render_svg(const Table& table, SvgKind kind) {
    switch (kind) {
        case SvgKind::Tradeoff: return render_tradeoff(table);
        case SvgKind::Stability: return render_stability(table);
        case SvgKind::Parts: return render_parts(table);
    }
    throw Error(ErrorKind::UnsupportedKind, "unknown chart kind");
}

}  // namespace codasplr
