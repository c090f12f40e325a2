#include "fpflow/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace fpflow {

namespace {

struct Range {
    double lo = 0.0, hi = 1.0;
    void expand(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
};

double nice_step(double span) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag) return m * mag;
    return 10.0 * mag;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

}  // namespace

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<SvgSeries>& series,
                      const std::vector<std::string>& header_comments) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open SVG output file: " + path);

    const int width = 720, height = 480;
    const int ml = 80, mr = 24, mt = 48, mb = 56;
    const double pw = width - ml - mr, ph = height - mt - mb;

    bool have_point = false;
    Range rx, ry;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if (!have_point) {
                rx = {x, x};
                ry = {y, y};
                have_point = true;
            } else {
                rx.expand(x);
                ry.expand(y);
            }
        }
    if (!have_point) {
        rx = {0.0, 1.0};
        ry = {0.0, 1.0};
    }
    if (rx.hi == rx.lo) rx.hi = rx.lo + 1.0;
    if (ry.hi == ry.lo) ry.hi = ry.lo + 1.0;
    const double pad_y = 0.05 * (ry.hi - ry.lo);
    ry.lo -= pad_y;
    ry.hi += pad_y;

    const auto X = [&](double x) { return ml + pw * (x - rx.lo) / (rx.hi - rx.lo); };
    const auto Y = [&](double y) { return mt + ph * (1.0 - (y - ry.lo) / (ry.hi - ry.lo)); };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    for (const auto& c : header_comments) out << "<!-- " << c << " -->\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

    // Axes box.
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\""
        << ph << "\" fill=\"none\" stroke=\"#444\"/>\n";

    const double sx = nice_step(rx.hi - rx.lo);
    for (double x = std::ceil(rx.lo / sx) * sx; x <= rx.hi + 1e-12 * sx; x += sx) {
        out << "<line x1=\"" << X(x) << "\" y1=\"" << mt + ph << "\" x2=\"" << X(x)
            << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"#444\"/>\n";
        out << "<text x=\"" << X(x) << "\" y=\"" << mt + ph + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt(x) << "</text>\n";
    }
    const double sy = nice_step(ry.hi - ry.lo);
    for (double y = std::ceil(ry.lo / sy) * sy; y <= ry.hi + 1e-12 * sy; y += sy) {
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << Y(y) << "\" x2=\"" << ml
            << "\" y2=\"" << Y(y) << "\" stroke=\"#444\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << Y(y) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt(y) << "</text>\n";
    }
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << x_label << "</text>\n";
    out << "<text x=\"18\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">" << y_label << "</text>\n";

    for (const auto& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : s.points) out << X(x) << "," << Y(y) << " ";
        out << "\"/>\n";
    }

    // Legend.
    double ly = mt + 14;
    for (const auto& s : series) {
        out << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << ly << "\" x2=\""
            << ml + pw - 120 << "\" y2=\"" << ly << "\" stroke=\"" << s.color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << ml + pw - 112 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.name << "</text>\n";
        ly += 18;
    }
    out << "</svg>\n";
}

}  // namespace fpflow
