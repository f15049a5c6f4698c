#include "asrsim/svg.hpp"

#include "asrsim/config.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace asrsim {

namespace {

constexpr double kLeft = 64.0;
constexpr double kRight = 24.0;
constexpr double kTop = 24.0;
constexpr double kBottom = 52.0;

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string fill_for(const GridCell& cell)
{
    const auto c = cell.classification();
    if (!cell.valid) return "#ffffff";
    if (!c) return "#707070";  // hard error
    switch (*c) {
    case Classification::Guarding: return "#2e8b57";
    case Classification::MultipleMating: return "#f2e35b";
    case Classification::NonConverged: return "#b4b4b4";
    case Classification::Extinct: return "#ffffff";
    }
    return "#ffffff";
}

double nice_step(double span)
{
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * mag >= raw) return m * mag;
    }
    return 10.0 * mag;
}

std::string escape_cdata(std::string s)
{
    for (std::size_t pos = 0; (pos = s.find("]]>", pos)) != std::string::npos; pos += 6) s.replace(pos, 3, "]]]]><![CDATA[>");
    return s;
}

struct Frame {
    double x0, dx, y0, dy, cw, ch;
    std::size_t rows;
    double px(double x) const { return kLeft + ((x - x0) / dx + 0.5) * cw; }
    double py(double y) const { return kTop + (static_cast<double>(rows) - 0.5 - (y - y0) / dy) * ch; }
};

}  // namespace

std::string render_landscape_svg(const LandscapeGrid& grid, const SvgStyle& style, const OutputMeta& meta)
{
    const std::size_t rows = grid.rows(), cols = grid.cols();
    const Frame f{grid.xs.front(), (grid.xs.back() - grid.xs.front()) / static_cast<double>(cols - 1),
                  grid.ys.front(), (grid.ys.back() - grid.ys.front()) / static_cast<double>(rows - 1),
                  style.cell_px,   style.cell_px,
                  rows};
    const double plot_w = static_cast<double>(cols) * f.cw;
    const double plot_h = static_cast<double>(rows) * f.ch;
    const double width = kLeft + plot_w + kRight;
    const double height = kTop + plot_h + kBottom;

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
       << "\" viewBox=\"0 0 " << fmt(width) << ' ' << fmt(height) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<!-- " << engine_version() << " -->\n";
    os << "<metadata><![CDATA[" << escape_cdata(provenance_json(meta).dump()) << "]]></metadata>\n";

    os << "<g id=\"cells\" shape-rendering=\"crispEdges\">\n";
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const GridCell& cell = grid.at(r, c);
            os << "<rect x=\"" << fmt(kLeft + c * f.cw) << "\" y=\"" << fmt(kTop + (rows - 1 - r) * f.ch)
               << "\" width=\"" << fmt(f.cw) << "\" height=\"" << fmt(f.ch) << "\" fill=\"" << fill_for(cell)
               << "\"/>\n";
        }
    }
    os << "</g>\n";

    auto polyline = [&](const Polyline& line, const char* stroke, double w) {
        os << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << fmt(w) << "\" points=\"";
        for (std::size_t i = 0; i < line.size(); ++i) {
            os << (i ? " " : "") << fmt(f.px(line[i].x)) << ',' << fmt(f.py(line[i].y));
        }
        os << "\"/>\n";
    };

    os << "<g id=\"asr-contours\">\n";
    for (const auto& level : grid.contours.asr) {
        for (const auto& line : level.lines) {
            polyline(line, "#d62728", 1.2);
            if (style.label_contours && line.size() >= 2) {
                const Point& mid = line[line.size() / 2];
                os << "<text x=\"" << fmt(f.px(mid.x)) << "\" y=\"" << fmt(f.py(mid.y) - 2.0)
                   << "\" fill=\"#d62728\" font-size=\"9\" text-anchor=\"middle\">" << fmt(level.level).substr(0, 3)
                   << "</text>\n";
            }
        }
    }
    os << "</g>\n<g id=\"strategy-boundary\">\n";
    for (const auto& line : grid.contours.strategy_boundary) polyline(line, "#000000", 2.0);
    os << "</g>\n";

    if (style.reference_markers && grid.spec.x.param == "L" && grid.spec.y.param == "t1") {
        os << "<g id=\"markers\">\n";
        for (Point p : {Point{15.0, 45.0}, Point{30.0, 45.0}}) {
            os << "<circle cx=\"" << fmt(f.px(p.x)) << "\" cy=\"" << fmt(f.py(p.y))
               << "\" r=\"5\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";
        }
        os << "</g>\n";
    }

    // frame, ticks and labels
    const double x_lo = grid.xs.front() - 0.5 * f.dx, x_hi = grid.xs.back() + 0.5 * f.dx;
    const double y_lo = grid.ys.front() - 0.5 * f.dy, y_hi = grid.ys.back() + 0.5 * f.dy;
    os << "<g id=\"axes\">\n";
    os << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(plot_w) << "\" height=\""
       << fmt(plot_h) << "\" fill=\"none\" stroke=\"#000000\"/>\n";
    const double xs = nice_step(x_hi - x_lo);
    for (double v = std::ceil(x_lo / xs) * xs; v <= x_hi + 1e-9; v += xs) {
        const double x = f.px(v), y = kTop + plot_h;
        os << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(x) << "\" y2=\"" << fmt(y + 4)
           << "\" stroke=\"#000000\"/>\n";
        os << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y + 16) << "\" text-anchor=\"middle\">" << fmt(v) << "</text>\n";
    }
    const double ys = nice_step(y_hi - y_lo);
    for (double v = std::ceil(y_lo / ys) * ys; v <= y_hi + 1e-9; v += ys) {
        const double y = f.py(v);
        os << "<line x1=\"" << fmt(kLeft - 4) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(kLeft) << "\" y2=\""
           << fmt(y) << "\" stroke=\"#000000\"/>\n";
        os << "<text x=\"" << fmt(kLeft - 7) << "\" y=\"" << fmt(y + 4) << "\" text-anchor=\"end\">" << fmt(v)
           << "</text>\n";
    }
    os << "<text x=\"" << fmt(kLeft + plot_w / 2) << "\" y=\"" << fmt(height - 10)
       << "\" text-anchor=\"middle\" font-size=\"13\">" << grid.spec.x.param << "</text>\n";
    os << "<text x=\"16\" y=\"" << fmt(kTop + plot_h / 2) << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
       << fmt(kTop + plot_h / 2) << ")\">" << grid.spec.y.param << "</text>\n";
    os << "</g>\n</svg>\n";
    return os.str();
}

}  // namespace asrsim
