#include "stit/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "stit/errors.hpp"

namespace stit {

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

}  // namespace

std::string render_svg(const Tessellation& t) {
    if (t.dim() != 2) throw ConfigError("window: rendering requires a 2D tessellation");

    double min_x = std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_x = -min_x;
    double max_y = -min_y;
    for (const Vec2& v : t.window().vertices()) {
        min_x = std::min(min_x, v.x);
        max_x = std::max(max_x, v.x);
        min_y = std::min(min_y, v.y);
        max_y = std::max(max_y, v.y);
    }
    const double scale = 512.0 / std::max(max_x - min_x, max_y - min_y);
    const double w = (max_x - min_x) * scale;
    const double h = (max_y - min_y) * scale;
    const auto tx = [&](double x) { return (x - min_x) * scale; };
    const auto ty = [&](double y) { return (max_y - y) * scale; };

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) +
                      "\" height=\"" + num(h) + "\" viewBox=\"0 0 " + num(w) + " " + num(h) +
                      "\">\n";
    t.for_each_cell([&](const Cell& cell, double) {
        out += "  <path d=\"";
        const std::vector<Vec2>& verts = cell.vertices();
        for (std::size_t i = 0; i < verts.size(); ++i) {
            out += i == 0 ? "M " : "L ";
            out += num(tx(verts[i].x));
            out += ' ';
            out += num(ty(verts[i].y));
            out += ' ';
        }
        out += "Z\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    });
    out += "</svg>\n";
    return out;
}

}  // namespace stit
