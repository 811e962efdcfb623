#include "tl3d/session/colormap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "viridis_table.hpp"

namespace tl3d::session {

ColorMap::ColorMap(std::string name, std::vector<ControlPoint> points)
    : name_(std::move(name)), points_(std::move(points)) {
    if (points_.size() < 2 || points_.front().t != 0.0 || points_.back().t != 1.0)
        throw std::invalid_argument("color map must have control points at t = 0 and t = 1");
    for (std::size_t i = 1; i < points_.size(); ++i)
        if (!(points_[i].t > points_[i - 1].t)) throw std::invalid_argument("control points must increase in t");
}

const ColorMap& ColorMap::viridis() {
    static const ColorMap map = [] {
        std::vector<ControlPoint> pts;
        const auto& table = detail::kViridis;
        for (std::size_t i = 0; i < table.size(); ++i) {
            const double t = i + 1 == table.size() ? 1.0 : static_cast<double>(i) / (table.size() - 1);
            pts.push_back({t, {table[i][0], table[i][1], table[i][2]}});
        }
        return ColorMap("viridis", std::move(pts));
    }();
    return map;
}

Rgb ColorMap::lookup(double t) const {
    if (!(t > 0.0)) return points_.front().rgb;
    if (t >= 1.0) return points_.back().rgb;
    auto hi = std::upper_bound(points_.begin(), points_.end(), t,
                               [](double v, const ControlPoint& p) { return v < p.t; });
    auto lo = hi - 1;
    const double f = (t - lo->t) / (hi->t - lo->t);
    auto mix = [f](double a, double b) { return a + (b - a) * f; };
    return {mix(lo->rgb.r, hi->rgb.r), mix(lo->rgb.g, hi->rgb.g), mix(lo->rgb.b, hi->rgb.b)};
}

Rgb ColorMap::map(double v, double lo, double hi) const {
    if (!(hi > lo)) return lookup(0.5);
    return lookup((v - lo) / (hi - lo));
}

Rgb categorical_color(std::size_t index) {
    static constexpr std::array<Rgb, 10> kTableau10{{
        {0x1f / 255.0, 0x77 / 255.0, 0xb4 / 255.0},
        {0xff / 255.0, 0x7f / 255.0, 0x0e / 255.0},
        {0x2c / 255.0, 0xa0 / 255.0, 0x2c / 255.0},
        {0xd6 / 255.0, 0x27 / 255.0, 0x28 / 255.0},
        {0x94 / 255.0, 0x67 / 255.0, 0xbd / 255.0},
        {0x8c / 255.0, 0x56 / 255.0, 0x4b / 255.0},
        {0xe3 / 255.0, 0x77 / 255.0, 0xc2 / 255.0},
        {0x7f / 255.0, 0x7f / 255.0, 0x7f / 255.0},
        {0xbc / 255.0, 0xbd / 255.0, 0x22 / 255.0},
        {0x17 / 255.0, 0xbe / 255.0, 0xcf / 255.0},
    }};
    return kTableau10[index % kTableau10.size()];
}

}  // namespace tl3d::session
