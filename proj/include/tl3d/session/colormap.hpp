#pragma once

#include <string>
#include <utility>
#include <vector>

namespace tl3d::session {

struct Rgb {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;

    bool operator==(const Rgb&) const = default;
};

/// Color of snapshots lacking the bound field.
inline constexpr Rgb kUnannotatedColor{0.5, 0.5, 0.5};
/// Color of every snapshot when no field is bound.
inline constexpr Rgb kDefaultColor{0.8, 0.8, 0.8};

struct ControlPoint {
    double t;
    Rgb rgb;
};

/// Piecewise-linear map from [0, 1] to RGB.
class ColorMap {
public:
    /// Control points must be strictly increasing in t, from 0 to 1.
    ColorMap(std::string name, std::vector<ControlPoint> points);

    /// The 256-entry viridis table, t = i / 255.
    static const ColorMap& viridis();

    const std::string& name() const { return name_; }
    const std::vector<ControlPoint>& points() const { return points_; }

    /// Clamps t into [0, 1]; NaN maps to 0.
    Rgb lookup(double t) const;

    /// Maps v from [lo, hi]; a degenerate domain (lo >= hi) maps to t = 0.5.
    Rgb map(double v, double lo, double hi) const;

private:
    std::string name_;
    std::vector<ControlPoint> points_;
};

/// Tableau 10 palette, cycled, for categorical fields.
Rgb categorical_color(std::size_t index);

}  // namespace tl3d::session
