#pragma once
// Guiding curves parameterized by arc length.
//
// Every curve except the spherical spiral takes a signed arc length measured
// from its anchor, the point nearest the viewer, where the central time point
// is placed. The spherical spiral is bounded and takes the arc length from
// its north pole, s in [0, total_length()].

#include <vector>

#include "tl3d/design/design.hpp"
#include "tl3d/geometry.hpp"
#include "tl3d/layout/errors.hpp"

namespace tl3d::layout {

struct CurveSample {
    Vec3 position;
    Vec3 tangent;  // unit
    Vec3 up;       // unit, orthogonal to tangent
};

class GuidingCurve {
public:
    explicit GuidingCurve(design::RepresentationSpec representation);

    /// Throws LayoutError(OutOfDomain) outside [domain_min(), domain_max()].
    CurveSample eval(double s) const;

    double domain_min() const;
    double domain_max() const;

    const design::RepresentationSpec& representation() const { return rep_; }

    /// Arc length of one helicoid turn, sqrt((2 pi R)^2 + pitch^2).
    double loop_length() const { return loop_length_; }
    /// Pole-to-pole length of the spherical spiral.
    double total_length() const { return total_length_; }

    /// Horizontal unit vector from the curve's center/axis toward the viewer
    /// (or the viewer's forward direction when they coincide).
    const Vec3& anchor_direction() const { return u_; }
    /// Horizontal unit vector along which arc length increases at the anchor.
    const Vec3& right_direction() const { return w_; }

    /// Arc length of the parabola from its apex to abscissa x (closed form).
    static double parabola_arc_length(double a, double x);
    /// Inverse of parabola_arc_length, |S(x) - s| <= 1e-12 max(1, |s|).
    static double parabola_abscissa(double a, double s);

    /// Arc length of the spherical spiral from the north pole to colatitude phi.
    double spherical_arc_length(double phi) const;
    /// Colatitude reached after arc length s from the north pole.
    double spherical_colatitude(double s) const;

private:
    design::RepresentationSpec rep_;
    Vec3 u_{0.0, 0.0, -1.0};
    Vec3 w_{1.0, 0.0, 0.0};
    double loop_length_ = 0.0;
    double total_length_ = 0.0;
    std::vector<double> sphere_cumulative_;  // arc length at panel boundaries
};

}  // namespace tl3d::layout
