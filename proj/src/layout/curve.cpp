#include "tl3d/layout/curve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace tl3d::layout {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 8> kGlNodes{-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                         -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                         0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGlWeights{0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                           0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};

constexpr std::size_t kSpherePanels = 256;

Vec3 horizontal(const Vec3& v) { return {v.x, 0.0, v.z}; }

// Direction from `center` toward the viewer in the horizontal plane.
Vec3 toward_viewer(const Vec3& center) {
    const Vec3 h = horizontal(kViewerOrigin - center);
    const double n = norm(h);
    return n > 1e-12 ? h / n : kViewerForward;
}

Vec3 right_of(const Vec3& dir) { return normalized(cross(dir, kWorldUp)); }

Vec3 up_for(const Vec3& tangent) {
    Vec3 up = kWorldUp - tangent * dot(kWorldUp, tangent);
    const double n = norm(up);
    if (n > 1e-12) return up / n;
    return normalized(cross(right_of(kViewerForward), tangent));
}

CurveSample make_sample(const Vec3& p, const Vec3& derivative) {
    const Vec3 t = normalized(derivative);
    return {p, t, up_for(t)};
}

}  // namespace

GuidingCurve::GuidingCurve(design::RepresentationSpec representation) : rep_(std::move(representation)) {
    std::visit(overloaded{
                   [&](const design::ConvexArc& r) {
                       u_ = toward_viewer(r.center);
                       // Arc length grows toward the viewer's right at the anchor.
                       const Vec3 anchor = r.center + u_ * r.radius;
                       const Vec3 view = horizontal(anchor - kViewerOrigin);
                       w_ = norm(view) > 1e-12 ? right_of(normalized(view)) : right_of(u_);
                       if (std::fabs(dot(w_, u_)) > 1e-12) w_ = right_of(u_);
                   },
                   [&](const design::Helicoid& r) {
                       u_ = toward_viewer(r.axis_point);
                       const Vec3 anchor = r.axis_point + u_ * r.radius;
                       const Vec3 view = horizontal(anchor - kViewerOrigin);
                       w_ = norm(view) > 1e-12 ? right_of(normalized(view)) : right_of(u_);
                       const double c = 2.0 * kPi * r.radius;
                       loop_length_ = std::sqrt(c * c + r.pitch * r.pitch);
                   },
                   [&](const design::Spherical& r) {
                       u_ = toward_viewer(r.center);
                       w_ = right_of(u_);
                       sphere_cumulative_.assign(kSpherePanels + 1, 0.0);
                       const double h = kPi / static_cast<double>(kSpherePanels);
                       auto speed = [&](double phi) {
                           const double s = 2.0 * r.loops * std::sin(phi);
                           return r.radius * std::sqrt(1.0 + s * s);
                       };
                       for (std::size_t k = 0; k < kSpherePanels; ++k) {
                           const double a = h * static_cast<double>(k);
                           double acc = 0.0;
                           for (std::size_t g = 0; g < kGlNodes.size(); ++g) {
                               acc += kGlWeights[g] * speed(a + 0.5 * h * (kGlNodes[g] + 1.0));
                           }
                           sphere_cumulative_[k + 1] = sphere_cumulative_[k] + 0.5 * h * acc;
                       }
                       total_length_ = sphere_cumulative_.back();
                   },
                   [](const auto&) {},
               },
               rep_);
}

double GuidingCurve::domain_min() const {
    return std::holds_alternative<design::Spherical>(rep_) ? 0.0 : -std::numeric_limits<double>::infinity();
}

double GuidingCurve::domain_max() const {
    return std::holds_alternative<design::Spherical>(rep_) ? total_length_ : std::numeric_limits<double>::infinity();
}

double GuidingCurve::parabola_arc_length(double a, double x) {
    const double q = 2.0 * a * x;
    return 0.5 * x * std::sqrt(1.0 + q * q) + std::asinh(q) / (4.0 * a);
}

double GuidingCurve::parabola_abscissa(double a, double s) {
    if (s == 0.0) return 0.0;
    const double target = std::fabs(s);
    // S(x) >= x, so the root lies in [0, |s|].
    double lo = 0.0;
    double hi = target;
    double x = std::min(target, std::sqrt(target / a));
    const double tol = 1e-12 * std::max(1.0, target);
    for (int it = 0; it < 200; ++it) {
        const double f = parabola_arc_length(a, x) - target;
        if (std::fabs(f) <= tol) break;
        if (f > 0.0) hi = x; else lo = x;
        const double q = 2.0 * a * x;
        double next = x - f / std::sqrt(1.0 + q * q);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        x = next;
    }
    return s < 0.0 ? -x : x;
}

double GuidingCurve::spherical_arc_length(double phi) const {
    const auto& r = std::get<design::Spherical>(rep_);
    const double h = kPi / static_cast<double>(kSpherePanels);
    phi = std::clamp(phi, 0.0, kPi);
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(phi / h), kSpherePanels - 1);
    const double a = h * static_cast<double>(k);
    const double len = phi - a;
    double acc = 0.0;
    for (std::size_t g = 0; g < kGlNodes.size(); ++g) {
        const double p = a + 0.5 * len * (kGlNodes[g] + 1.0);
        const double s = 2.0 * r.loops * std::sin(p);
        acc += kGlWeights[g] * r.radius * std::sqrt(1.0 + s * s);
    }
    return sphere_cumulative_[k] + 0.5 * len * acc;
}

double GuidingCurve::spherical_colatitude(double s) const {
    const auto& r = std::get<design::Spherical>(rep_);
    if (s <= 0.0) return 0.0;
    if (s >= total_length_) return kPi;
    const double h = kPi / static_cast<double>(kSpherePanels);
    const auto it = std::upper_bound(sphere_cumulative_.begin(), sphere_cumulative_.end(), s);
    const auto k = static_cast<std::size_t>(std::distance(sphere_cumulative_.begin(), it)) - 1;
    double lo = h * static_cast<double>(k);
    double hi = std::min(kPi, lo + h);
    double phi = lo + (s - sphere_cumulative_[k]) / (sphere_cumulative_[k + 1] - sphere_cumulative_[k]) * (hi - lo);
    const double tol = 1e-12 * std::max(1.0, total_length_);
    for (int iter = 0; iter < 100; ++iter) {
        const double f = spherical_arc_length(phi) - s;
        if (std::fabs(f) <= tol) break;
        if (f > 0.0) hi = phi; else lo = phi;
        const double q = 2.0 * r.loops * std::sin(phi);
        double next = phi - f / (r.radius * std::sqrt(1.0 + q * q));
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        phi = next;
    }
    return phi;
}

CurveSample GuidingCurve::eval(double s) const {
    if (!std::isfinite(s) || s < domain_min() || s > domain_max()) {
        throw LayoutError(LayoutErrc::OutOfDomain, "arc length " + std::to_string(s) + " outside the curve domain");
    }
    return std::visit(
        overloaded{
            [&](const design::FlatLine& r) { return make_sample(r.origin + r.direction * s, r.direction); },
            [&](const design::ConvexArc& r) {
                const double theta = s / r.radius;
                const double c = std::cos(theta), sn = std::sin(theta);
                return make_sample(r.center + (u_ * c + w_ * sn) * r.radius, w_ * c - u_ * sn);
            },
            [&](const design::ConvexParabola& r) {
                const double x = parabola_abscissa(r.a, s);
                return make_sample({x, 0.0, -r.d0 + r.a * x * x}, {1.0, 0.0, 2.0 * r.a * x});
            },
            [&](const design::ConcaveParabola& r) {
                const double x = parabola_abscissa(r.a, s);
                return make_sample({x, 0.0, -r.d0 - r.a * x * x}, {1.0, 0.0, -2.0 * r.a * x});
            },
            [&](const design::Helicoid& r) {
                const double turns = s / loop_length_;
                const double theta = 2.0 * kPi * turns;
                const double c = std::cos(theta), sn = std::sin(theta);
                const Vec3 p = r.axis_point + (u_ * c + w_ * sn) * r.radius + kWorldUp * (r.pitch * turns);
                const Vec3 d = (w_ * c - u_ * sn) * (2.0 * kPi * r.radius) + kWorldUp * r.pitch;
                return make_sample(p, d);
            },
            [&](const design::Spherical& r) {
                const double phi = spherical_colatitude(s);
                const double alpha = 2.0 * r.loops * phi - r.loops * kPi;
                const double sp = std::sin(phi), cp = std::cos(phi);
                const double ca = std::cos(alpha), sa = std::sin(alpha);
                const Vec3 radial = u_ * ca + w_ * sa;
                const Vec3 p = r.center + (radial * sp + kWorldUp * cp) * r.radius;
                const Vec3 d = radial * cp + (w_ * ca - u_ * sa) * (2.0 * r.loops * sp) - kWorldUp * sp;
                return make_sample(p, d);
            },
        },
        rep_);
}

}  // namespace tl3d::layout
