#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "tl3d/layout/curve.hpp"
#include "tl3d/layout/scale.hpp"

using namespace tl3d;
using namespace tl3d::layout;
using namespace tl3d::design;

namespace {

// Composite Simpson rule, independent of the library's quadrature.
double simpson(const std::function<double(double)>& f, double a, double b, int panels = 20000) {
    const double h = (b - a) / panels;
    double acc = f(a) + f(b);
    for (int i = 1; i < panels; ++i) acc += f(a + h * i) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// Length of the curve between s0 and s1 measured as a fine polyline.
double polyline_length(const GuidingCurve& c, double s0, double s1, int pieces = 40000) {
    double len = 0.0;
    Vec3 prev = c.eval(s0).position;
    for (int i = 1; i <= pieces; ++i) {
        const Vec3 p = c.eval(s0 + (s1 - s0) * i / pieces).position;
        len += norm(p - prev);
        prev = p;
    }
    return len;
}

LayoutErrc error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const LayoutError& e) {
        return e.code();
    }
    FAIL("expected a LayoutError");
    return LayoutErrc::InvalidArgument;
}

}  // namespace

TEST_CASE("linear scale on 89 s spacing with unit 1/89 gives integer offsets") {
    std::vector<double> ts(180);
    for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = 89.0 * static_cast<double>(i);
    const auto m = scale_map({ChronologicalLinear{}, 1.0 / 89.0}, ts);
    for (std::size_t i = 0; i < ts.size(); ++i) CHECK(std::fabs(m.offsets[i] - static_cast<double>(i)) <= 1e-12);
}

TEST_CASE("scale kinds") {
    const std::vector<double> ts{10.0, 11.0, 13.0, 20.0};
    const auto seq = scale_map({Sequential{}, 0.5}, ts);
    CHECK(seq.offsets == std::vector<double>{0.0, 0.5, 1.0, 1.5});

    const auto lin = scale_map({ChronologicalLinear{}, 2.0}, ts);
    CHECK(lin.offsets == std::vector<double>{0.0, 2.0, 6.0, 20.0});

    const auto log = scale_map({ChronologicalLog{2.0}, 1.5}, ts);
    for (std::size_t i = 0; i < ts.size(); ++i)
        CHECK(log.offsets[i] == doctest::Approx(1.5 * std::log(1.0 + (ts[i] - ts[0]) / 2.0)).epsilon(1e-14));

    const auto rel = scale_map({Relative{{2}}, 1.0}, ts, 2);
    CHECK(rel.baseline_offset == 3.0);
    CHECK(rel.offsets == std::vector<double>{0.0, 1.0, 3.0, 10.0});

    CHECK(error_of([&] { scale_map({Relative{{2}}, 1.0}, ts); }) == LayoutErrc::MissingBaseline);
    CHECK(error_of([&] { scale_map({Relative{{9}}, 1.0}, ts, 9); }) == LayoutErrc::MissingBaseline);
    const std::vector<double> bad{0.0, 2.0, 1.0};
    CHECK(error_of([&] { scale_map({Sequential{}, 1.0}, bad); }) == LayoutErrc::NonMonotonicTimestamps);
}

TEST_CASE("parabola arc length matches numerical integration") {
    for (double a : {0.05, 0.2, 1.0, 3.0})
        for (double x : {-4.0, -0.3, 0.0, 0.7, 2.5}) {
            const double expected =
                (x < 0 ? -1 : 1) * simpson([a](double t) { return std::sqrt(1.0 + 4.0 * a * a * t * t); }, 0.0,
                                           std::fabs(x));
            CHECK(GuidingCurve::parabola_arc_length(a, x) == doctest::Approx(expected).epsilon(1e-10));
        }
}

TEST_CASE("parabola abscissa inverts the arc length") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> da(0.01, 5.0), ds(-50.0, 50.0);
    for (int i = 0; i < 2000; ++i) {
        const double a = da(rng), s = ds(rng);
        const double x = GuidingCurve::parabola_abscissa(a, s);
        CHECK(std::fabs(GuidingCurve::parabola_arc_length(a, x) - s) <= 1e-12 * std::max(1.0, std::fabs(s)));
    }
    CHECK(GuidingCurve::parabola_abscissa(0.3, 0.0) == 0.0);
}

TEST_CASE("every curve is parameterized by arc length") {
    const std::vector<RepresentationSpec> reps{
        FlatLine{{0, 0, -2}, {0.6, 0.0, 0.8}}, ConvexArc{{0.5, 0.0, -3.0}, 2.0}, ConvexParabola{0.4, 2.0},
        ConcaveParabola{0.4, 2.0},              Helicoid{{0.0, -1.0, -2.0}, 1.2, 12, 0.5},
        Spherical{{0.0, 0.0, -3.0}, 1.5, 3.0},
    };
    for (const auto& rep : reps) {
        CAPTURE(representation_name(rep));
        const GuidingCurve c(rep);
        const bool sphere = std::holds_alternative<Spherical>(rep);
        const double s0 = sphere ? 0.3 : -2.0;
        const double s1 = sphere ? c.total_length() - 0.3 : 3.0;
        CHECK(polyline_length(c, s0, s1) == doctest::Approx(s1 - s0).epsilon(1e-6));

        for (double s : {s0, 0.5 * (s0 + s1), s1}) {
            const auto smp = c.eval(s);
            CHECK(norm(smp.tangent) == doctest::Approx(1.0));
            CHECK(norm(smp.up) == doctest::Approx(1.0));
            CHECK(std::fabs(dot(smp.tangent, smp.up)) < 1e-9);
        }
    }
}

TEST_CASE("arc and helicoid anchors face the viewer") {
    const GuidingCurve arc(ConvexArc{{0.0, 0.0, -4.0}, 2.0});
    const Vec3 a = arc.eval(0.0).position;
    CHECK(a.z == doctest::Approx(-2.0));
    CHECK(a.x == doctest::Approx(0.0));
    // Every other point is farther from the viewer.
    for (double s : {-1.0, 0.5, 2.0}) CHECK(norm(arc.eval(s).position) > norm(a));
    // Positive arc length goes to the viewer's right.
    CHECK(arc.eval(0.5).position.x > 0.0);

    const GuidingCurve hel(Helicoid{{0.0, 0.0, -3.0}, 1.0, 10, 0.4});
    CHECK(hel.eval(0.0).position.z == doctest::Approx(-2.0));
    CHECK(hel.loop_length() == doctest::Approx(std::sqrt(4 * kPi * kPi + 0.16)));
    const Vec3 d = hel.eval(1.3 + hel.loop_length()).position - hel.eval(1.3).position;
    CHECK(d.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(d.y == doctest::Approx(0.4));
    CHECK(d.z == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("spherical spiral") {
    const Spherical sp{{1.0, 0.5, -3.0}, 2.0, 4.0};
    const GuidingCurve c(sp);
    const double expected = simpson(
        [&](double phi) {
            const double q = 2.0 * sp.loops * std::sin(phi);
            return sp.radius * std::sqrt(1.0 + q * q);
        },
        0.0, kPi);
    CHECK(c.total_length() == doctest::Approx(expected).epsilon(1e-10));

    const Vec3 north = c.eval(0.0).position;
    CHECK(norm(north - Vec3{1.0, 2.5, -3.0}) < 1e-12);
    for (double s = 0.0; s <= c.total_length(); s += 0.37) CHECK(norm(c.eval(s).position - sp.center) == doctest::Approx(2.0));

    for (double phi : {0.1, 1.0, 1.5707963, 2.9}) CHECK(c.spherical_colatitude(c.spherical_arc_length(phi)) ==
                                                         doctest::Approx(phi).epsilon(1e-12));

    CHECK(error_of([&] { c.eval(-1e-9); }) == LayoutErrc::OutOfDomain);
    CHECK(error_of([&] { c.eval(c.total_length() + 1e-6); }) == LayoutErrc::OutOfDomain);
    CHECK(error_of([&] { GuidingCurve(FlatLine{}).eval(std::nan("")); }) == LayoutErrc::OutOfDomain);
}
