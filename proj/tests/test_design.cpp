#include <cmath>
#include <random>

#include "doctest.h"
#include "tl3d/design/design.hpp"

using namespace tl3d;
using namespace tl3d::design;

namespace {

std::vector<RepresentationSpec> all_representations() {
    return {FlatLine{}, ConvexArc{}, ConvexParabola{}, ConcaveParabola{}, Helicoid{}, Spherical{}};
}

std::vector<SupportSpec> all_supports() {
    return {VerticalPlane{}, HorizontalPlane{}, MultiplePlanes{}, Cubic{}, ConcentricCylinders{}};
}

}  // namespace

TEST_CASE("the three presets validate without errors or warnings") {
    for (auto name : preset_names()) {
        CAPTURE(name);
        const auto report = validate_design(preset(name));
        CHECK(report.ok());
        for (const auto& v : report.violations) CHECK(v.severity == Severity::Info);
    }
    CHECK_THROWS_AS(preset("tree"), DesignError);
}

TEST_CASE("preset contents") {
    const auto h = preset("helicoid-unified");
    CHECK(std::holds_alternative<Helicoid>(h.representation));
    CHECK(std::holds_alternative<ConcentricCylinders>(h.support));
    CHECK_FALSE(h.layout.faceted());

    const auto c = preset("curved-faceted");
    CHECK(std::holds_alternative<ConvexArc>(c.representation));
    CHECK(c.layout.faceted());

    const auto n = preset("no-timeline");
    REQUIRE(n.visible_window.has_value());
    CHECK(*n.visible_window == 0);
}

TEST_CASE("hard rules over the whole categorical grid") {
    for (const auto& rep : all_representations())
        for (const auto& sup : all_supports())
            for (bool faceted : {false, true})
                for (bool segmented : {false, true}) {
                    TimelineDesign d;
                    d.representation = rep;
                    d.support = sup;
                    if (faceted) d.layout.faceting = Faceted{2};
                    if (segmented) d.layout.segmentation = Segmented{4};
                    CAPTURE(representation_name(rep));
                    CAPTURE(support_name(sup));
                    CAPTURE(faceted);
                    CAPTURE(segmented);

                    const bool spiral = std::holds_alternative<Helicoid>(rep) || std::holds_alternative<Spherical>(rep);
                    const bool cyl = std::holds_alternative<ConcentricCylinders>(sup);
                    const bool cubic = std::holds_alternative<Cubic>(sup);
                    const auto r = validate_design(d);
                    CHECK(r.has(kRuleSpiralNeedsCylinders) == (spiral && faceted && !cyl));
                    CHECK(r.has(kRuleCubicNeedsBranches) == (cubic && !faceted && !segmented));
                    CHECK(r.ok() == !((spiral && faceted && !cyl) || (cubic && !faceted && !segmented)));
                    CHECK(r.has(kRuleFacetedHelicoid) == (faceted && std::holds_alternative<Helicoid>(rep)));
                    CHECK(r.has(kRuleSphericalPeriodic) == (segmented && std::holds_alternative<Spherical>(rep)));
                    CHECK(r.has(kRuleSupportUnused) == (!faceted && !segmented));
                }
}

TEST_CASE("helicoid with a faceted layout on a vertical plane names the rule") {
    TimelineDesign d;
    d.representation = Helicoid{};
    d.support = VerticalPlane{};
    d.layout.faceting = Faceted{2};
    const auto r = validate_design(d);
    CHECK_FALSE(r.ok());
    CHECK(r.error_summary().find(kRuleSpiralNeedsCylinders) != std::string::npos);
    CHECK(r.errors().size() == 1);
}

TEST_CASE("cubic capacity warning") {
    TimelineDesign d;
    d.support = Cubic{1, 2};
    d.layout.faceting = Faceted{3};
    CHECK(validate_design(d).has(kRuleCubicCapacity));
    d.layout.faceting = Faceted{2};
    CHECK_FALSE(validate_design(d).has(kRuleCubicCapacity));
}

TEST_CASE("numeric parameters") {
    auto bad = [](auto mutate) {
        TimelineDesign d;
        mutate(d);
        const auto r = validate_design(d);
        return !r.ok() && r.has(kRuleParameter);
    };
    CHECK(bad([](TimelineDesign& d) { d.scale.unit_length = 0.0; }));
    CHECK(bad([](TimelineDesign& d) { d.scale.unit_length = std::nan(""); }));
    CHECK(bad([](TimelineDesign& d) { d.scale.kind = ChronologicalLog{0.0}; }));
    CHECK(bad([](TimelineDesign& d) { d.scale.kind = Relative{}; }));
    CHECK(bad([](TimelineDesign& d) { d.layout.faceting = Faceted{1}; }));
    CHECK(bad([](TimelineDesign& d) { d.layout.segmentation = Segmented{1}; }));
    CHECK(bad([](TimelineDesign& d) { d.layout.branch_gap = -1.0; }));
    CHECK(bad([](TimelineDesign& d) { d.representation = FlatLine{{0, 0, 0}, {1, 1, 0}}; }));
    CHECK(bad([](TimelineDesign& d) { d.representation = ConvexArc{{}, -1.0}; }));
    CHECK(bad([](TimelineDesign& d) { d.representation = ConvexParabola{0.0, 1.0}; }));
    CHECK(bad([](TimelineDesign& d) { d.representation = Helicoid{{}, 1.0, 2, 0.5}; }));
    CHECK(bad([](TimelineDesign& d) { d.representation = Spherical{{}, 1.0, 0.5}; }));
    CHECK(bad([](TimelineDesign& d) { d.support = MultiplePlanes{1, 0.5}; }));
    CHECK(bad([](TimelineDesign& d) { d.support = Cubic{0, 2}; }));
    CHECK(bad([](TimelineDesign& d) { d.support = ConcentricCylinders{0.0}; }));
    CHECK(bad([](TimelineDesign& d) { d.snapshot_scale = 0.0; }));
    CHECK_FALSE(bad([](TimelineDesign&) {}));
}

TEST_CASE("validate_design is total over random designs") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> any(-5.0, 5.0);
    std::uniform_int_distribution<int> pick(0, 5);
    const double specials[] = {0.0, -0.0, std::nan(""), INFINITY, -INFINITY, 1e308};
    auto value = [&] { return pick(rng) == 0 ? specials[pick(rng)] : any(rng); };
    for (int i = 0; i < 2000; ++i) {
        TimelineDesign d;
        d.scale.unit_length = value();
        d.layout.branch_gap = value();
        d.snapshot_scale = value();
        auto reps = all_representations();
        d.representation = reps[static_cast<std::size_t>(pick(rng))];
        std::visit([&](auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, ConvexArc> || std::is_same_v<T, Helicoid> || std::is_same_v<T, Spherical>)
                r.radius = value();
        }, d.representation);
        auto sups = all_supports();
        d.support = sups[static_cast<std::size_t>(pick(rng) % 5)];
        if (pick(rng) % 2) d.layout.faceting = Faceted{static_cast<std::size_t>(pick(rng))};
        if (pick(rng) % 2) d.layout.segmentation = Segmented{static_cast<std::size_t>(pick(rng))};
        CHECK_NOTHROW(validate_design(d));
    }
}

TEST_CASE("names") {
    CHECK(to_string(Severity::Warning) == "warning");
    CHECK(representation_name(Spherical{}) == "spherical");
    CHECK(support_name(ConcentricCylinders{}) == "concentric_cylinders");
    CHECK(scale_name(ChronologicalLog{}) == "chronological_log");
}
