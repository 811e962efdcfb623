#include "tl3d/design/design.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace tl3d::design {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

class Checker {
public:
    void error(std::string_view rule, std::string msg) {
        report_.violations.push_back({Severity::Error, std::string(rule), std::move(msg)});
    }
    void warning(std::string_view rule, std::string msg) {
        report_.violations.push_back({Severity::Warning, std::string(rule), std::move(msg)});
    }
    void info(std::string_view rule, std::string msg) {
        report_.violations.push_back({Severity::Info, std::string(rule), std::move(msg)});
    }
    void require(bool cond, const std::string& msg) {
        if (!cond) error(kRuleParameter, msg);
    }
    ValidationReport take() { return std::move(report_); }

private:
    ValidationReport report_;
};

void check_parameters(const TimelineDesign& d, Checker& c) {
    c.require(positive(d.scale.unit_length), "scale unit_length must be > 0");
    std::visit(overloaded{
                   [&](const ChronologicalLog& s) { c.require(positive(s.epsilon), "log scale epsilon must be > 0"); },
                   [&](const Relative& s) {
                       c.require(!s.baselines.empty(), "relative scale needs at least one baseline");
                   },
                   [](const auto&) {},
               },
               d.scale.kind);

    if (const auto* f = std::get_if<Faceted>(&d.layout.faceting)) {
        c.require(f->branch_count >= 2, "faceted layout needs branch_count >= 2");
    }
    if (const auto* s = std::get_if<Segmented>(&d.layout.segmentation)) {
        c.require(s->period >= 2, "segmented layout needs period >= 2");
    }
    c.require(std::isfinite(d.layout.branch_gap) && d.layout.branch_gap >= 0.0, "branch_gap must be >= 0");

    std::visit(overloaded{
                   [&](const FlatLine& r) {
                       c.require(is_finite(r.origin), "flat line origin must be finite");
                       c.require(is_finite(r.direction) && std::fabs(norm(r.direction) - 1.0) < 1e-9,
                                 "flat line direction must be a unit vector");
                   },
                   [&](const ConvexArc& r) {
                       c.require(is_finite(r.center), "arc center must be finite");
                       c.require(positive(r.radius), "arc radius must be > 0");
                   },
                   [&](const ConvexParabola& r) {
                       c.require(positive(r.a), "parabola coefficient must be > 0");
                       c.require(positive(r.d0), "parabola apex distance must be > 0");
                   },
                   [&](const ConcaveParabola& r) {
                       c.require(positive(r.a), "parabola coefficient must be > 0");
                       c.require(positive(r.d0), "parabola apex distance must be > 0");
                   },
                   [&](const Helicoid& r) {
                       c.require(is_finite(r.axis_point), "helicoid axis point must be finite");
                       c.require(positive(r.radius), "helicoid radius must be > 0");
                       c.require(r.points_per_loop >= 3, "helicoid needs at least 3 points per loop");
                       c.require(std::isfinite(r.pitch), "helicoid pitch must be finite");
                   },
                   [&](const Spherical& r) {
                       c.require(is_finite(r.center), "sphere center must be finite");
                       c.require(positive(r.radius), "sphere radius must be > 0");
                       c.require(std::isfinite(r.loops) && r.loops >= 1.0, "spherical spiral needs loops >= 1");
                   },
               },
               d.representation);

    std::visit(overloaded{
                   [&](const MultiplePlanes& s) {
                       c.require(s.count >= 2, "multiple planes support needs count >= 2");
                       c.require(positive(s.plane_gap), "plane_gap must be > 0");
                   },
                   [&](const Cubic& s) { c.require(s.rows >= 1 && s.cols >= 1, "cubic support needs rows, cols >= 1"); },
                   [&](const ConcentricCylinders& s) {
                       c.require(positive(s.radius_step), "radius_step must be > 0");
                   },
                   [](const auto&) {},
               },
               d.support);

    c.require(positive(d.snapshot_scale), "snapshot_scale must be > 0");
}

}  // namespace

bool ValidationReport::ok() const {
    for (const auto& v : violations) {
        if (v.severity == Severity::Error) return false;
    }
    return true;
}

bool ValidationReport::has(std::string_view rule) const {
    for (const auto& v : violations) {
        if (v.rule == rule) return true;
    }
    return false;
}

std::vector<Violation> ValidationReport::errors() const {
    std::vector<Violation> out;
    for (const auto& v : violations) {
        if (v.severity == Severity::Error) out.push_back(v);
    }
    return out;
}

std::string ValidationReport::error_summary() const {
    std::ostringstream os;
    const auto errs = errors();
    for (std::size_t i = 0; i < errs.size(); ++i) os << (i ? "\n" : "") << errs[i].rule << ": " << errs[i].message;
    return os.str();
}

ValidationReport validate_design(const TimelineDesign& d) {
    Checker c;
    check_parameters(d, c);

    const bool faceted = d.layout.faceted();
    const bool segmented = d.layout.segmented();
    const bool helicoid = std::holds_alternative<Helicoid>(d.representation);
    const bool spherical = std::holds_alternative<Spherical>(d.representation);
    const bool cylinders = std::holds_alternative<ConcentricCylinders>(d.support);

    if ((helicoid || spherical) && faceted && !cylinders) {
        c.error(kRuleSpiralNeedsCylinders,
                std::string(representation_name(d.representation)) +
                    " representation implies a concentric cylinder support when the layout is faceted (got " +
                    std::string(support_name(d.support)) + ")");
    }
    if (std::holds_alternative<Cubic>(d.support) && !faceted && !segmented) {
        c.error(kRuleCubicNeedsBranches, "cubic support has no branches to arrange in a unified, unsegmented layout");
    }
    if (spherical && segmented) {
        c.warning(kRuleSphericalPeriodic,
                  "the varying radius between spherical loops makes periodic segments hard to compare");
    }
    if (faceted && helicoid) {
        c.warning(kRuleFacetedHelicoid, "juxtaposed branches can be confused with the next helicoid loop");
    }
    if (const auto* cubic = std::get_if<Cubic>(&d.support); cubic != nullptr && faceted) {
        const auto planned = std::get<Faceted>(d.layout.faceting).branch_count;
        if (cubic->rows * cubic->cols < planned) {
            c.warning(kRuleCubicCapacity, "cubic grid holds fewer cells than the planned branch count");
        }
    }
    if (!faceted && !segmented) {
        c.info(kRuleSupportUnused, "a unified layout has a single branch; the support is unused");
    }
    return c.take();
}

std::span<const std::string_view> preset_names() {
    static constexpr std::array<std::string_view, 3> names{"helicoid-unified", "curved-faceted", "no-timeline"};
    return names;
}

TimelineDesign preset(std::string_view name) {
    TimelineDesign d;
    if (name == "helicoid-unified") {
        d.scale = {Sequential{}, 0.3};
        d.layout = {Unified{}, NoSegmentation{}, 0.5};
        d.representation = Helicoid{{0.0, 0.0, 0.0}, 1.5, 20, 0.6};
        d.support = ConcentricCylinders{0.5};
        d.snapshot_scale = 0.25;
        return d;
    }
    if (name == "curved-faceted") {
        d.scale = {Sequential{}, 0.25};
        d.layout = {Faceted{2}, NoSegmentation{}, 0.5};
        d.representation = ConvexArc{{0.0, 0.0, 0.0}, 3.5};
        d.support = VerticalPlane{};
        d.snapshot_scale = 0.2;
        return d;
    }
    if (name == "no-timeline") {
        d.scale = {Sequential{}, 0.3};
        d.layout = {Unified{}, NoSegmentation{}, 0.5};
        d.representation = FlatLine{{0.0, 0.0, -1.5}, {1.0, 0.0, 0.0}};
        d.support = VerticalPlane{};
        d.snapshot_scale = 0.8;
        d.visible_window = 0;
        return d;
    }
    throw DesignError(DesignErrc::UnknownPreset, "unknown preset '" + std::string(name) + "'");
}

std::string_view to_string(Severity s) {
    switch (s) {
        case Severity::Info: return "info";
        case Severity::Warning: return "warning";
        case Severity::Error: return "error";
    }
    return "error";
}

std::string_view representation_name(const RepresentationSpec& r) {
    static constexpr std::array<std::string_view, 6> names{"flat_line",        "convex_arc", "convex_parabola",
                                                           "concave_parabola", "helicoid",   "spherical"};
    return names[r.index()];
}

std::string_view support_name(const SupportSpec& s) {
    static constexpr std::array<std::string_view, 5> names{"vertical_plane", "horizontal_plane", "multiple_planes",
                                                           "cubic", "concentric_cylinders"};
    return names[s.index()];
}

std::string_view scale_name(const ScaleKind& s) {
    static constexpr std::array<std::string_view, 4> names{"chronological_linear", "chronological_log", "relative",
                                                           "sequential"};
    return names[s.index()];
}

}  // namespace tl3d::design
