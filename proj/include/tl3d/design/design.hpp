#pragma once
// One point of the four-dimension 3D timeline design space: scale, layout,
// representation (guiding curve) and support.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tl3d/error.hpp"
#include "tl3d/geometry.hpp"

namespace tl3d::design {

enum class DesignErrc { UnknownPreset };
using DesignError = CodedError<DesignErrc>;

// --- scale ---------------------------------------------------------------

struct ChronologicalLinear {
    bool operator==(const ChronologicalLinear&) const = default;
};
struct ChronologicalLog {
    double epsilon = 1.0;  // seconds
    bool operator==(const ChronologicalLog&) const = default;
};
/// Aligns branches on a baseline event. One baseline time index per branch;
/// a single entry applies to every branch.
struct Relative {
    std::vector<std::size_t> baselines;
    bool operator==(const Relative&) const = default;
};
struct Sequential {
    bool operator==(const Sequential&) const = default;
};

using ScaleKind = std::variant<ChronologicalLinear, ChronologicalLog, Relative, Sequential>;

struct ScaleSpec {
    ScaleKind kind = Sequential{};
    double unit_length = 0.3;  // m/s (chronological, relative) or m/step (sequential)

    bool operator==(const ScaleSpec&) const = default;
};

// --- layout --------------------------------------------------------------

struct Unified {
    bool operator==(const Unified&) const = default;
};
struct Faceted {
    std::size_t branch_count = 2;  // planned facet count; the data decides the actual one
    bool operator==(const Faceted&) const = default;
};
struct NoSegmentation {
    bool operator==(const NoSegmentation&) const = default;
};
struct Segmented {
    std::size_t period = 2;  // time points per segment
    bool operator==(const Segmented&) const = default;
};

struct LayoutSpec {
    std::variant<Unified, Faceted> faceting = Unified{};
    std::variant<NoSegmentation, Segmented> segmentation = NoSegmentation{};
    double branch_gap = 0.5;

    bool faceted() const { return std::holds_alternative<Faceted>(faceting); }
    bool segmented() const { return std::holds_alternative<Segmented>(segmentation); }

    bool operator==(const LayoutSpec&) const = default;
};

// --- representation ------------------------------------------------------

struct FlatLine {
    Vec3 origin{0.0, 0.0, -1.5};
    Vec3 direction{1.0, 0.0, 0.0};
    bool operator==(const FlatLine&) const = default;
};
struct ConvexArc {
    Vec3 center;
    double radius = 2.0;
    bool operator==(const ConvexArc&) const = default;
};
/// z = -d0 + a x^2 in the horizontal plane: wraps toward the viewer.
struct ConvexParabola {
    double a = 0.2;
    double d0 = 1.5;
    bool operator==(const ConvexParabola&) const = default;
};
/// z = -d0 - a x^2: sends distant time points further away.
struct ConcaveParabola {
    double a = 0.2;
    double d0 = 1.5;
    bool operator==(const ConcaveParabola&) const = default;
};
struct Helicoid {
    Vec3 axis_point;
    double radius = 1.5;
    std::size_t points_per_loop = 20;
    double pitch = 0.6;  // rise per loop
    bool operator==(const Helicoid&) const = default;
};
struct Spherical {
    Vec3 center;
    double radius = 2.0;
    double loops = 4.0;
    bool operator==(const Spherical&) const = default;
};

using RepresentationSpec = std::variant<FlatLine, ConvexArc, ConvexParabola, ConcaveParabola, Helicoid, Spherical>;

// --- support -------------------------------------------------------------

struct VerticalPlane {
    bool operator==(const VerticalPlane&) const = default;
};
struct HorizontalPlane {
    bool operator==(const HorizontalPlane&) const = default;
};
struct MultiplePlanes {
    std::size_t count = 2;
    double plane_gap = 0.5;
    bool operator==(const MultiplePlanes&) const = default;
};
struct Cubic {
    std::size_t rows = 2;
    std::size_t cols = 2;
    bool operator==(const Cubic&) const = default;
};
struct ConcentricCylinders {
    double radius_step = 0.5;
    bool operator==(const ConcentricCylinders&) const = default;
};

using SupportSpec = std::variant<VerticalPlane, HorizontalPlane, MultiplePlanes, Cubic, ConcentricCylinders>;

// --- design --------------------------------------------------------------

struct TimelineDesign {
    ScaleSpec scale;
    LayoutSpec layout;
    RepresentationSpec representation = FlatLine{};
    SupportSpec support = VerticalPlane{};
    double snapshot_scale = 0.25;  // display size of one time point, meters
    /// Time points shown on each side of the central one; unset shows all.
    std::optional<std::size_t> visible_window;

    bool operator==(const TimelineDesign&) const = default;
};

enum class Severity { Info, Warning, Error };

struct Violation {
    Severity severity;
    std::string rule;
    std::string message;

    bool operator==(const Violation&) const = default;
};

struct ValidationReport {
    std::vector<Violation> violations;

    /// No hard errors.
    bool ok() const;
    bool has(std::string_view rule) const;
    std::vector<Violation> errors() const;
    /// Hard errors as "rule: message", newline-separated.
    std::string error_summary() const;
};

/// Pure and total: never throws for any design value.
ValidationReport validate_design(const TimelineDesign& design);

/// "helicoid-unified", "curved-faceted" or "no-timeline"; throws
/// DesignError(UnknownPreset) otherwise.
TimelineDesign preset(std::string_view name);

std::span<const std::string_view> preset_names();

std::string_view to_string(Severity s);
std::string_view representation_name(const RepresentationSpec& r);
std::string_view support_name(const SupportSpec& s);
std::string_view scale_name(const ScaleKind& s);

// Rule identifiers reported by validate_design.
inline constexpr std::string_view kRuleSpiralNeedsCylinders = "spiral-representation-requires-cylinder-support";
inline constexpr std::string_view kRuleCubicNeedsBranches = "cubic-support-requires-branches";
inline constexpr std::string_view kRuleSphericalPeriodic = "spherical-varying-radius-periodic";
inline constexpr std::string_view kRuleFacetedHelicoid = "faceted-helicoid-confusion";
inline constexpr std::string_view kRuleSupportUnused = "support-unused";
inline constexpr std::string_view kRuleCubicCapacity = "cubic-capacity";
inline constexpr std::string_view kRuleParameter = "parameter";

}  // namespace tl3d::design
