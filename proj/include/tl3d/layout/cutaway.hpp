#pragma once
// Cut-away operators defined relative to the central slot's barycenter and
// re-applied at every other slot relative to that slot's barycenter, with
// the same world-aligned orientation.

#include <span>
#include <variant>
#include <vector>

#include "tl3d/geometry.hpp"
#include "tl3d/layout/errors.hpp"
#include "tl3d/model/dataset.hpp"

namespace tl3d::layout {

/// Cuts away everything with n.(x - barycenter)/|n| + offset < 0.
struct PlaneCut {
    Vec3 normal{1.0, 0.0, 0.0};
    double offset = 0.0;

    bool operator==(const PlaneCut&) const = default;
};

/// Cuts away everything inside the axis-aligned box barycenter + center +- half_extents.
struct BoxCut {
    Vec3 center;
    Vec3 half_extents{0.5, 0.5, 0.5};

    bool operator==(const BoxCut&) const = default;
};

using CutawayOperator = std::variant<PlaneCut, BoxCut>;

enum class ClipState { Kept, Partial, Clipped };

std::string_view to_string(ClipState c);

/// Throws LayoutError(DegenerateOperator) for a zero normal or a box
/// without volume.
void validate_cutaway(const CutawayOperator& op);

/// Mean of the snapshot centers.
Vec3 slot_barycenter(const model::S4DDataset& dataset, std::span<const model::SnapshotId> snapshots);

/// Spheres are clipped when their center is cut; meshes are Clipped when
/// every vertex is cut and Partial when only some are.
std::vector<ClipState> apply_cutaway(const model::S4DDataset& dataset, std::span<const model::SnapshotId> snapshots,
                                     const CutawayOperator& op, const Vec3& barycenter);

}  // namespace tl3d::layout
