#pragma once
// Deterministic placement of every (branch, time point) slot of a timeline.

#include <cstddef>
#include <span>
#include <vector>

#include "tl3d/design/design.hpp"
#include "tl3d/geometry.hpp"
#include "tl3d/layout/curve.hpp"
#include "tl3d/layout/errors.hpp"
#include "tl3d/model/dataset.hpp"

namespace tl3d::layout {

struct SlotRef {
    std::size_t branch = 0;
    std::size_t index = 0;  // dataset time index

    bool operator==(const SlotRef&) const = default;
};

/// A run of consecutive time points; each slot holds the snapshots shown at
/// that time point (one for a lineage branch, several for a unified one).
struct TimelineBranch {
    std::size_t start_index = 0;
    std::vector<std::vector<model::SnapshotId>> slots;

    std::size_t length() const { return slots.size(); }
    std::size_t end_index() const { return start_index + slots.size() - 1; }
    bool contains(std::size_t index) const { return index >= start_index && index - start_index < slots.size(); }
    std::span<const model::SnapshotId> slot(std::size_t index) const { return slots[index - start_index]; }

    static TimelineBranch from_lineage(const model::Branch& branch);

    bool operator==(const TimelineBranch&) const = default;
};

enum class Visibility { Visible, Collapsed, FilteredOut, LodSkipped };

std::string_view to_string(Visibility v);

struct Placement {
    std::size_t branch_id = 0;
    std::size_t lane = 0;     // position on the support (branch or segment)
    std::size_t segment = 0;  // segment within the branch, 0 when unsegmented
    std::size_t time_index = 0;
    double arc_length = 0.0;  // curve parameter the slot was evaluated at
    Vec3 position;
    Quat orientation;         // snapshot front (+z) turned toward the viewer
    double uniform_scale = 1.0;
    Visibility visibility = Visibility::Visible;

    bool operator==(const Placement&) const = default;
};

struct CollapseRange {
    std::size_t branch_id = 0;
    std::size_t start_index = 0;
    std::size_t end_index = 0;

    bool operator==(const CollapseRange&) const = default;
};

struct GapIndicator {
    std::size_t branch_id = 0;
    std::size_t lane = 0;
    std::size_t start_index = 0;
    std::size_t end_index = 0;
    Vec3 position;
    std::size_t collapsed_count = 0;

    bool operator==(const GapIndicator&) const = default;
};

struct LayoutResult {
    /// Branch-major, time index ascending.
    std::vector<Placement> placements;
    SlotRef central;
    std::vector<GapIndicator> gap_indicators;
    std::size_t lane_count = 0;
    /// Index into placements of each branch's first slot.
    std::vector<std::size_t> branch_offsets;

    const Placement& at(SlotRef slot) const;
    Placement& at(SlotRef slot);

    bool operator==(const LayoutResult&) const = default;
};

/// Holds the inputs of a layout so that it can be re-solved for another
/// central slot. Construction validates everything except the central slot.
class LayoutSolver {
public:
    /// Throws LayoutError(InvalidDesign) on hard validation errors and
    /// (InvalidArgument) for malformed branches, collapses or LOD stride.
    LayoutSolver(const model::S4DDataset& dataset, std::vector<TimelineBranch> branches, design::TimelineDesign design,
                 std::vector<CollapseRange> collapses, std::size_t lod_stride);

    /// Throws LayoutError(UnknownCentral) when the slot does not exist.
    LayoutResult solve(SlotRef central) const;

    const std::vector<TimelineBranch>& branches() const { return branches_; }
    const design::TimelineDesign& design() const { return design_; }
    const GuidingCurve& curve() const { return curve_; }
    const model::S4DDataset& dataset() const { return *dataset_; }
    /// Arc length per scale unit (differs from 1 only for helicoids, where
    /// one turn spans points_per_loop median time steps).
    double arc_factor() const { return arc_factor_; }
    bool has_slot(SlotRef slot) const;

private:
    struct Lane {
        std::size_t branch;
        std::size_t segment;
    };

    double base_offset(std::size_t branch, std::size_t index) const;
    std::size_t segment_of(std::size_t index) const;
    Vec3 support_offset(std::size_t lane) const;
    Vec3 place(std::size_t lane, double arc, double sphere_turn) const;

    const model::S4DDataset* dataset_;
    std::vector<TimelineBranch> branches_;
    design::TimelineDesign design_;
    std::vector<CollapseRange> collapses_;
    std::size_t lod_stride_;
    GuidingCurve curve_;
    std::vector<double> offsets_;
    std::vector<double> baselines_;  // per branch, Relative scale only
    double arc_factor_ = 1.0;
    std::vector<Lane> lanes_;
    std::vector<std::vector<std::size_t>> lane_of_segment_;  // [branch][segment - first segment]
    std::vector<std::size_t> first_segment_;
};

LayoutResult solve_layout(const model::S4DDataset& dataset, std::span<const TimelineBranch> branches,
                          const design::TimelineDesign& design, SlotRef central,
                          std::span<const CollapseRange> collapses = {}, std::size_t lod_stride = 1);

/// Same as solving again with `new_central`.
LayoutResult recentral(const LayoutSolver& context, SlotRef new_central);

/// Rotation about the vertical axis turning local +z toward the viewer.
Quat billboard(const Vec3& position);

}  // namespace tl3d::layout
