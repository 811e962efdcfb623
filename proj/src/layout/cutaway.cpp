#include "tl3d/layout/cutaway.hpp"

#include <cmath>

#include "tl3d/simd/kernels.hpp"

namespace tl3d::layout {
namespace {

struct Soa {
    std::vector<double> x, y, z;

    void push(const Vec3& v) {
        x.push_back(v.x);
        y.push_back(v.y);
        z.push_back(v.z);
    }
    simd::PointsView view() const { return {x.data(), y.data(), z.data(), x.size()}; }
};

std::vector<std::uint8_t> classify(const Soa& pts, const CutawayOperator& op, const Vec3& barycenter) {
    std::vector<std::uint8_t> cut(pts.x.size());
    if (cut.empty()) return cut;
    const auto& k = simd::kernels();
    if (const auto* plane = std::get_if<PlaneCut>(&op)) {
        k.halfspace(pts.view(), barycenter, normalized(plane->normal), plane->offset, cut.data());
    } else {
        const auto& box = std::get<BoxCut>(op);
        k.box_inside(pts.view(), barycenter + box.center, box.half_extents, cut.data());
    }
    return cut;
}

}  // namespace

std::string_view to_string(ClipState c) {
    switch (c) {
        case ClipState::Kept: return "kept";
        case ClipState::Partial: return "partial";
        case ClipState::Clipped: return "clipped";
    }
    return "kept";
}

void validate_cutaway(const CutawayOperator& op) {
    if (const auto* plane = std::get_if<PlaneCut>(&op)) {
        if (!is_finite(plane->normal) || !(norm(plane->normal) > 0.0) || std::isnan(plane->offset)) {
            throw LayoutError(LayoutErrc::DegenerateOperator, "cut-away plane needs a non-zero normal");
        }
        return;
    }
    const auto& box = std::get<BoxCut>(op);
    const Vec3& h = box.half_extents;
    if (!is_finite(box.center) || !is_finite(h) || !(h.x > 0.0 && h.y > 0.0 && h.z > 0.0)) {
        throw LayoutError(LayoutErrc::DegenerateOperator, "cut-away box needs a positive volume");
    }
}

Vec3 slot_barycenter(const model::S4DDataset& dataset, std::span<const model::SnapshotId> snapshots) {
    Vec3 sum;
    for (auto id : snapshots) sum += model::shape_center(dataset.snapshot(id).shape);
    return snapshots.empty() ? sum : sum / static_cast<double>(snapshots.size());
}

std::vector<ClipState> apply_cutaway(const model::S4DDataset& dataset, std::span<const model::SnapshotId> snapshots,
                                     const CutawayOperator& op, const Vec3& barycenter) {
    validate_cutaway(op);
    std::vector<ClipState> out(snapshots.size(), ClipState::Kept);

    // Sphere centers are classified in one batch, mesh vertices per mesh.
    Soa centers;
    std::vector<std::size_t> sphere_slots;
    for (std::size_t k = 0; k < snapshots.size(); ++k) {
        const auto& shape = dataset.snapshot(snapshots[k]).shape;
        if (const auto* sphere = std::get_if<model::Sphere>(&shape)) {
            centers.push(sphere->center);
            sphere_slots.push_back(k);
            continue;
        }
        Soa verts;
        for (const auto& v : std::get<model::Mesh>(shape).vertices) verts.push(v);
        const auto cut = classify(verts, op, barycenter);
        std::size_t n = 0;
        for (auto c : cut) n += c;
        out[k] = n == 0 ? ClipState::Kept : (n == cut.size() ? ClipState::Clipped : ClipState::Partial);
    }
    const auto cut = classify(centers, op, barycenter);
    for (std::size_t j = 0; j < sphere_slots.size(); ++j) {
        if (cut[j] != 0) out[sphere_slots[j]] = ClipState::Clipped;
    }
    return out;
}

}  // namespace tl3d::layout
