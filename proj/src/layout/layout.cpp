#include "tl3d/layout/layout.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "tl3d/layout/scale.hpp"

namespace tl3d::layout {
namespace {

[[noreturn]] void invalid(const std::string& msg) { throw LayoutError(LayoutErrc::InvalidArgument, msg); }

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

double median_gap(const std::vector<double>& offsets) {
    std::vector<double> gaps;
    for (std::size_t i = 1; i < offsets.size(); ++i) {
        const double g = offsets[i] - offsets[i - 1];
        if (g > 0.0) gaps.push_back(g);
    }
    if (gaps.empty()) return 0.0;
    std::sort(gaps.begin(), gaps.end());
    return gaps[gaps.size() / 2];
}

}  // namespace

std::string_view to_string(Visibility v) {
    switch (v) {
        case Visibility::Visible: return "visible";
        case Visibility::Collapsed: return "collapsed";
        case Visibility::FilteredOut: return "filtered_out";
        case Visibility::LodSkipped: return "lod_skipped";
    }
    return "visible";
}

TimelineBranch TimelineBranch::from_lineage(const model::Branch& branch) {
    TimelineBranch b;
    b.start_index = branch.start_index;
    for (auto id : branch.snapshots) b.slots.push_back({id});
    return b;
}

const Placement& LayoutResult::at(SlotRef slot) const {
    const std::size_t first = branch_offsets.at(slot.branch);
    return placements.at(first + (slot.index - placements.at(first).time_index));
}

Placement& LayoutResult::at(SlotRef slot) {
    const std::size_t first = branch_offsets.at(slot.branch);
    return placements.at(first + (slot.index - placements.at(first).time_index));
}

Quat billboard(const Vec3& position) {
    const double vx = -position.x;
    const double vz = -position.z;
    if (std::hypot(vx, vz) < 1e-12) return Quat::identity();
    const double yaw = std::atan2(vx, vz);
    return {0.0, std::sin(0.5 * yaw), 0.0, std::cos(0.5 * yaw)};
}

LayoutSolver::LayoutSolver(const model::S4DDataset& dataset, std::vector<TimelineBranch> branches,
                           design::TimelineDesign design, std::vector<CollapseRange> collapses,
                           std::size_t lod_stride)
    : dataset_(&dataset),
      branches_(std::move(branches)),
      design_(std::move(design)),
      collapses_(std::move(collapses)),
      lod_stride_(lod_stride),
      curve_(design_.representation) {
    const auto report = design::validate_design(design_);
    if (!report.ok()) throw LayoutError(LayoutErrc::InvalidDesign, report.error_summary());
    if (lod_stride_ == 0) invalid("lod_stride must be >= 1");

    const std::size_t time_count = dataset.time_point_count();
    for (std::size_t b = 0; b < branches_.size(); ++b) {
        const auto& br = branches_[b];
        if (br.slots.empty()) invalid("branch " + std::to_string(b) + " is empty");
        if (br.end_index() >= time_count) invalid("branch " + std::to_string(b) + " exceeds the dataset time range");
        for (std::size_t i = br.start_index; i <= br.end_index(); ++i) {
            for (auto id : br.slot(i)) {
                if (!dataset.contains(id) || dataset.time_index_of(id) != i) {
                    invalid("snapshot " + std::to_string(id) + " does not belong to time point " + std::to_string(i));
                }
            }
        }
    }

    std::sort(collapses_.begin(), collapses_.end(), [](const CollapseRange& a, const CollapseRange& b) {
        return a.branch_id != b.branch_id ? a.branch_id < b.branch_id : a.start_index < b.start_index;
    });
    for (std::size_t k = 0; k < collapses_.size(); ++k) {
        const auto& c = collapses_[k];
        if (c.branch_id >= branches_.size()) invalid("collapse on unknown branch " + std::to_string(c.branch_id));
        const auto& br = branches_[c.branch_id];
        if (c.start_index > c.end_index || !br.contains(c.start_index) || !br.contains(c.end_index)) {
            invalid("collapse range outside branch " + std::to_string(c.branch_id));
        }
        if (k > 0 && collapses_[k - 1].branch_id == c.branch_id && collapses_[k - 1].end_index >= c.start_index) {
            invalid("collapse ranges overlap on branch " + std::to_string(c.branch_id));
        }
    }

    const auto* rel = std::get_if<design::Relative>(&design_.scale.kind);
    std::optional<std::size_t> first_baseline;
    if (rel != nullptr && !rel->baselines.empty()) first_baseline = rel->baselines[0];
    offsets_ = scale_map(design_.scale, dataset.timestamps(), first_baseline).offsets;
    if (rel != nullptr) {
        if (rel->baselines.size() != 1 && rel->baselines.size() < branches_.size()) {
            throw LayoutError(LayoutErrc::MissingBaseline, "relative scale needs one baseline per branch");
        }
        for (std::size_t b = 0; b < branches_.size(); ++b) {
            const std::size_t idx = rel->baselines.size() == 1 ? rel->baselines[0] : rel->baselines[b];
            baselines_.push_back(scale_map(design_.scale, dataset.timestamps(), idx).baseline_offset);
        }
    }

    if (const auto* h = std::get_if<design::Helicoid>(&design_.representation)) {
        double step = median_gap(offsets_);
        if (step <= 0.0) step = design_.scale.unit_length;
        arc_factor_ = curve_.loop_length() / (static_cast<double>(h->points_per_loop) * step);
    }

    for (std::size_t b = 0; b < branches_.size(); ++b) {
        const std::size_t first = segment_of(branches_[b].start_index);
        const std::size_t last = segment_of(branches_[b].end_index());
        first_segment_.push_back(first);
        lane_of_segment_.emplace_back();
        for (std::size_t s = first; s <= last; ++s) {
            lane_of_segment_.back().push_back(lanes_.size());
            lanes_.push_back({b, s});
        }
    }
}

bool LayoutSolver::has_slot(SlotRef slot) const {
    return slot.branch < branches_.size() && branches_[slot.branch].contains(slot.index);
}

std::size_t LayoutSolver::segment_of(std::size_t index) const {
    if (const auto* seg = std::get_if<design::Segmented>(&design_.layout.segmentation)) return index / seg->period;
    return 0;
}

double LayoutSolver::base_offset(std::size_t branch, std::size_t index) const {
    double s = offsets_[index];
    if (const auto* seg = std::get_if<design::Segmented>(&design_.layout.segmentation)) {
        s -= offsets_[(index / seg->period) * seg->period];
    }
    if (!baselines_.empty()) s -= baselines_[branch];
    return s;
}

Vec3 LayoutSolver::support_offset(std::size_t lane) const {
    const double gap = design_.layout.branch_gap;
    const auto l = static_cast<double>(lane);
    return std::visit(
        [&](const auto& s) -> Vec3 {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, design::VerticalPlane>) {
                return {0.0, l * gap, 0.0};
            } else if constexpr (std::is_same_v<T, design::HorizontalPlane>) {
                return {0.0, 0.0, -l * gap};
            } else if constexpr (std::is_same_v<T, design::MultiplePlanes>) {
                const std::size_t per_plane = std::max<std::size_t>(1, ceil_div(lanes_.size(), s.count));
                const auto plane = static_cast<double>(lane / per_plane);
                const auto within = static_cast<double>(lane % per_plane);
                return {0.0, within * gap, -plane * s.plane_gap};
            } else if constexpr (std::is_same_v<T, design::Cubic>) {
                const auto row = static_cast<double>(lane / s.cols);
                const auto col = static_cast<double>(lane % s.cols);
                return {0.0, row * gap, -col * gap};
            } else {
                return {};
            }
        },
        design_.support);
}

Vec3 LayoutSolver::place(std::size_t lane, double arc, double sphere_turn) const {
    Vec3 p = curve_.eval(arc).position;
    const auto* cyl = std::get_if<design::ConcentricCylinders>(&design_.support);
    if (const auto* sph = std::get_if<design::Spherical>(&design_.representation)) {
        const Vec3& u = curve_.anchor_direction();
        const Vec3& w = curve_.right_direction();
        const Vec3 rel = p - sph->center;
        const double a = dot(rel, u), b = dot(rel, w), h = dot(rel, kWorldUp);
        const double c = std::cos(sphere_turn), s = std::sin(sphere_turn);
        Vec3 turned = u * (a * c - b * s) + w * (a * s + b * c) + kWorldUp * h;
        if (cyl != nullptr && lane > 0) {
            turned = turned * ((sph->radius + static_cast<double>(lane) * cyl->radius_step) / sph->radius);
        }
        return sph->center + turned;
    }
    if (cyl == nullptr) return p + support_offset(lane);
    if (lane == 0) return p;
    const double step = static_cast<double>(lane) * cyl->radius_step;
    auto scale_about_axis = [&](const Vec3& axis, double radius) {
        const Vec3 rel{p.x - axis.x, 0.0, p.z - axis.z};
        const Vec3 grown = rel * ((radius + step) / radius);
        return Vec3{axis.x + grown.x, p.y, axis.z + grown.z};
    };
    if (const auto* arc_rep = std::get_if<design::ConvexArc>(&design_.representation)) {
        return scale_about_axis(arc_rep->center, arc_rep->radius);
    }
    if (const auto* hel = std::get_if<design::Helicoid>(&design_.representation)) {
        return scale_about_axis(hel->axis_point, hel->radius);
    }
    Vec3 radial{p.x, 0.0, p.z};
    radial = norm(radial) > 1e-12 ? normalized(radial) : kViewerForward;
    return p + radial * step;
}

LayoutResult LayoutSolver::solve(SlotRef central) const {
    if (!has_slot(central)) {
        throw LayoutError(LayoutErrc::UnknownCentral, "central slot (" + std::to_string(central.branch) + ", " +
                                                          std::to_string(central.index) + ") does not exist");
    }
    const auto* sphere = std::get_if<design::Spherical>(&design_.representation);

    // Curve parameter of every slot: anchored on the central slot, or measured
    // from the north pole for the bounded spherical spiral.
    double anchor = base_offset(central.branch, central.index);
    if (sphere != nullptr) {
        double lo = anchor, hi = anchor;
        for (std::size_t b = 0; b < branches_.size(); ++b) {
            for (std::size_t i = branches_[b].start_index; i <= branches_[b].end_index(); ++i) {
                lo = std::min(lo, base_offset(b, i));
                hi = std::max(hi, base_offset(b, i));
            }
        }
        anchor = lo;
        if ((hi - lo) * arc_factor_ > curve_.total_length()) {
            throw LayoutError(LayoutErrc::OutOfDomain, "timeline is longer than the spherical spiral");
        }
    }
    auto arc_of = [&](std::size_t b, std::size_t i) { return (base_offset(b, i) - anchor) * arc_factor_; };

    // The spiral turns about the vertical axis so the central slot faces the viewer.
    double sphere_turn = 0.0;
    if (sphere != nullptr) {
        const Vec3 rel = curve_.eval(arc_of(central.branch, central.index)).position - sphere->center;
        const double a = dot(rel, curve_.anchor_direction());
        const double b = dot(rel, curve_.right_direction());
        if (std::hypot(a, b) > 1e-12) sphere_turn = -std::atan2(b, a);
    }

    const double uniform_scale = design_.snapshot_scale / dataset_->spatial_extent();
    const std::size_t ci = central.index;
    auto lod_skipped = [&](std::size_t i) {
        const std::size_t dist = i > ci ? i - ci : ci - i;
        if (dist % lod_stride_ != 0) return true;
        return design_.visible_window.has_value() && dist > *design_.visible_window;
    };

    LayoutResult result;
    result.central = central;
    result.lane_count = lanes_.size();
    std::size_t ck = 0;
    for (std::size_t b = 0; b < branches_.size(); ++b) {
        const auto& br = branches_[b];
        result.branch_offsets.push_back(result.placements.size());
        while (ck < collapses_.size() && collapses_[ck].branch_id < b) ++ck;
        const std::size_t branch_collapse_begin = ck;
        for (std::size_t i = br.start_index; i <= br.end_index(); ++i) {
            Placement p;
            p.branch_id = b;
            p.segment = segment_of(i);
            p.lane = lane_of_segment_[b][p.segment - first_segment_[b]];
            p.time_index = i;
            p.arc_length = arc_of(b, i);
            p.position = place(p.lane, p.arc_length, sphere_turn);
            p.orientation = billboard(p.position);
            p.uniform_scale = uniform_scale;

            bool collapsed = false;
            for (std::size_t k = branch_collapse_begin; k < collapses_.size() && collapses_[k].branch_id == b; ++k) {
                if (i >= collapses_[k].start_index && i <= collapses_[k].end_index) collapsed = true;
            }
            if (collapsed && !(b == central.branch && i == ci)) {
                p.visibility = Visibility::Collapsed;
            } else if (lod_skipped(i)) {
                p.visibility = Visibility::LodSkipped;
            }
            result.placements.push_back(p);
        }
    }

    // One indicator per contiguous collapsed run within a lane.
    for (const auto& c : collapses_) {
        std::optional<std::size_t> run_start;
        auto emit = [&](std::size_t first_index, std::size_t last_index) {
            const auto& first = result.at({c.branch_id, first_index});
            GapIndicator g;
            g.branch_id = c.branch_id;
            g.lane = first.lane;
            g.start_index = first_index;
            g.end_index = last_index;
            g.collapsed_count = last_index - first_index + 1;
            const double mid = 0.5 * (first.arc_length + result.at({c.branch_id, last_index}).arc_length);
            g.position = place(g.lane, mid, sphere_turn);
            result.gap_indicators.push_back(g);
        };
        for (std::size_t i = c.start_index; i <= c.end_index; ++i) {
            const auto& p = result.at({c.branch_id, i});
            const bool hidden = p.visibility == Visibility::Collapsed;
            if (run_start && (!hidden || p.lane != result.at({c.branch_id, i - 1}).lane)) {
                emit(*run_start, i - 1);
                run_start.reset();
            }
            if (hidden && !run_start) run_start = i;
        }
        if (run_start) emit(*run_start, c.end_index);
    }
    return result;
}

LayoutResult solve_layout(const model::S4DDataset& dataset, std::span<const TimelineBranch> branches,
                          const design::TimelineDesign& design, SlotRef central,
                          std::span<const CollapseRange> collapses, std::size_t lod_stride) {
    LayoutSolver solver(dataset, {branches.begin(), branches.end()}, design, {collapses.begin(), collapses.end()},
                        lod_stride);
    return solver.solve(central);
}

LayoutResult recentral(const LayoutSolver& context, SlotRef new_central) { return context.solve(new_central); }

}  // namespace tl3d::layout
