#include "tl3d/model/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_set>

#include "tl3d/simd/kernels.hpp"

namespace tl3d::model {
namespace {

[[noreturn]] void fail(ModelErrc code, const std::string& msg) { throw ModelError(code, msg); }

std::string id_str(SnapshotId id) { return std::to_string(id); }

void validate_shape(const ObjectSnapshot& s) {
    if (const auto* sphere = std::get_if<Sphere>(&s.shape)) {
        if (!(sphere->radius > 0.0) || !std::isfinite(sphere->radius) || !is_finite(sphere->center)) {
            fail(ModelErrc::InvalidDataset, "snapshot " + id_str(s.id) + ": sphere radius must be finite and > 0");
        }
        return;
    }
    const auto& mesh = std::get<Mesh>(s.shape);
    if (mesh.vertices.size() < 4) {
        fail(ModelErrc::InvalidDataset, "snapshot " + id_str(s.id) + ": mesh needs at least 4 vertices");
    }
    for (const auto& v : mesh.vertices) {
        if (!is_finite(v)) fail(ModelErrc::InvalidDataset, "snapshot " + id_str(s.id) + ": non-finite vertex");
    }
    for (const auto& tri : mesh.triangles) {
        for (auto idx : tri) {
            if (idx >= mesh.vertices.size()) {
                fail(ModelErrc::InvalidDataset, "snapshot " + id_str(s.id) + ": triangle index out of range");
            }
        }
    }
}

void validate_annotations(const ObjectSnapshot& s) {
    for (const auto& [field, value] : s.annotations) {
        if (const double* v = std::get_if<double>(&value); v != nullptr && !std::isfinite(*v)) {
            fail(ModelErrc::InvalidDataset, "snapshot " + id_str(s.id) + ": non-finite value for '" + field + "'");
        }
    }
}

struct KindCounts {
    std::size_t continuation = 0;
    std::size_t fission = 0;
    std::size_t fusion = 0;
};

KindCounts count_kinds(std::span<const std::size_t> edges, std::span<const TrackEdge> tracks) {
    KindCounts c;
    for (auto e : edges) {
        switch (tracks[e].kind) {
            case TrackKind::Continuation: ++c.continuation; break;
            case TrackKind::FissionChild: ++c.fission; break;
            case TrackKind::FusionParent: ++c.fusion; break;
        }
    }
    return c;
}

void accumulate_bounds(const Shape& shape, Vec3& lo, Vec3& hi) {
    auto grow = [&](const Vec3& p, double r) {
        lo = {std::min(lo.x, p.x - r), std::min(lo.y, p.y - r), std::min(lo.z, p.z - r)};
        hi = {std::max(hi.x, p.x + r), std::max(hi.y, p.y + r), std::max(hi.z, p.z + r)};
    };
    if (const auto* sphere = std::get_if<Sphere>(&shape)) {
        grow(sphere->center, sphere->radius);
    } else {
        for (const auto& v : std::get<Mesh>(shape).vertices) grow(v, 0.0);
    }
}

}  // namespace

Vec3 shape_center(const Shape& shape) {
    if (const auto* sphere = std::get_if<Sphere>(&shape)) return sphere->center;
    const auto& mesh = std::get<Mesh>(shape);
    Vec3 sum;
    for (const auto& v : mesh.vertices) sum += v;
    return mesh.vertices.empty() ? sum : sum / static_cast<double>(mesh.vertices.size());
}

std::optional<double> ObjectSnapshot::numeric(const std::string& field) const {
    auto it = annotations.find(field);
    if (it == annotations.end()) return std::nullopt;
    if (const double* v = std::get_if<double>(&it->second)) return *v;
    return std::nullopt;
}

S4DDataset S4DDataset::build(DatasetMeta meta, std::vector<double> timestamps, std::vector<TimePoint> time_points,
                             std::vector<TrackEdge> tracks) {
    if (timestamps.size() != time_points.size()) {
        fail(ModelErrc::InvalidDataset, "timestamps and time points differ in length");
    }
    for (std::size_t i = 0; i < timestamps.size(); ++i) {
        if (!std::isfinite(timestamps[i])) fail(ModelErrc::InvalidDataset, "non-finite timestamp");
        if (i > 0 && !(timestamps[i] > timestamps[i - 1])) {
            fail(ModelErrc::InvalidDataset, "timestamps must be strictly increasing (index " + std::to_string(i) + ")");
        }
    }

    S4DDataset d;
    d.meta_ = std::move(meta);
    d.timestamps_ = std::move(timestamps);
    d.time_points_ = std::move(time_points);
    d.tracks_ = std::move(tracks);

    constexpr double inf = std::numeric_limits<double>::infinity();
    Vec3 lo{inf, inf, inf};
    Vec3 hi{-inf, -inf, -inf};
    for (std::size_t t = 0; t < d.time_points_.size(); ++t) {
        const auto& tp = d.time_points_[t];
        if (tp.index != t) {
            fail(ModelErrc::InvalidDataset, "time point index " + std::to_string(tp.index) + " at position " +
                                                std::to_string(t));
        }
        for (std::size_t k = 0; k < tp.snapshots.size(); ++k) {
            const auto& s = tp.snapshots[k];
            validate_shape(s);
            validate_annotations(s);
            if (!d.locations_.emplace(s.id, SnapshotLocation{t, k}).second) {
                fail(ModelErrc::InvalidDataset, "duplicate snapshot id " + id_str(s.id));
            }
            accumulate_bounds(s.shape, lo, hi);
        }
    }
    if (!d.locations_.empty()) {
        d.extent_ = std::max({hi.x - lo.x, hi.y - lo.y, hi.z - lo.z, 1e-9});
    }

    std::set<std::pair<SnapshotId, SnapshotId>> seen;
    for (std::size_t e = 0; e < d.tracks_.size(); ++e) {
        const auto& edge = d.tracks_[e];
        auto from = d.locations_.find(edge.from);
        auto to = d.locations_.find(edge.to);
        if (from == d.locations_.end() || to == d.locations_.end()) {
            fail(ModelErrc::InconsistentTrack,
                 "track edge " + id_str(edge.from) + "->" + id_str(edge.to) + " references an unknown snapshot");
        }
        if (to->second.time_index != from->second.time_index + 1) {
            fail(ModelErrc::InconsistentTrack,
                 "track edge " + id_str(edge.from) + "->" + id_str(edge.to) + " does not link consecutive time points");
        }
        if (!seen.emplace(edge.from, edge.to).second) {
            fail(ModelErrc::InconsistentTrack, "duplicate track edge " + id_str(edge.from) + "->" + id_str(edge.to));
        }
        d.out_edges_[edge.from].push_back(e);
        d.in_edges_[edge.to].push_back(e);
    }

    for (const auto& [id, edges] : d.out_edges_) {
        const auto c = count_kinds(edges, d.tracks_);
        const bool ok = (c.continuation == 1 && c.fission == 0 && c.fusion == 0) ||
                        (c.continuation == 0 && c.fission >= 2 && c.fusion == 0) ||
                        (c.continuation == 0 && c.fission == 0 && c.fusion == 1);
        if (!ok) {
            fail(ModelErrc::InconsistentTrack,
                 "snapshot " + id_str(id) +
                     " has invalid outgoing edges (expected one continuation, 2+ fission children, or one fusion edge)");
        }
    }
    for (const auto& [id, edges] : d.in_edges_) {
        const auto c = count_kinds(edges, d.tracks_);
        const bool ok = (c.fusion == 0 && c.continuation + c.fission == 1) ||
                        (c.fusion >= 2 && c.continuation == 0 && c.fission == 0);
        if (!ok) {
            fail(ModelErrc::InconsistentTrack,
                 "snapshot " + id_str(id) + " has invalid incoming edges (expected one predecessor or 2+ fusion parents)");
        }
    }
    return d;
}

const ObjectSnapshot& S4DDataset::snapshot(SnapshotId id) const {
    auto it = locations_.find(id);
    if (it == locations_.end()) fail(ModelErrc::UnknownSnapshot, "unknown snapshot " + id_str(id));
    return time_points_[it->second.time_index].snapshots[it->second.slot];
}

std::size_t S4DDataset::time_index_of(SnapshotId id) const {
    auto it = locations_.find(id);
    if (it == locations_.end()) fail(ModelErrc::UnknownSnapshot, "unknown snapshot " + id_str(id));
    return it->second.time_index;
}

std::span<const std::size_t> S4DDataset::outgoing(SnapshotId id) const {
    auto it = out_edges_.find(id);
    if (it == out_edges_.end()) return {};
    return it->second;
}

std::span<const std::size_t> S4DDataset::incoming(SnapshotId id) const {
    auto it = in_edges_.find(id);
    if (it == in_edges_.end()) return {};
    return it->second;
}

std::optional<SnapshotId> S4DDataset::continuation_of(SnapshotId id) const {
    for (auto e : outgoing(id)) {
        if (tracks_[e].kind == TrackKind::Continuation) return tracks_[e].to;
    }
    return std::nullopt;
}

Object4D make_object(const S4DDataset& dataset, std::vector<SnapshotId> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (members.empty()) fail(ModelErrc::InconsistentTrack, "empty 4D object");
    Object4D obj;
    obj.root_id = members.front();
    std::size_t root_time = dataset.time_index_of(obj.root_id);
    for (auto id : members) {
        const std::size_t t = dataset.time_index_of(id);
        if (t < root_time) {
            root_time = t;
            obj.root_id = id;
        }
    }
    obj.members = std::move(members);
    for (const auto& b : lineage_branches(obj, dataset)) obj.intervals.push_back({b.start_index, b.end_index()});
    return obj;
}

Object4D expand_4d_object(const S4DDataset& dataset, SnapshotId seed_id, bool include_lineage) {
    if (!dataset.contains(seed_id)) fail(ModelErrc::UnknownSnapshot, "unknown snapshot " + id_str(seed_id));
    const auto tracks = dataset.tracks();
    std::unordered_set<SnapshotId> visited{seed_id};
    std::vector<SnapshotId> stack{seed_id};
    while (!stack.empty()) {
        const SnapshotId cur = stack.back();
        stack.pop_back();
        auto visit = [&](std::span<const std::size_t> edges, bool forward) {
            for (auto e : edges) {
                const auto& edge = tracks[e];
                if (!include_lineage && edge.kind != TrackKind::Continuation) continue;
                const SnapshotId next = forward ? edge.to : edge.from;
                if (visited.insert(next).second) stack.push_back(next);
            }
        };
        visit(dataset.outgoing(cur), true);
        visit(dataset.incoming(cur), false);
    }
    return make_object(dataset, std::vector<SnapshotId>(visited.begin(), visited.end()));
}

std::vector<Branch> lineage_branches(const Object4D& obj, const S4DDataset& dataset) {
    const std::unordered_set<SnapshotId> members(obj.members.begin(), obj.members.end());
    for (auto id : obj.members) {
        if (!dataset.contains(id)) {
            fail(ModelErrc::InconsistentTrack, "4D object member " + id_str(id) + " is not in the dataset");
        }
    }
    const auto tracks = dataset.tracks();
    auto has_member_predecessor = [&](SnapshotId id) {
        for (auto e : dataset.incoming(id)) {
            if (tracks[e].kind == TrackKind::Continuation && members.count(tracks[e].from) != 0) return true;
        }
        return false;
    };

    std::vector<SnapshotId> sorted = obj.members;
    std::sort(sorted.begin(), sorted.end());
    std::vector<Branch> branches;
    std::size_t covered = 0;
    for (auto id : sorted) {
        if (has_member_predecessor(id)) continue;
        Branch b;
        b.start_index = dataset.time_index_of(id);
        SnapshotId cur = id;
        b.snapshots.push_back(cur);
        while (auto next = dataset.continuation_of(cur)) {
            if (members.count(*next) == 0) break;
            cur = *next;
            b.snapshots.push_back(cur);
        }
        covered += b.snapshots.size();
        branches.push_back(std::move(b));
    }
    if (covered != members.size()) {
        fail(ModelErrc::InconsistentTrack, "4D object members do not partition into continuation chains");
    }
    std::sort(branches.begin(), branches.end(),
              [](const Branch& a, const Branch& b) { return a.snapshots.front() < b.snapshots.front(); });
    return branches;
}

std::pair<double, double> annotation_range(const S4DDataset& dataset, const std::string& field) {
    std::vector<double> values;
    bool found = false;
    for (const auto& tp : dataset.time_points()) {
        for (const auto& s : tp.snapshots) {
            auto it = s.annotations.find(field);
            if (it == s.annotations.end()) continue;
            found = true;
            const double* v = std::get_if<double>(&it->second);
            if (v == nullptr) fail(ModelErrc::NonNumericalField, "field '" + field + "' is not numerical");
            values.push_back(*v);
        }
    }
    if (!found) fail(ModelErrc::NoSuchField, "no snapshot carries field '" + field + "'");
    const auto mm = simd::minmax(values);
    return {mm.min, mm.max};
}

std::vector<Object4D> all_objects(const S4DDataset& dataset) {
    std::vector<SnapshotId> ids;
    ids.reserve(dataset.snapshot_count());
    for (const auto& tp : dataset.time_points()) {
        for (const auto& s : tp.snapshots) ids.push_back(s.id);
    }
    std::sort(ids.begin(), ids.end());
    std::unordered_set<SnapshotId> claimed;
    std::vector<Object4D> out;
    for (auto id : ids) {
        if (claimed.count(id) != 0) continue;
        auto obj = expand_4d_object(dataset, id, true);
        claimed.insert(obj.members.begin(), obj.members.end());
        out.push_back(std::move(obj));
    }
    std::sort(out.begin(), out.end(), [](const Object4D& a, const Object4D& b) { return a.root_id < b.root_id; });
    return out;
}

std::string_view to_string(TrackKind kind) {
    switch (kind) {
        case TrackKind::Continuation: return "continuation";
        case TrackKind::FissionChild: return "fission_child";
        case TrackKind::FusionParent: return "fusion_parent";
    }
    return "continuation";
}

std::optional<TrackKind> track_kind_from_string(std::string_view s) {
    if (s == "continuation") return TrackKind::Continuation;
    if (s == "fission_child") return TrackKind::FissionChild;
    if (s == "fusion_parent") return TrackKind::FusionParent;
    return std::nullopt;
}

}  // namespace tl3d::model
