#pragma once
// Time-varying spatial 3D datasets: time points holding object snapshots,
// typed track edges between consecutive time points, and annotations.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "tl3d/error.hpp"
#include "tl3d/geometry.hpp"

namespace tl3d::model {

enum class ModelErrc {
    InvalidDataset,
    UnknownSnapshot,
    InconsistentTrack,
    NoSuchField,
    NonNumericalField,
};

using ModelError = CodedError<ModelErrc>;

using SnapshotId = std::uint64_t;

struct Sphere {
    Vec3 center;
    double radius = 1.0;

    bool operator==(const Sphere&) const = default;
};

struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;

    bool operator==(const Mesh&) const = default;
};

using Shape = std::variant<Sphere, Mesh>;

/// Sphere center, or vertex mean for meshes.
Vec3 shape_center(const Shape& shape);

struct Categorical {
    std::string label;

    bool operator==(const Categorical&) const = default;
};

using AnnotationValue = std::variant<Categorical, double>;

struct ObjectSnapshot {
    SnapshotId id = 0;
    Shape shape;
    std::map<std::string, AnnotationValue> annotations;

    /// Numerical value of `field`, if present and numerical.
    std::optional<double> numeric(const std::string& field) const;

    bool operator==(const ObjectSnapshot&) const = default;
};

struct TimePoint {
    std::size_t index = 0;
    std::vector<ObjectSnapshot> snapshots;

    bool operator==(const TimePoint&) const = default;
};

enum class TrackKind { Continuation, FissionChild, FusionParent };

struct TrackEdge {
    SnapshotId from = 0;
    SnapshotId to = 0;
    TrackKind kind = TrackKind::Continuation;

    bool operator==(const TrackEdge&) const = default;
};

struct DatasetMeta {
    std::string name;
    std::string units = "m";

    bool operator==(const DatasetMeta&) const = default;
};

struct SnapshotLocation {
    std::size_t time_index;
    std::size_t slot;
};

/// Immutable once built. All invariants are checked by build().
class S4DDataset {
public:
    /// Validates every invariant and throws ModelError(InvalidDataset or
    /// InconsistentTrack) on the first violation.
    static S4DDataset build(DatasetMeta meta, std::vector<double> timestamps, std::vector<TimePoint> time_points,
                            std::vector<TrackEdge> tracks);

    const DatasetMeta& meta() const { return meta_; }
    std::span<const double> timestamps() const { return timestamps_; }
    std::span<const TimePoint> time_points() const { return time_points_; }
    std::span<const TrackEdge> tracks() const { return tracks_; }
    std::size_t time_point_count() const { return time_points_.size(); }
    std::size_t snapshot_count() const { return locations_.size(); }

    bool contains(SnapshotId id) const { return locations_.count(id) != 0; }
    /// Throws ModelError(UnknownSnapshot).
    const ObjectSnapshot& snapshot(SnapshotId id) const;
    std::size_t time_index_of(SnapshotId id) const;

    /// Indices into tracks() of edges leaving / entering a snapshot.
    std::span<const std::size_t> outgoing(SnapshotId id) const;
    std::span<const std::size_t> incoming(SnapshotId id) const;

    /// Target of the outgoing Continuation edge, if any.
    std::optional<SnapshotId> continuation_of(SnapshotId id) const;

    /// Largest side of the axis-aligned box around every shape (at least a
    /// tiny positive value for degenerate data).
    double spatial_extent() const { return extent_; }

    bool operator==(const S4DDataset& o) const {
        return meta_ == o.meta_ && timestamps_ == o.timestamps_ && time_points_ == o.time_points_ &&
               tracks_ == o.tracks_;
    }

private:
    S4DDataset() = default;

    DatasetMeta meta_;
    std::vector<double> timestamps_;
    std::vector<TimePoint> time_points_;
    std::vector<TrackEdge> tracks_;
    std::unordered_map<SnapshotId, SnapshotLocation> locations_;
    std::unordered_map<SnapshotId, std::vector<std::size_t>> out_edges_;
    std::unordered_map<SnapshotId, std::vector<std::size_t>> in_edges_;
    double extent_ = 1.0;
};

struct Interval {
    std::size_t start;
    std::size_t end;

    bool operator==(const Interval&) const = default;
};

/// A tracked object spanning several time points.
struct Object4D {
    SnapshotId root_id = 0;             // earliest member (time index, then id)
    std::vector<SnapshotId> members;    // sorted ascending
    std::vector<Interval> intervals;    // one per lineage branch, in branch order

    bool operator==(const Object4D&) const = default;
};

/// Maximal chain of Continuation edges.
struct Branch {
    std::size_t start_index = 0;
    std::vector<SnapshotId> snapshots;

    std::size_t end_index() const { return start_index + snapshots.size() - 1; }

    bool operator==(const Branch&) const = default;
};

/// Closure of the track graph (edges followed in both directions) through
/// `seed_id`. Without lineage only Continuation edges are followed.
Object4D expand_4d_object(const S4DDataset& dataset, SnapshotId seed_id, bool include_lineage);

/// Object4D for an arbitrary member set (members need not come from a single
/// closure); used when merging selections.
Object4D make_object(const S4DDataset& dataset, std::vector<SnapshotId> members);

/// Partitions the members of `obj` into maximal Continuation chains, ordered
/// by first snapshot id.
std::vector<Branch> lineage_branches(const Object4D& obj, const S4DDataset& dataset);

/// Exact (min, max) of a numerical field over the snapshots carrying it.
std::pair<double, double> annotation_range(const S4DDataset& dataset, const std::string& field);

/// Every distinct 4D object (lineage included), ordered by root id.
std::vector<Object4D> all_objects(const S4DDataset& dataset);

std::string_view to_string(TrackKind kind);
std::optional<TrackKind> track_kind_from_string(std::string_view s);

}  // namespace tl3d::model
