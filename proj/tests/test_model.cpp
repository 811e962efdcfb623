#include <algorithm>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"

using namespace tl3d;
using namespace tl3d::model;

namespace {

ObjectSnapshot sphere(SnapshotId id, double x = 0.0, double r = 1.0) {
    ObjectSnapshot s;
    s.id = id;
    s.shape = Sphere{{x, 0.0, 0.0}, r};
    return s;
}

TimePoint tp(std::size_t index, std::vector<ObjectSnapshot> snaps) { return {index, std::move(snaps)}; }

ModelErrc build_error(std::vector<double> ts, std::vector<TimePoint> tps, std::vector<TrackEdge> edges) {
    try {
        S4DDataset::build({"x"}, std::move(ts), std::move(tps), std::move(edges));
    } catch (const ModelError& e) {
        return e.code();
    }
    FAIL("expected a ModelError");
    return ModelErrc::InvalidDataset;
}

using K = TrackKind;

}  // namespace

TEST_CASE("build rejects malformed time structure") {
    CHECK(build_error({0, 0}, {tp(0, {sphere(0)}), tp(1, {sphere(1)})}, {}) == ModelErrc::InvalidDataset);
    CHECK(build_error({1, 0}, {tp(0, {sphere(0)}), tp(1, {sphere(1)})}, {}) == ModelErrc::InvalidDataset);
    CHECK(build_error({0, 1}, {tp(0, {sphere(0)}), tp(2, {sphere(1)})}, {}) == ModelErrc::InvalidDataset);
    CHECK(build_error({0}, {tp(0, {sphere(0)}), tp(1, {sphere(1)})}, {}) == ModelErrc::InvalidDataset);
    CHECK(build_error({0, 1}, {tp(0, {sphere(0)}), tp(1, {sphere(0)})}, {}) == ModelErrc::InvalidDataset);
    CHECK(build_error({0}, {tp(0, {sphere(0, 0.0, 0.0)})}, {}) == ModelErrc::InvalidDataset);

    auto bad = sphere(0);
    bad.annotations["v"] = std::nan("");
    CHECK(build_error({0}, {tp(0, {bad})}, {}) == ModelErrc::InvalidDataset);

    ObjectSnapshot mesh;
    mesh.id = 0;
    mesh.shape = Mesh{{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{0, 1, 7}}};
    CHECK(build_error({0}, {tp(0, {mesh})}, {}) == ModelErrc::InvalidDataset);
}

TEST_CASE("build rejects inconsistent tracks") {
    auto three = [] {
        return std::vector<TimePoint>{tp(0, {sphere(0)}), tp(1, {sphere(1), sphere(2)}), tp(2, {sphere(3)})};
    };
    // Skips a time point.
    CHECK(build_error({0, 1, 2}, three(), {{0, 3, K::Continuation}}) == ModelErrc::InconsistentTrack);
    // Goes backwards.
    CHECK(build_error({0, 1, 2}, three(), {{1, 0, K::Continuation}}) == ModelErrc::InconsistentTrack);
    // Unknown endpoint.
    CHECK(build_error({0, 1, 2}, three(), {{0, 99, K::Continuation}}) == ModelErrc::InconsistentTrack);
    // Two continuations out of one snapshot.
    CHECK(build_error({0, 1, 2}, three(), {{0, 1, K::Continuation}, {0, 2, K::Continuation}}) ==
          ModelErrc::InconsistentTrack);
    // A single fission child.
    CHECK(build_error({0, 1, 2}, three(), {{0, 1, K::FissionChild}}) == ModelErrc::InconsistentTrack);
    // Mixed kinds leaving one snapshot.
    CHECK(build_error({0, 1, 2}, three(), {{0, 1, K::FissionChild}, {0, 2, K::Continuation}}) ==
          ModelErrc::InconsistentTrack);
    // One fusion parent alone.
    CHECK(build_error({0, 1, 2}, three(), {{1, 3, K::FusionParent}}) == ModelErrc::InconsistentTrack);
    // Duplicate edge.
    CHECK(build_error({0, 1, 2}, three(), {{0, 1, K::Continuation}, {0, 1, K::Continuation}}) ==
          ModelErrc::InconsistentTrack);
    // Valid fission and fusion.
    CHECK_NOTHROW(S4DDataset::build({"ok"}, {0, 1, 2}, three(),
                                    {{0, 1, K::FissionChild}, {0, 2, K::FissionChild}, {1, 3, K::FusionParent},
                                     {2, 3, K::FusionParent}}));
}

TEST_CASE("accessors and spatial extent") {
    const auto ds = fixtures::fission();
    CHECK(ds.time_point_count() == 6);
    CHECK(ds.snapshot_count() == 15);
    CHECK(ds.time_index_of(6) == 4);
    CHECK(ds.continuation_of(1) == SnapshotId{2});
    CHECK_FALSE(ds.continuation_of(2).has_value());  // divides
    CHECK(ds.outgoing(2).size() == 2);
    CHECK(ds.incoming(3).size() == 1);
    CHECK_THROWS_AS(ds.snapshot(99), ModelError);
    // x spans -1.5 .. 5.5 with radius 0.5 spheres; y and z span 1.
    CHECK(ds.spatial_extent() == doctest::Approx(7.0));
}

TEST_CASE("expand_4d_object follows continuation only unless lineage is requested") {
    const auto ds = fixtures::fission();
    auto without = expand_4d_object(ds, 5, false);
    CHECK(without.members == std::vector<SnapshotId>{3, 5, 7});
    CHECK(without.root_id == 3);

    auto tree = expand_4d_object(ds, 5, true);
    CHECK(tree.members == std::vector<SnapshotId>{0, 1, 2, 3, 4, 5, 6, 7, 8});
    CHECK(tree.root_id == 0);

    // Same closure from any member.
    for (SnapshotId id : tree.members) CHECK(expand_4d_object(ds, id, true) == tree);
    CHECK_THROWS_AS(expand_4d_object(ds, 1000, true), ModelError);
}

TEST_CASE("lineage_branches splits a fission tree into one branch before and two after") {
    const auto ds = fixtures::fission();
    const auto branches = lineage_branches(expand_4d_object(ds, 0, true), ds);
    REQUIRE(branches.size() == 3);
    CHECK(branches[0] == Branch{0, {0, 1, 2}});
    CHECK(branches[1] == Branch{3, {3, 5, 7}});
    CHECK(branches[2] == Branch{3, {4, 6, 8}});
    CHECK(branches[1].end_index() == 5);

    const auto obj = expand_4d_object(ds, 0, true);
    CHECK(obj.intervals == std::vector<Interval>{{0, 2}, {3, 5}, {3, 5}});
}

TEST_CASE("fusion parents belong to the child's lineage") {
    std::vector<TimePoint> tps{tp(0, {sphere(0), sphere(1, 3.0)}), tp(1, {sphere(2)}), tp(2, {sphere(3)})};
    const auto ds = S4DDataset::build(
        {"fusion"}, {0, 1, 2}, tps,
        {{0, 2, K::FusionParent}, {1, 2, K::FusionParent}, {2, 3, K::Continuation}});
    const auto obj = expand_4d_object(ds, 3, true);
    CHECK(obj.members == std::vector<SnapshotId>{0, 1, 2, 3});
    const auto branches = lineage_branches(obj, ds);
    REQUIRE(branches.size() == 3);
    CHECK(branches[0].snapshots == std::vector<SnapshotId>{0});
    CHECK(branches[1].snapshots == std::vector<SnapshotId>{1});
    CHECK(branches[2].snapshots == std::vector<SnapshotId>{2, 3});
    CHECK(expand_4d_object(ds, 3, false).members == std::vector<SnapshotId>{2, 3});
}

TEST_CASE("all_objects partitions the snapshots") {
    const auto ds = fixtures::fission();
    const auto objs = all_objects(ds);
    REQUIRE(objs.size() == 2);
    CHECK(objs[0].root_id == 0);
    CHECK(objs[1].root_id == 9);
    std::set<SnapshotId> seen;
    for (const auto& o : objs) seen.insert(o.members.begin(), o.members.end());
    CHECK(seen.size() == ds.snapshot_count());
}

TEST_CASE("make_object accepts arbitrary member sets and rejects unknown ids") {
    const auto ds = fixtures::fission();
    const auto obj = make_object(ds, {9, 10, 0, 1, 2});
    CHECK(obj.root_id == 0);
    CHECK(obj.members == std::vector<SnapshotId>{0, 1, 2, 9, 10});
    CHECK(lineage_branches(obj, ds).size() == 2);
    CHECK_THROWS_AS(make_object(ds, {}), ModelError);
    CHECK_THROWS_AS(make_object(ds, {77}), ModelError);
}

TEST_CASE("annotation_range matches a direct scan") {
    const auto ds = fixtures::chains(7, 3);
    double lo = 1e300, hi = -1e300;
    for (const auto& t : ds.time_points())
        for (const auto& s : t.snapshots) {
            lo = std::min(lo, *s.numeric("value"));
            hi = std::max(hi, *s.numeric("value"));
        }
    const auto [a, b] = annotation_range(ds, "value");
    CHECK(a == lo);
    CHECK(b == hi);

    CHECK_THROWS_AS(annotation_range(ds, "absent"), ModelError);
    auto s = sphere(0);
    s.annotations["kind"] = Categorical{"a"};
    const auto cat = S4DDataset::build({"c"}, {0}, {tp(0, {s})}, {});
    try {
        annotation_range(cat, "kind");
        FAIL("expected NonNumericalField");
    } catch (const ModelError& e) {
        CHECK(e.code() == ModelErrc::NonNumericalField);
    }
}

TEST_CASE("shape centers and track kind names") {
    CHECK(shape_center(Sphere{{1, 2, 3}, 1}) == Vec3{1, 2, 3});
    Mesh m{{{0, 0, 0}, {2, 0, 0}, {0, 4, 0}, {0, 0, 8}}, {}};
    CHECK(shape_center(m) == Vec3{0.5, 1.0, 2.0});
    for (auto k : {K::Continuation, K::FissionChild, K::FusionParent}) CHECK(track_kind_from_string(to_string(k)) == k);
    CHECK_FALSE(track_kind_from_string("merge").has_value());
}
