#pragma once
// Small hand-built datasets shared by the tests.

#include <cstddef>
#include <vector>

#include "tl3d/model/dataset.hpp"

namespace fixtures {

using namespace tl3d;

/// `objects` spheres per time point, ids t * objects + k, Continuation tracks,
/// timestamps t * spacing.
inline model::S4DDataset chains(std::size_t time_points, std::size_t objects, double spacing = 1.0) {
    std::vector<double> ts(time_points);
    std::vector<model::TimePoint> tps(time_points);
    std::vector<model::TrackEdge> edges;
    for (std::size_t t = 0; t < time_points; ++t) {
        ts[t] = spacing * static_cast<double>(t);
        tps[t].index = t;
        for (std::size_t k = 0; k < objects; ++k) {
            model::ObjectSnapshot s;
            s.id = t * objects + k;
            s.shape = model::Sphere{{static_cast<double>(k), 0.0, 0.0}, 0.25 + 0.01 * static_cast<double>(t)};
            s.annotations["value"] = static_cast<double>(t) + 0.1 * static_cast<double>(k);
            tps[t].snapshots.push_back(s);
            if (t > 0) edges.push_back({(t - 1) * objects + k, t * objects + k, model::TrackKind::Continuation});
        }
    }
    return model::S4DDataset::build({"chains", "m"}, ts, tps, edges);
}

/// Parent 0 -> 1 -> 2 divides into children 3, 4, continuing 3 -> 5 -> 7 and
/// 4 -> 6 -> 8. A separate object 9 -> 10 -> ... lives at every time point.
///
///   t:   0   1   2   3   4   5
///        0 - 1 - 2 < 3 - 5 - 7
///                  \ 4 - 6 - 8
///        9  10  11  12  13  14
inline model::S4DDataset fission() {
    std::vector<double> ts{0, 1, 2, 3, 4, 5};
    std::vector<model::TimePoint> tps(6);
    auto sphere = [](model::SnapshotId id, double x) {
        model::ObjectSnapshot s;
        s.id = id;
        s.shape = model::Sphere{{x, 0.0, 0.0}, 0.5};
        s.annotations["volume"] = static_cast<double>(id);
        return s;
    };
    const std::vector<std::vector<std::pair<model::SnapshotId, double>>> layout{
        {{0, 0.0}, {9, 5.0}},  {{1, 0.0}, {10, 5.0}},           {{2, 0.0}, {11, 5.0}},
        {{3, -1.0}, {4, 1.0}, {12, 5.0}}, {{5, -1.0}, {6, 1.0}, {13, 5.0}}, {{7, -1.0}, {8, 1.0}, {14, 5.0}},
    };
    for (std::size_t t = 0; t < 6; ++t) {
        tps[t].index = t;
        for (auto [id, x] : layout[t]) tps[t].snapshots.push_back(sphere(id, x));
    }
    using K = model::TrackKind;
    std::vector<model::TrackEdge> edges{{0, 1, K::Continuation},  {1, 2, K::Continuation},  {2, 3, K::FissionChild},
                                        {2, 4, K::FissionChild},  {3, 5, K::Continuation},  {5, 7, K::Continuation},
                                        {4, 6, K::Continuation},  {6, 8, K::Continuation},  {9, 10, K::Continuation},
                                        {10, 11, K::Continuation}, {11, 12, K::Continuation}, {12, 13, K::Continuation},
                                        {13, 14, K::Continuation}};
    return model::S4DDataset::build({"fission", "um"}, ts, tps, edges);
}

}  // namespace fixtures
