#include <cmath>
#include <vector>

#include "tl3d/bench/generator.hpp"
#include "tl3d/bench/rng.hpp"

namespace tl3d::bench {

namespace {

constexpr double kRootRadius = 0.5;
constexpr double kGrowthPerStep = 0.002;
constexpr double kDriftPerStep = 0.01;  // fraction of the radius

struct Cell {
    Vec3 position;
    double radius;
    model::SnapshotId last_id;
};

Vec3 random_unit(Rng& rng) {
    // Rejection sampling keeps the draw count independent of the platform libm.
    for (;;) {
        Vec3 v{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        const double n2 = dot(v, v);
        if (n2 > 1e-6 && n2 <= 1.0) return v * (1.0 / std::sqrt(n2));
    }
}

}  // namespace

model::S4DDataset generate_lineage_surrogate(std::uint64_t seed, std::size_t generations,
                                             std::size_t division_interval) {
    if (generations > 8) throw BenchError(BenchErrc::InvalidConfig, "at most 8 generations are supported");
    if (division_interval == 0) throw BenchError(BenchErrc::InvalidConfig, "division_interval must be positive");

    Rng rng(seed);
    const std::size_t D = division_interval;
    const std::size_t T = (generations + 1) * D;
    std::vector<double> timestamps(T);
    std::vector<model::TimePoint> time_points(T);
    std::vector<model::TrackEdge> tracks;

    std::vector<Cell> cells{{Vec3{0.0, 0.0, 0.0}, kRootRadius, 0}};
    model::SnapshotId next_id = 0;
    for (std::size_t t = 0; t < T; ++t) {
        const std::size_t gen = t / D;
        timestamps[t] = 89.0 * static_cast<double>(t);
        time_points[t].index = t;

        if (t > 0 && t % D == 0) {
            std::vector<Cell> children;
            for (const Cell& parent : cells) {
                const Vec3 dir = random_unit(rng);
                for (double side : {1.0, -1.0}) {
                    const double r = parent.radius * std::cbrt(0.5) * (1.0 + 0.1 * rng.uniform(-1.0, 1.0));
                    children.push_back({parent.position + dir * (side * 0.5 * parent.radius), r, parent.last_id});
                }
            }
            cells = std::move(children);
        } else if (t > 0) {
            for (Cell& c : cells) {
                c.position = c.position + random_unit(rng) * (kDriftPerStep * c.radius);
                c.radius *= 1.0 + kGrowthPerStep;
            }
        }

        for (Cell& c : cells) {
            model::ObjectSnapshot snap;
            snap.id = next_id++;
            snap.shape = model::Sphere{c.position, c.radius};
            snap.annotations[kGenerationField] = static_cast<double>(gen);
            snap.annotations[kVolumeField] = 4.0 / 3.0 * kPi * c.radius * c.radius * c.radius;
            if (gen < generations) snap.annotations[kLifespanField] = static_cast<double>((gen + 1) * D - 1 - t);
            if (t > 0) {
                const bool divided = t % D == 0;
                tracks.push_back({c.last_id, snap.id,
                                  divided ? model::TrackKind::FissionChild : model::TrackKind::Continuation});
            }
            c.last_id = snap.id;
            time_points[t].snapshots.push_back(std::move(snap));
        }
    }

    model::DatasetMeta meta{"lineage-g" + std::to_string(generations) + "-seed" + std::to_string(seed), "m"};
    return model::S4DDataset::build(std::move(meta), std::move(timestamps), std::move(time_points), std::move(tracks));
}

}  // namespace tl3d::bench
