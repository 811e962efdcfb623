#include "tl3d/bench/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>

#include "tl3d/bench/rng.hpp"
#include "tl3d/simd/kernels.hpp"

namespace tl3d::bench {

using model::SnapshotId;

namespace {

constexpr int kMaxAttempts = 64;
constexpr int kMaxValueRolls = 100;
constexpr std::size_t kPatternSpacing = 4;  // leaves a free cell between injected windows

using GroupGrid = std::vector<std::vector<std::size_t>>;  // [object][time]

void check_config(const GenConfig& c) {
    auto fail = [](const std::string& m) { throw BenchError(BenchErrc::InvalidConfig, m); };
    if (c.time_point_count == 0) fail("time_point_count must be positive");
    if (c.object_count == 0) fail("object_count must be positive");
    if (c.group_count == 0) fail("group_count must be positive");
    if (c.gaussians_per_segment_length == 0) fail("gaussians_per_segment_length must be positive");
    for (std::size_t g : c.pattern)
        if (g >= c.group_count) fail("pattern group " + std::to_string(g) + " is not below group_count");
}

bool matches(const std::vector<std::size_t>& row, std::size_t s, const Pattern& p) {
    return row[s] == p[0] && row[s + 1] == p[1] && row[s + 2] == p[2];
}

GroupGrid random_walk(Rng& rng, const GenConfig& c) {
    GroupGrid grid(c.object_count, std::vector<std::size_t>(c.time_point_count));
    for (auto& row : grid) {
        row[0] = rng.below(c.group_count);
        for (std::size_t t = 1; t < row.size(); ++t)
            row[t] = rng.bernoulli(kGroupStay) || c.group_count == 1 ? row[t - 1] : rng.below(c.group_count);
    }
    return grid;
}

// Picks non-overlapping (object, start) windows; empty optional when the
// shuffle could not fit them.
std::optional<std::vector<PatternHit>> pick_windows(Rng& rng, const GenConfig& c) {
    std::vector<PatternHit> slots;
    for (std::size_t o = 0; o < c.object_count; ++o)
        for (std::size_t s = 0; s + 3 <= c.time_point_count; ++s) slots.push_back({o, s});
    for (std::size_t i = slots.size(); i > 1; --i) std::swap(slots[i - 1], slots[rng.below(i)]);

    std::vector<PatternHit> chosen;
    for (const PatternHit& cand : slots) {
        if (chosen.size() == c.pattern_occurrences) break;
        bool clash = std::any_of(chosen.begin(), chosen.end(), [&](const PatternHit& h) {
            if (h.object != cand.object) return false;
            std::size_t d = h.start > cand.start ? h.start - cand.start : cand.start - h.start;
            return d < kPatternSpacing;
        });
        if (!clash) chosen.push_back(cand);
    }
    if (chosen.size() < c.pattern_occurrences) return std::nullopt;
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

// Breaks every accidental occurrence by rewriting a non-injected cell of it.
bool repair(Rng& rng, const GenConfig& c, GroupGrid& grid, const std::vector<std::vector<bool>>& fixed,
            const std::set<PatternHit>& injected) {
    const std::size_t cap = 100 * c.object_count * c.time_point_count + 100;
    for (std::size_t step = 0; step < cap; ++step) {
        bool clean = true;
        for (std::size_t o = 0; o < c.object_count && clean; ++o) {
            for (std::size_t s = 0; s + 3 <= c.time_point_count; ++s) {
                if (!matches(grid[o], s, c.pattern) || injected.count({o, s})) continue;
                clean = false;
                std::vector<std::size_t> free_cells;
                for (std::size_t t = s; t < s + 3; ++t)
                    if (!fixed[o][t]) free_cells.push_back(t);
                if (free_cells.empty() || c.group_count == 1) return false;
                std::size_t t = free_cells[rng.below(free_cells.size())];
                std::size_t g = rng.below(c.group_count - 1);
                grid[o][t] = g >= grid[o][t] ? g + 1 : g;
                break;
            }
        }
        if (clean) return true;
    }
    return false;
}

std::vector<GaussianBump> roll_gaussians(Rng& rng, const GenConfig& c) {
    const std::size_t len = c.gaussians_per_segment_length;
    const std::size_t count = std::max<std::size_t>(1, c.time_point_count / len);
    std::vector<GaussianBump> out;
    for (std::size_t k = 0; k < count; ++k) {
        const double lo = static_cast<double>(k * len);
        const double hi = std::min(static_cast<double>((k + 1) * len), static_cast<double>(c.time_point_count));
        GaussianBump g;
        g.mean = rng.uniform(lo, hi);
        g.amplitude = rng.uniform(kAmplitudeMin, kAmplitudeMax);
        g.sigma = rng.uniform(kSigmaMin, kSigmaMax);
        out.push_back(g);
    }
    return out;
}

}  // namespace

double gaussian_sum(const std::vector<GaussianBump>& gaussians, double t) {
    double v = 0.0;
    for (const GaussianBump& g : gaussians) {
        const double d = (t - g.mean) / g.sigma;
        v += g.amplitude * std::exp(-0.5 * d * d);
    }
    return v;
}

std::size_t pattern_capacity(std::size_t time_points, std::size_t objects) {
    if (time_points < 3) return 0;
    return objects * ((time_points - 3) / kPatternSpacing + 1);
}

std::vector<PatternHit> find_pattern(const model::S4DDataset& dataset, const Pattern& pattern) {
    std::vector<PatternHit> hits;
    for (const model::TimePoint& tp : dataset.time_points()) {
        for (const model::ObjectSnapshot& snap : tp.snapshots) {
            bool is_start = std::none_of(dataset.incoming(snap.id).begin(), dataset.incoming(snap.id).end(),
                                         [&](std::size_t e) {
                                             return dataset.tracks()[e].kind == model::TrackKind::Continuation;
                                         });
            if (!is_start) continue;
            std::vector<std::optional<std::string>> labels;
            for (std::optional<SnapshotId> id = snap.id; id; id = dataset.continuation_of(*id)) {
                const auto& ann = dataset.snapshot(*id).annotations;
                auto it = ann.find(kGroupField);
                if (it != ann.end() && std::holds_alternative<model::Categorical>(it->second))
                    labels.push_back(std::get<model::Categorical>(it->second).label);
                else
                    labels.push_back(std::nullopt);
            }
            for (std::size_t s = 0; s + 3 <= labels.size(); ++s) {
                bool ok = true;
                for (std::size_t k = 0; k < 3; ++k) ok = ok && labels[s + k] == std::to_string(pattern[k]);
                if (ok) hits.push_back({snap.id, tp.index + s});
            }
        }
    }
    std::sort(hits.begin(), hits.end());
    return hits;
}

Generated generate(const GenConfig& config) {
    check_config(config);
    if (config.pattern_occurrences > pattern_capacity(config.time_point_count, config.object_count))
        throw BenchError(BenchErrc::UnplaceablePattern,
                         std::to_string(config.pattern_occurrences) + " pattern occurrences do not fit in " +
                             std::to_string(config.object_count) + " objects of " +
                             std::to_string(config.time_point_count) + " time points");

    const std::size_t T = config.time_point_count;
    const std::size_t O = config.object_count;
    Rng rng(config.seed);

    GroupGrid grid;
    std::vector<PatternHit> windows;
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
        grid = random_walk(rng, config);
        auto picked = pick_windows(rng, config);
        if (!picked) continue;
        windows = std::move(*picked);
        std::vector<std::vector<bool>> fixed(O, std::vector<bool>(T, false));
        for (const PatternHit& w : windows)
            for (std::size_t k = 0; k < 3; ++k) {
                grid[w.object][w.start + k] = config.pattern[k];
                fixed[w.object][w.start + k] = true;
            }
        placed = repair(rng, config, grid, fixed, std::set<PatternHit>(windows.begin(), windows.end()));
    }
    if (!placed)
        throw BenchError(BenchErrc::UnplaceablePattern, "could not place the pattern without accidental occurrences");

    std::vector<GaussianBump> gaussians;
    std::vector<double> values(T);
    std::size_t argmax = 0;
    for (int roll = 0;; ++roll) {
        if (roll == kMaxValueRolls)
            throw BenchError(BenchErrc::InvalidConfig, "could not draw a value field with a unique maximum");
        gaussians = roll_gaussians(rng, config);
        for (std::size_t t = 0; t < T; ++t) values[t] = gaussian_sum(gaussians, static_cast<double>(t));
        argmax = simd::argmax(values);
        double runner_up = -std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < T; ++t)
            if (t != argmax) runner_up = std::max(runner_up, values[t]);
        if (values[argmax] - runner_up > 1e-9) break;
    }

    const double r0 = O == 1 ? 0.15 : std::min(0.15, 0.3 * std::sin(kPi / static_cast<double>(O)));
    std::vector<double> timestamps(T);
    std::vector<model::TimePoint> time_points(T);
    std::vector<model::TrackEdge> tracks;
    GroundTruth truth;
    truth.pattern = config.pattern;
    truth.group_counts.assign(config.group_count, 0);
    for (std::size_t t = 0; t < T; ++t) {
        timestamps[t] = static_cast<double>(t);
        time_points[t].index = t;
        const double r = r0 * (1.0 + kRadiusGrowth * static_cast<double>(t));
        for (std::size_t k = 0; k < O; ++k) {
            const double angle = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(O);
            model::ObjectSnapshot snap;
            snap.id = t * O + k;
            snap.shape = model::Sphere{{kRingRadius * std::cos(angle), 0.0, kRingRadius * std::sin(angle)}, r};
            snap.annotations[kGroupField] = model::Categorical{std::to_string(grid[k][t])};
            snap.annotations[kValueField] = values[t];
            snap.annotations[kVolumeField] = 4.0 / 3.0 * kPi * r * r * r;
            ++truth.group_counts[grid[k][t]];
            time_points[t].snapshots.push_back(std::move(snap));
            if (t > 0) tracks.push_back({(t - 1) * O + k, t * O + k, model::TrackKind::Continuation});
        }
    }
    for (const PatternHit& w : windows) truth.occurrences.push_back({w.object, w.start});  // object k has root id k
    std::sort(truth.occurrences.begin(), truth.occurrences.end());
    truth.value_argmax = argmax;
    truth.gaussians = std::move(gaussians);

    model::DatasetMeta meta{"synthetic-" + std::to_string(T) + "tp-seed" + std::to_string(config.seed), "m"};
    return {model::S4DDataset::build(std::move(meta), std::move(timestamps), std::move(time_points), std::move(tracks)),
            std::move(truth)};
}

}  // namespace tl3d::bench
