#pragma once
// Procedural evaluation dataset: spheres on a fixed ring with monotonically
// growing radii, a categorical group walk with injected 3-step patterns, and
// a per-time-point value built from one Gaussian per segment.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tl3d/error.hpp"
#include "tl3d/model/dataset.hpp"

namespace tl3d::bench {

enum class BenchErrc { InvalidConfig, UnplaceablePattern, MissingAnnotation, NoAnswer, InvalidTrace };
using BenchError = CodedError<BenchErrc>;

inline const std::string kGroupField = "group";
inline const std::string kValueField = "value";
inline const std::string kVolumeField = "volume";

using Pattern = std::array<std::size_t, 3>;

struct GenConfig {
    std::size_t time_point_count = 80;
    std::size_t object_count = 6;
    std::size_t group_count = 5;
    Pattern pattern{0, 1, 2};
    std::size_t pattern_occurrences = 3;
    std::size_t gaussians_per_segment_length = 20;
    std::uint64_t seed = 42;

    bool operator==(const GenConfig&) const = default;
};

/// Object identified by the id of its snapshot at its first time point.
struct PatternHit {
    model::SnapshotId object = 0;
    std::size_t start = 0;

    auto operator<=>(const PatternHit&) const = default;
};

struct GaussianBump {
    double mean = 0.0;
    double amplitude = 1.0;
    double sigma = 1.0;

    bool operator==(const GaussianBump&) const = default;
};

struct GroundTruth {
    Pattern pattern{};
    std::vector<PatternHit> occurrences;  // sorted
    std::size_t value_argmax = 0;
    std::vector<std::size_t> group_counts;  // (snapshot, time point) pairs per group
    std::vector<GaussianBump> gaussians;

    bool operator==(const GroundTruth&) const = default;
};

struct Generated {
    model::S4DDataset dataset;
    GroundTruth truth;
};

/// Object k sits at angle 2 pi k / object_count on a horizontal ring of radius 1 m.
inline constexpr double kRingRadius = 1.0;
/// Radii grow by this fraction of the base radius per time point.
inline constexpr double kRadiusGrowth = 0.01;
/// Probability that the group walk keeps the previous group.
inline constexpr double kGroupStay = 0.8;
inline constexpr double kAmplitudeMin = 0.5, kAmplitudeMax = 1.5;
inline constexpr double kSigmaMin = 2.0, kSigmaMax = 5.0;

/// Deterministic for a given config. Throws BenchError(InvalidConfig) or
/// (UnplaceablePattern).
Generated generate(const GenConfig& config);

/// Value of the Gaussian sum at time t.
double gaussian_sum(const std::vector<GaussianBump>& gaussians, double t);

/// Greatest number of non-overlapping pattern occurrences the generator can place.
std::size_t pattern_capacity(std::size_t time_points, std::size_t objects);

/// Brute force over every (object chain, start) pair of the Continuation chains.
std::vector<PatternHit> find_pattern(const model::S4DDataset& dataset, const Pattern& pattern);

/// Lineage-bearing surrogate: one root cell dividing every
/// `division_interval` time points, `generations` times. generations <= 8.
model::S4DDataset generate_lineage_surrogate(std::uint64_t seed, std::size_t generations,
                                             std::size_t division_interval = 10);

inline const std::string kLifespanField = "lifespan";
inline const std::string kGenerationField = "generation";

}  // namespace tl3d::bench
