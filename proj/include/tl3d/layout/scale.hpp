#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tl3d/design/design.hpp"
#include "tl3d/layout/errors.hpp"

namespace tl3d::layout {

struct ScaleMapping {
    /// Display offset of every time point, anchored at offsets[0] = 0.
    std::vector<double> offsets;
    /// Offset of the baseline time point (Relative scale only).
    double baseline_offset = 0.0;
};

/// Maps timestamps (seconds) to non-decreasing display offsets (meters).
///
///   linear      s_i = u (t_i - t_0)
///   log         s_i = u ln(1 + (t_i - t_0) / eps)
///   relative    s_i = u (t_i - t_0), baseline_offset = u (t_b - t_0)
///   sequential  s_i = u i
///
/// Throws LayoutError(NonMonotonicTimestamps) or (MissingBaseline) when a
/// Relative scale gets no baseline or one outside the timestamp range.
ScaleMapping scale_map(const design::ScaleSpec& scale, std::span<const double> timestamps,
                       std::optional<std::size_t> branch_baseline = std::nullopt);

}  // namespace tl3d::layout
