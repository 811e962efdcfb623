#include "tl3d/layout/scale.hpp"

#include <cmath>
#include <string>

#include "tl3d/simd/kernels.hpp"

namespace tl3d::layout {

ScaleMapping scale_map(const design::ScaleSpec& scale, std::span<const double> timestamps,
                       std::optional<std::size_t> branch_baseline) {
    for (std::size_t i = 0; i < timestamps.size(); ++i) {
        if (!std::isfinite(timestamps[i]) || (i > 0 && !(timestamps[i] > timestamps[i - 1]))) {
            throw LayoutError(LayoutErrc::NonMonotonicTimestamps,
                              "timestamps must be finite and strictly increasing (index " + std::to_string(i) + ")");
        }
    }
    ScaleMapping m;
    m.offsets.resize(timestamps.size());
    if (timestamps.empty()) return m;
    const double unit = scale.unit_length;
    const double t0 = timestamps.front();

    if (std::holds_alternative<design::Sequential>(scale.kind)) {
        for (std::size_t i = 0; i < timestamps.size(); ++i) m.offsets[i] = unit * static_cast<double>(i);
    } else if (const auto* lg = std::get_if<design::ChronologicalLog>(&scale.kind)) {
        for (std::size_t i = 0; i < timestamps.size(); ++i) {
            m.offsets[i] = unit * std::log1p((timestamps[i] - t0) / lg->epsilon);
        }
    } else {
        simd::affine(timestamps, t0, unit, m.offsets);
    }

    if (std::holds_alternative<design::Relative>(scale.kind)) {
        if (!branch_baseline || *branch_baseline >= timestamps.size()) {
            throw LayoutError(LayoutErrc::MissingBaseline, "relative scale needs a baseline time index in range");
        }
        m.baseline_offset = m.offsets[*branch_baseline];
    }
    return m;
}

}  // namespace tl3d::layout
