#include <cmath>

#include "tl3d/simd/kernels.hpp"

namespace tl3d::simd {
namespace {

void affine_scalar(const double* in, std::size_t n, double origin, double scale, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = scale * (in[i] - origin);
}

MinMax minmax_scalar(const double* in, std::size_t n) {
    MinMax r{in[0], in[0]};
    for (std::size_t i = 1; i < n; ++i) {
        if (in[i] < r.min) r.min = in[i];
        if (in[i] > r.max) r.max = in[i];
    }
    return r;
}

std::size_t argmax_scalar(const double* in, std::size_t n) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (in[i] > in[best]) best = i;
    }
    return best;
}

void halfspace_scalar(PointsView p, Vec3 pivot, Vec3 nrm, double offset, std::uint8_t* out) {
    for (std::size_t i = 0; i < p.size; ++i) {
        const double dx = p.x[i] - pivot.x;
        const double dy = p.y[i] - pivot.y;
        const double dz = p.z[i] - pivot.z;
        const double s = ((nrm.x * dx + nrm.y * dy) + nrm.z * dz) + offset;
        out[i] = s < 0.0 ? 1 : 0;
    }
}

void box_inside_scalar(PointsView p, Vec3 c, Vec3 h, std::uint8_t* out) {
    for (std::size_t i = 0; i < p.size; ++i) {
        const bool in = std::fabs(p.x[i] - c.x) <= h.x && std::fabs(p.y[i] - c.y) <= h.y &&
                        std::fabs(p.z[i] - c.z) <= h.z;
        out[i] = in ? 1 : 0;
    }
}

void transform_scalar(PointsView p, const double* m, Vec3 pivot, double scale, Vec3 t, PointsOut out) {
    for (std::size_t i = 0; i < p.size; ++i) {
        const double dx = p.x[i] - pivot.x;
        const double dy = p.y[i] - pivot.y;
        const double dz = p.z[i] - pivot.z;
        const double rx = (m[0] * dx + m[1] * dy) + m[2] * dz;
        const double ry = (m[3] * dx + m[4] * dy) + m[5] * dz;
        const double rz = (m[6] * dx + m[7] * dy) + m[8] * dz;
        out.x[i] = t.x + scale * rx;
        out.y[i] = t.y + scale * ry;
        out.z[i] = t.z + scale * rz;
    }
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{Isa::Scalar,     affine_scalar,     minmax_scalar, argmax_scalar,
                                   halfspace_scalar, box_inside_scalar, transform_scalar};
    return table;
}

}  // namespace tl3d::simd
