#pragma once
// Batch arithmetic kernels with a scalar reference path and an AVX2 path
// selected at runtime.
//
// Every AVX2 kernel performs the same IEEE operations in the same order as
// its scalar reference (no fused multiply-add, no reassociation), so the two
// paths are bitwise identical (minmax may differ only in the sign of a zero
// result). Layout and scene output therefore does not depend on the host CPU.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "tl3d/geometry.hpp"

namespace tl3d::simd {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

struct MinMax {
    double min;
    double max;
};

/// Structure-of-arrays view over 3D points.
struct PointsView {
    const double* x;
    const double* y;
    const double* z;
    std::size_t size;
};

struct PointsOut {
    double* x;
    double* y;
    double* z;
    std::size_t size;
};

struct KernelTable {
    Isa isa;
    // out[i] = scale * (in[i] - origin)
    void (*affine)(const double* in, std::size_t n, double origin, double scale, double* out);
    // n > 0
    MinMax (*minmax)(const double* in, std::size_t n);
    // First index of the maximum, n > 0
    std::size_t (*argmax)(const double* in, std::size_t n);
    // out[i] = ((nx*(x-px) + ny*(y-py)) + nz*(z-pz)) + offset < 0
    void (*halfspace)(PointsView pts, Vec3 pivot, Vec3 normal, double offset, std::uint8_t* out);
    // out[i] = |x-cx| <= hx && |y-cy| <= hy && |z-cz| <= hz
    void (*box_inside)(PointsView pts, Vec3 center, Vec3 half, std::uint8_t* out);
    // out = translation + scale * (M (p - pivot)), M row-major 3x3
    void (*transform)(PointsView pts, const double* matrix, Vec3 pivot, double scale, Vec3 translation,
                      PointsOut out);
};

const KernelTable& scalar_kernels();

/// AVX2 table, or nullptr when not compiled in or not supported by the CPU.
const KernelTable* avx2_kernels();

/// Active table. Picks AVX2 when available unless TL3D_SIMD=scalar is set.
const KernelTable& kernels();

/// Overrides the active table (tests and benchmarks). Not thread-safe with
/// concurrent kernel calls.
void force_isa(Isa isa);

Isa active_isa();

// Span wrappers over the active table.

void affine(std::span<const double> in, double origin, double scale, std::span<double> out);
MinMax minmax(std::span<const double> in);
std::size_t argmax(std::span<const double> in);

}  // namespace tl3d::simd
