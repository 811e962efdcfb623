// Compiled with -mavx2 only; never called unless the CPU reports AVX2.
#include "tl3d/simd/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>

namespace tl3d::simd {
namespace {

constexpr std::size_t kLanes = 4;

void affine_avx2(const double* in, std::size_t n, double origin, double scale, double* out) {
    const __m256d vo = _mm256_set1_pd(origin);
    const __m256d vs = _mm256_set1_pd(scale);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d v = _mm256_loadu_pd(in + i);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(vs, _mm256_sub_pd(v, vo)));
    }
    for (; i < n; ++i) out[i] = scale * (in[i] - origin);
}

MinMax minmax_avx2(const double* in, std::size_t n) {
    MinMax r{in[0], in[0]};
    std::size_t i = 0;
    if (n >= kLanes) {
        __m256d lo = _mm256_loadu_pd(in);
        __m256d hi = lo;
        for (i = kLanes; i + kLanes <= n; i += kLanes) {
            const __m256d v = _mm256_loadu_pd(in + i);
            lo = _mm256_min_pd(lo, v);
            hi = _mm256_max_pd(hi, v);
        }
        alignas(32) double l[kLanes];
        alignas(32) double h[kLanes];
        _mm256_store_pd(l, lo);
        _mm256_store_pd(h, hi);
        r = {l[0], h[0]};
        for (std::size_t k = 1; k < kLanes; ++k) {
            if (l[k] < r.min) r.min = l[k];
            if (h[k] > r.max) r.max = h[k];
        }
    }
    for (; i < n; ++i) {
        if (in[i] < r.min) r.min = in[i];
        if (in[i] > r.max) r.max = in[i];
    }
    return r;
}

std::size_t argmax_avx2(const double* in, std::size_t n) {
    const double best = minmax_avx2(in, n).max;
    const __m256d vb = _mm256_set1_pd(best);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(in + i), vb, _CMP_EQ_OQ));
        if (mask != 0) return i + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(mask)));
    }
    for (; i < n; ++i) {
        if (in[i] == best) return i;
    }
    return 0;
}

inline void store_mask(int mask, std::uint8_t* out) {
    for (std::size_t k = 0; k < kLanes; ++k) out[k] = static_cast<std::uint8_t>((mask >> k) & 1);
}

void halfspace_avx2(PointsView p, Vec3 pivot, Vec3 nrm, double offset, std::uint8_t* out) {
    const __m256d px = _mm256_set1_pd(pivot.x), py = _mm256_set1_pd(pivot.y), pz = _mm256_set1_pd(pivot.z);
    const __m256d nx = _mm256_set1_pd(nrm.x), ny = _mm256_set1_pd(nrm.y), nz = _mm256_set1_pd(nrm.z);
    const __m256d vo = _mm256_set1_pd(offset);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kLanes <= p.size; i += kLanes) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(p.x + i), px);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(p.y + i), py);
        const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(p.z + i), pz);
        __m256d s = _mm256_add_pd(_mm256_mul_pd(nx, dx), _mm256_mul_pd(ny, dy));
        s = _mm256_add_pd(s, _mm256_mul_pd(nz, dz));
        s = _mm256_add_pd(s, vo);
        store_mask(_mm256_movemask_pd(_mm256_cmp_pd(s, zero, _CMP_LT_OQ)), out + i);
    }
    for (; i < p.size; ++i) {
        const double dx = p.x[i] - pivot.x;
        const double dy = p.y[i] - pivot.y;
        const double dz = p.z[i] - pivot.z;
        const double s = ((nrm.x * dx + nrm.y * dy) + nrm.z * dz) + offset;
        out[i] = s < 0.0 ? 1 : 0;
    }
}

void box_inside_avx2(PointsView p, Vec3 c, Vec3 h, std::uint8_t* out) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    const __m256d cx = _mm256_set1_pd(c.x), cy = _mm256_set1_pd(c.y), cz = _mm256_set1_pd(c.z);
    const __m256d hx = _mm256_set1_pd(h.x), hy = _mm256_set1_pd(h.y), hz = _mm256_set1_pd(h.z);
    std::size_t i = 0;
    for (; i + kLanes <= p.size; i += kLanes) {
        const __m256d ax = _mm256_andnot_pd(sign, _mm256_sub_pd(_mm256_loadu_pd(p.x + i), cx));
        const __m256d ay = _mm256_andnot_pd(sign, _mm256_sub_pd(_mm256_loadu_pd(p.y + i), cy));
        const __m256d az = _mm256_andnot_pd(sign, _mm256_sub_pd(_mm256_loadu_pd(p.z + i), cz));
        __m256d in = _mm256_cmp_pd(ax, hx, _CMP_LE_OQ);
        in = _mm256_and_pd(in, _mm256_cmp_pd(ay, hy, _CMP_LE_OQ));
        in = _mm256_and_pd(in, _mm256_cmp_pd(az, hz, _CMP_LE_OQ));
        store_mask(_mm256_movemask_pd(in), out + i);
    }
    for (; i < p.size; ++i) {
        const bool in = __builtin_fabs(p.x[i] - c.x) <= h.x && __builtin_fabs(p.y[i] - c.y) <= h.y &&
                        __builtin_fabs(p.z[i] - c.z) <= h.z;
        out[i] = in ? 1 : 0;
    }
}

void transform_avx2(PointsView p, const double* m, Vec3 pivot, double scale, Vec3 t, PointsOut out) {
    const __m256d px = _mm256_set1_pd(pivot.x), py = _mm256_set1_pd(pivot.y), pz = _mm256_set1_pd(pivot.z);
    const __m256d tx = _mm256_set1_pd(t.x), ty = _mm256_set1_pd(t.y), tz = _mm256_set1_pd(t.z);
    const __m256d vs = _mm256_set1_pd(scale);
    __m256d mm[9];
    for (int k = 0; k < 9; ++k) mm[k] = _mm256_set1_pd(m[k]);
    std::size_t i = 0;
    for (; i + kLanes <= p.size; i += kLanes) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(p.x + i), px);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(p.y + i), py);
        const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(p.z + i), pz);
        const __m256d rx = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(mm[0], dx), _mm256_mul_pd(mm[1], dy)),
                                         _mm256_mul_pd(mm[2], dz));
        const __m256d ry = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(mm[3], dx), _mm256_mul_pd(mm[4], dy)),
                                         _mm256_mul_pd(mm[5], dz));
        const __m256d rz = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(mm[6], dx), _mm256_mul_pd(mm[7], dy)),
                                         _mm256_mul_pd(mm[8], dz));
        _mm256_storeu_pd(out.x + i, _mm256_add_pd(tx, _mm256_mul_pd(vs, rx)));
        _mm256_storeu_pd(out.y + i, _mm256_add_pd(ty, _mm256_mul_pd(vs, ry)));
        _mm256_storeu_pd(out.z + i, _mm256_add_pd(tz, _mm256_mul_pd(vs, rz)));
    }
    for (; i < p.size; ++i) {
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

namespace detail {
const KernelTable* avx2_table_compiled() {
    static const KernelTable table{Isa::Avx2,     affine_avx2,     minmax_avx2,   argmax_avx2,
                                   halfspace_avx2, box_inside_avx2, transform_avx2};
    return &table;
}
}  // namespace detail

}  // namespace tl3d::simd

#else

namespace tl3d::simd::detail {
const KernelTable* avx2_table_compiled() { return nullptr; }
}  // namespace tl3d::simd::detail

#endif
