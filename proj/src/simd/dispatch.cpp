#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "tl3d/simd/kernels.hpp"

namespace tl3d::simd {
namespace detail {
const KernelTable* avx2_table_compiled();
}

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable* select_default() {
    const char* env = std::getenv("TL3D_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return t;
    return &scalar_kernels();
}

std::atomic<const KernelTable*>& active() {
    static std::atomic<const KernelTable*> table{select_default()};
    return table;
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

const KernelTable* avx2_kernels() {
    static const KernelTable* table = cpu_has_avx2() ? detail::avx2_table_compiled() : nullptr;
    return table;
}

const KernelTable& kernels() { return *active().load(std::memory_order_acquire); }

void force_isa(Isa isa) {
    const KernelTable* t = isa == Isa::Avx2 ? avx2_kernels() : &scalar_kernels();
    if (t == nullptr) throw std::runtime_error("AVX2 kernels are not available on this CPU");
    active().store(t, std::memory_order_release);
}

Isa active_isa() { return kernels().isa; }

void affine(std::span<const double> in, double origin, double scale, std::span<double> out) {
    if (out.size() < in.size()) throw std::invalid_argument("affine: output span too small");
    kernels().affine(in.data(), in.size(), origin, scale, out.data());
}

MinMax minmax(std::span<const double> in) {
    if (in.empty()) throw std::invalid_argument("minmax: empty input");
    return kernels().minmax(in.data(), in.size());
}

std::size_t argmax(std::span<const double> in) {
    if (in.empty()) throw std::invalid_argument("argmax: empty input");
    return kernels().argmax(in.data(), in.size());
}

}  // namespace tl3d::simd
