#include "ajel/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace ajel::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend detect() noexcept {
    if (const char* env = std::getenv("AJEL_SIMD"); env && std::strcmp(env, "scalar") == 0) {
        return Backend::scalar;
    }
    if (backend_supported(Backend::avx2)) return Backend::avx2;
    if (backend_supported(Backend::neon)) return Backend::neon;
    return Backend::scalar;
}

std::atomic<Backend>& current() noexcept {
    static std::atomic<Backend> b{detect()};
    return b;
}

}  // namespace

std::string_view backend_name(Backend b) noexcept {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "unknown";
}

bool backend_supported(Backend b) noexcept {
    switch (b) {
        case Backend::scalar: return true;
        case Backend::avx2: return detail::avx2_table() != nullptr && cpu_has_avx2();
        case Backend::neon: return detail::neon_table() != nullptr;
    }
    return false;
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

Backend set_backend(Backend b) noexcept {
    if (!backend_supported(b)) b = Backend::scalar;
    current().store(b, std::memory_order_relaxed);
    return b;
}

const KernelTable& table(Backend b) noexcept {
    if (b == Backend::avx2 && backend_supported(b)) return *detail::avx2_table();
    if (b == Backend::neon && backend_supported(b)) return *detail::neon_table();
    return detail::scalar_table();
}

}  // namespace ajel::simd
