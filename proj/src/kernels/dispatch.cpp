#include <atomic>
#include <cstdlib>
#include <string>

#include "causalbic/errors.hpp"
#include "causalbic/kernels.hpp"

namespace causalbic::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

constexpr bool build_has_neon() {
#if defined(__aarch64__) || defined(_M_ARM64)
    return true;
#else
    return false;
#endif
}

SimdLevel detect() {
    if (const char* env = std::getenv("CAUSALBIC_SIMD"); env != nullptr && std::string(env) == "scalar") {
        return SimdLevel::Scalar;
    }
    if (cpu_has_avx2()) return SimdLevel::Avx2;
    if (build_has_neon()) return SimdLevel::Neon;
    return SimdLevel::Scalar;
}

std::atomic<SimdLevel>& level_slot() {
    static std::atomic<SimdLevel> level{detected_level()};
    return level;
}

}  // namespace

std::string_view to_string(SimdLevel level) {
    switch (level) {
        case SimdLevel::Scalar: return "scalar";
        case SimdLevel::Avx2: return "avx2";
        case SimdLevel::Neon: return "neon";
    }
    return "unknown";
}

SimdLevel detected_level() {
    static const SimdLevel level = detect();
    return level;
}

SimdLevel active_level() { return level_slot().load(std::memory_order_relaxed); }

bool supported(SimdLevel level) {
    switch (level) {
        case SimdLevel::Scalar: return true;
        case SimdLevel::Avx2: return cpu_has_avx2();
        case SimdLevel::Neon: return build_has_neon();
    }
    return false;
}

void set_active_level(SimdLevel level) {
    if (!supported(level)) {
        throw ParameterError("SIMD level " + std::string(to_string(level)) + " not supported here");
    }
    level_slot().store(level, std::memory_order_relaxed);
}

void accumulate_outer(std::span<double> sum, std::span<const double> x) {
    switch (active_level()) {
        case SimdLevel::Avx2: return avx2::accumulate_outer(sum, x);
        case SimdLevel::Neon: return neon::accumulate_outer(sum, x);
        case SimdLevel::Scalar: break;
    }
    scalar::accumulate_outer(sum, x);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    switch (active_level()) {
        case SimdLevel::Avx2: return avx2::axpy(alpha, x, y);
        case SimdLevel::Neon: return neon::axpy(alpha, x, y);
        case SimdLevel::Scalar: break;
    }
    scalar::axpy(alpha, x, y);
}

double dot(std::span<const double> a, std::span<const double> b) {
    switch (active_level()) {
        case SimdLevel::Avx2: return avx2::dot(a, b);
        case SimdLevel::Neon: return neon::dot(a, b);
        case SimdLevel::Scalar: break;
    }
    return scalar::dot(a, b);
}

}  // namespace causalbic::kernels
