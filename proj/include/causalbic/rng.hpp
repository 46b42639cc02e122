#pragma once

#include <cstdint>
#include <limits>

namespace causalbic {

/// Counter-based 64-bit generator: the n-th output is a SplitMix64 finalizer
/// applied to (seed, n). Streams derived with `split` are independent of the
/// order in which they are consumed, which keeps experiments reproducible.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed) noexcept : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    /// Child generator for sub-stream `stream`; does not advance this one.
    CounterRng split(std::uint64_t stream) const noexcept {
        return CounterRng(mix(key_ ^ mix(stream + 0xbb67ae8584caa73bULL)));
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Standard normal by the polar method; portable across standard libraries.
    double normal() noexcept;

private:
    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace causalbic
