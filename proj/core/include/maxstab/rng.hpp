#pragma once

#include <cstdint>

namespace maxstab {

/// splitmix64 finalizer (a bijection on 64-bit words).
inline std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from (seed, index).
///
/// Trajectory k of a batch uses derive_stream(master_seed, k), so batches
/// replay bit-identically regardless of scheduling or worker count.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix64(seed ^ mix64(index + 0x9e3779b97f4a7c15ULL));
}

/// splitmix64 (Steele, Lea & Flood): a tiny counter-based generator.
///
/// All randomness in the library flows through this class; the uniform
/// mapping below is fully specified, so results are bit-identical across
/// platforms and compilers.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * uniform01();
    }

private:
    std::uint64_t state_;
};

}  // namespace maxstab
