#pragma once

#include <cstdint>
#include <random>

namespace cvarkit {

using Engine = std::mt19937_64;

/// Counter-based seed split: stream `index` of master seed `seed` is a pure
/// function of both, so replications can run in any order or thread.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

[[nodiscard]] inline Engine make_engine(std::uint64_t seed, std::uint64_t stream) {
    return Engine(derive_seed(seed, stream));
}

/// +1 or -1 with equal probability.
[[nodiscard]] inline double rademacher(Engine& engine) {
    return (engine() >> 63) != 0 ? 1.0 : -1.0;
}

}  // namespace cvarkit
