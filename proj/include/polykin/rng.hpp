#pragma once

#include "polykin/vec.hpp"

#include <cstdint>

namespace polykin {

/// Counter-based random number generator.
///
/// Every variate is a pure function of (seed, stream, counter), so parallel
/// and serial runs over the same per-particle streams draw identical noise,
/// and a trajectory can be replayed without storing generator state.
/// Mixing is a chained splitmix64 finalizer.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix(mix(seed + 0x632be59bd9b4e019ull) ^ mix(stream + 0x9e3779b97f4a7c15ull))) {}

    /// Raw 64-bit word for the given counter.
    std::uint64_t word(std::uint64_t counter) const {
        return mix(key_ ^ mix(counter + 0xbf58476d1ce4e5b9ull));
    }

    /// Uniform variate in the open interval (0,1).
    double uniform(std::uint64_t counter) const {
        // 53 mantissa bits, offset by half an ulp so 0 is excluded
        return (static_cast<double>(word(counter) >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Pair of independent standard normal variates (Box-Muller).
    /// Distinct counters give independent pairs.
    Vec2 normal_pair(std::uint64_t counter) const {
        const double u1 = uniform(counter * 2);
        const double u2 = uniform(counter * 2 + 1);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 6.283185307179586476925286766559 * u2;
        return {r * std::cos(phi), r * std::sin(phi)};
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
};

} // namespace polykin
