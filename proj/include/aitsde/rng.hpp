#pragma once

#include <array>
#include <cstdint>

namespace aitsde::rng {

using Block = std::array<std::uint64_t, 4>;
using Key = std::array<std::uint64_t, 2>;

// Philox4x64-10 counter-based generator (Salmon, Moraes, Dror, Shaw;
// "Parallel random numbers: as easy as 1, 2, 3"). A stateless keyed
// bijection: one 256-bit counter block in, four 64-bit words out.
Block philox4x64(Block counter, Key key);

// SplitMix64 finalizer step; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Uniform double in the open interval (0, 1) with 53-bit resolution.
double to_open_unit(std::uint64_t word) noexcept;

// Standard normal quantile (inverse CDF), full double accuracy on (0, 1).
double normal_quantile(double p);

// Key for the stream belonging to one (seed, path) pair. Seed and path
// index are mixed independently, so distinct pairs give distinct keys.
Key stream_key(std::uint64_t seed, std::uint64_t path_index) noexcept;

// Standard normal draw number `index` of the keyed stream. Stateless:
// draws may be taken in any order on any worker with identical results.
double normal_draw(std::uint64_t seed, std::uint64_t path_index, std::uint64_t index);

}  // namespace aitsde::rng
