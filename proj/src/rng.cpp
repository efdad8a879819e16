#include "aitsde/rng.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>

#include "aitsde/errors.hpp"

namespace aitsde::rng {

namespace {

constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;  // 2^64 / golden ratio
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;  // 2^64 * (sqrt(3) - 1)

inline void mul_hi_lo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const unsigned __int128 product = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(product >> 64);
    lo = static_cast<std::uint64_t>(product);
}

inline Block philox_round(const Block& c, const Key& k) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mul_hi_lo(kPhiloxM0, c[0], hi0, lo0);
    mul_hi_lo(kPhiloxM1, c[2], hi1, lo1);
    return Block{hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

Block philox4x64(Block counter, Key key) {
    counter = philox_round(counter, key);
    for (int round = 1; round < 10; ++round) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
        counter = philox_round(counter, key);
    }
    return counter;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
    std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double to_open_unit(std::uint64_t word) noexcept {
    // Top 53 bits, centered in the cell: never exactly 0 or 1.
    return (static_cast<double>(word >> 11) + 0.5) * 0x1.0p-53;
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("rng: normal_quantile requires p in (0, 1)");
    // Route through erfc_inv so both tails keep full relative accuracy.
    constexpr double kSqrt2 = 1.4142135623730950488;
    if (p < 0.5) return -kSqrt2 * boost::math::erfc_inv(2.0 * p);
    return kSqrt2 * boost::math::erfc_inv(2.0 * (1.0 - p));
}

Key stream_key(std::uint64_t seed, std::uint64_t path_index) noexcept {
    return Key{mix64(seed), mix64(path_index ^ 0x6A09E667F3BCC909ULL)};
}

double normal_draw(std::uint64_t seed, std::uint64_t path_index, std::uint64_t index) {
    const Block out = philox4x64(Block{index, 0, 0, 0}, stream_key(seed, path_index));
    return normal_quantile(to_open_unit(out[0]));
}

}  // namespace aitsde::rng
