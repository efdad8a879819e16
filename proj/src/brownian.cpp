#include "aitsde/brownian.hpp"

#include <cmath>

#include "aitsde/errors.hpp"
#include "aitsde/rng.hpp"

namespace aitsde {

namespace {

// Pairwise (tree) sum of a power-of-two sized block.
double block_sum(const double* v, std::size_t n) {
    if (n == 1) return v[0];
    const std::size_t half = n / 2;
    return block_sum(v, half) + block_sum(v + half, half);
}

}  // namespace

BrownianLattice generate(std::uint64_t seed, std::uint64_t path_index, int level,
                         double horizon) {
    if (level < 0 || level > kMaxLatticeLevel)
        throw DomainError("brownian: lattice level must lie in [0, 30]");
    if (!(horizon > 0)) throw DomainError("brownian: horizon must be positive");

    const std::size_t n = std::size_t{1} << level;
    const double step = horizon / static_cast<double>(n);
    const double scale = std::sqrt(step);

    BrownianLattice lattice;
    lattice.horizon = horizon;
    lattice.level = level;
    lattice.seed = seed;
    lattice.path_index = path_index;
    lattice.increments.resize(n);
    const rng::Key key = rng::stream_key(seed, path_index);
    for (std::size_t i = 0; i < n; ++i) {
        const rng::Block out = rng::philox4x64(rng::Block{i, 0, 0, 0}, key);
        lattice.increments[i] =
            scale * rng::normal_quantile(rng::to_open_unit(out[0]));
    }
    return lattice;
}

void coarsen_into(const BrownianLattice& lattice, int level_coarse,
                  std::span<double> out) {
    if (level_coarse < 0 || level_coarse > lattice.level)
        throw DomainError("brownian: coarse level must lie in [0, fine level]");
    const std::size_t blocks = std::size_t{1} << level_coarse;
    const std::size_t width = std::size_t{1} << (lattice.level - level_coarse);
    if (out.size() != blocks)
        throw DomainError("brownian: output size must equal 2^level_coarse");
    const double* fine = lattice.increments.data();
    for (std::size_t j = 0; j < blocks; ++j) out[j] = block_sum(fine + j * width, width);
}

std::vector<double> coarsen(const BrownianLattice& lattice, int level_coarse) {
    std::vector<double> out(level_coarse >= 0 ? (std::size_t{1} << level_coarse) : 0);
    coarsen_into(lattice, level_coarse, out);
    return out;
}

}  // namespace aitsde
