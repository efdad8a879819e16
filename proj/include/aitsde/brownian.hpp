#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace aitsde {

// Brownian increments on a fine dyadic lattice: 2^level steps of size
// T / 2^level, each distributed Normal(0, T / 2^level). Regenerating with
// the same (seed, path_index, level, T) reproduces the sequence bit for
// bit; distinct path indices are independent streams. Immutable once
// generated, so lattices may be shared freely between workers.
struct BrownianLattice {
    double horizon = 0;  // T
    int level = 0;       // fine lattice has 2^level increments
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;
    std::vector<double> increments;
};

// 2^30 increments is ~8 GiB; refuse anything beyond that.
inline constexpr int kMaxLatticeLevel = 30;

BrownianLattice generate(std::uint64_t seed, std::uint64_t path_index, int level,
                         double horizon);

// Sums runs of 2^(level - level_coarse) fine increments into 2^level_coarse
// coarse ones. Each block is summed in left-to-right pairwise (tree) order,
// so coarsening to level l agrees bitwise with coarsening to l+1 first and
// then to l.
std::vector<double> coarsen(const BrownianLattice& lattice, int level_coarse);

// Same, writing into caller-provided storage of size 2^level_coarse.
void coarsen_into(const BrownianLattice& lattice, int level_coarse,
                  std::span<double> out);

}  // namespace aitsde
