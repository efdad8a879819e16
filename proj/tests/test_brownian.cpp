#include <doctest.h>

#include <cmath>
#include <cstring>

#include "aitsde/brownian.hpp"
#include "aitsde/errors.hpp"
#include "aitsde/rng.hpp"

using namespace aitsde;

TEST_CASE("philox4x64-10 known-answer vectors") {
    // Official Random123 test vector for philox4x64 with 10 rounds.
    {
        const rng::Block ctr{0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL,
                             0xa4093822299f31d0ULL, 0x082efa98ec4e6c89ULL};
        const rng::Key key{0x452821e638d01377ULL, 0xbe5466cf34e90c6cULL};
        const rng::Block out = rng::philox4x64(ctr, key);
        CHECK(out[0] == 0xa528f45403e61d95ULL);
        CHECK(out[1] == 0x38c72dbd566e9788ULL);
        CHECK(out[2] == 0xa5a1610e72fd18b5ULL);
        CHECK(out[3] == 0x57bd43b5e52b7fe6ULL);
    }
    // Cross-checked against numpy.random.Philox raw output (numpy buffers
    // from counter + 1, so its block 0 equals this counter).
    {
        const rng::Block out = rng::philox4x64({1, 0, 0, 0}, {0, 0});
        CHECK(out[0] == 0x02f4ba6408e4d89bULL);
        CHECK(out[1] == 0x3dd62b0b9ca8c5b2ULL);
        CHECK(out[2] == 0x1c8667a55d902e79ULL);
        CHECK(out[3] == 0x907d7a052fd5b4dcULL);
    }
    {
        const rng::Block out = rng::philox4x64({0, 0, 0, 0}, {0, 0});
        CHECK(out[0] == 0x16554d9eca36314cULL);
        CHECK(out[1] == 0xdb20fe9d672d0fdcULL);
        CHECK(out[2] == 0xd7e772cee186176bULL);
        CHECK(out[3] == 0x7e68b68aec7ba23bULL);
    }
}

TEST_CASE("normal quantile reference values") {
    // Reference values from scipy.stats.norm.ppf.
    CHECK(rng::normal_quantile(0.5) == 0.0);
    CHECK(rng::normal_quantile(1e-300) == doctest::Approx(-37.0470962993612).epsilon(1e-13));
    CHECK(rng::normal_quantile(1e-16) == doctest::Approx(-8.222082216130435).epsilon(1e-14));
    CHECK(rng::normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-14));
    CHECK(rng::normal_quantile(1e-4) == doctest::Approx(-3.7190164854556804).epsilon(1e-14));
    CHECK(rng::normal_quantile(0.001) == doctest::Approx(-3.090232306167813).epsilon(1e-14));
    CHECK(rng::normal_quantile(0.25) == doctest::Approx(-0.6744897501960817).epsilon(1e-14));
    CHECK(rng::normal_quantile(0.6) == doctest::Approx(0.2533471031357997).epsilon(1e-14));
    CHECK(rng::normal_quantile(0.75) == doctest::Approx(0.6744897501960817).epsilon(1e-14));
    CHECK(rng::normal_quantile(0.999) == doctest::Approx(3.090232306167813).epsilon(1e-14));
    // symmetry across the median
    for (double p : {1e-12, 1e-5, 0.01, 0.3, 0.45}) {
        CHECK(rng::normal_quantile(1.0 - p) ==
              doctest::Approx(-rng::normal_quantile(p)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(rng::normal_quantile(0.0), DomainError);
    CHECK_THROWS_AS(rng::normal_quantile(1.0), DomainError);
}

TEST_CASE("open-unit mapping stays inside (0, 1)") {
    CHECK(rng::to_open_unit(0) > 0.0);
    CHECK(rng::to_open_unit(~std::uint64_t{0}) < 1.0);
    CHECK(rng::to_open_unit(std::uint64_t{1} << 63) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("lattice generation is deterministic and well formed") {
    const BrownianLattice a = generate(12345, 7, 10, 1.0);
    const BrownianLattice b = generate(12345, 7, 10, 1.0);
    REQUIRE(a.increments.size() == 1024);
    CHECK(std::memcmp(a.increments.data(), b.increments.data(),
                      a.increments.size() * sizeof(double)) == 0);

    const BrownianLattice c = generate(12345, 8, 10, 1.0);
    bool any_different = false;
    for (std::size_t i = 0; i < c.increments.size(); ++i)
        any_different = any_different || c.increments[i] != a.increments[i];
    CHECK(any_different);

    CHECK_THROWS_AS(generate(1, 0, -1, 1.0), DomainError);
    CHECK_THROWS_AS(generate(1, 0, 31, 1.0), DomainError);
    CHECK_THROWS_AS(generate(1, 0, 4, 0.0), DomainError);
}

TEST_CASE("increment statistics at the reference resolution") {
    // level 15, T = 1: 2^15 draws of Normal(0, h), h = 2^-15.
    const BrownianLattice lattice = generate(987654321, 0, 15, 1.0);
    const double h = 1.0 / 32768.0;
    double mean = 0;
    for (double v : lattice.increments) mean += v;
    mean /= static_cast<double>(lattice.increments.size());
    // 5-sigma bound on the sample mean: 5 sqrt(h / 2^15)
    CHECK(std::abs(mean) <= 5.0 * std::sqrt(h / 32768.0));

    // pooled variance over ~10^6 increments within 2% of h
    double sq = 0;
    std::size_t count = 0;
    for (std::uint64_t path = 0; path < 32; ++path) {
        const BrownianLattice pool = generate(987654321, path, 15, 1.0);
        for (double v : pool.increments) sq += v * v;
        count += pool.increments.size();
    }
    const double variance = sq / static_cast<double>(count);
    CHECK(variance == doctest::Approx(h).epsilon(0.02));
}

TEST_CASE("paths with different indices are uncorrelated") {
    const int level = 15;  // 32768 increments
    const BrownianLattice a = generate(5150, 0, level, 1.0);
    const BrownianLattice b = generate(5150, 1, level, 1.0);
    double saa = 0, sbb = 0, sab = 0, sa = 0, sb = 0;
    const std::size_t n = a.increments.size();
    for (std::size_t i = 0; i < n; ++i) {
        sa += a.increments[i];
        sb += b.increments[i];
        saa += a.increments[i] * a.increments[i];
        sbb += b.increments[i] * b.increments[i];
        sab += a.increments[i] * b.increments[i];
    }
    const double nd = static_cast<double>(n);
    const double cov = sab / nd - (sa / nd) * (sb / nd);
    const double var_a = saa / nd - (sa / nd) * (sa / nd);
    const double var_b = sbb / nd - (sb / nd) * (sb / nd);
    const double correlation = cov / std::sqrt(var_a * var_b);
    CHECK(std::abs(correlation) <= 0.02);
}

TEST_CASE("coarsening sums adjacent blocks") {
    BrownianLattice lattice;
    lattice.horizon = 1.0;
    lattice.level = 2;
    lattice.increments = {1.0, 2.0, 3.0, 4.0};
    const auto pairs = coarsen(lattice, 1);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0] == 3.0);
    CHECK(pairs[1] == 7.0);
    const auto total = coarsen(lattice, 0);
    REQUIRE(total.size() == 1);
    CHECK(total[0] == 10.0);

    // factor-1 coarsening is the identity
    const auto same = coarsen(lattice, 2);
    CHECK(same == lattice.increments);

    CHECK_THROWS_AS(coarsen(lattice, 3), DomainError);
    CHECK_THROWS_AS(coarsen(lattice, -1), DomainError);
}

TEST_CASE("coarsening preserves the path total") {
    const BrownianLattice lattice = generate(31337, 3, 12, 1.0);
    double fine_total = 0;
    for (double v : lattice.increments) fine_total += v;
    for (int level = 0; level <= 12; ++level) {
        double total = 0;
        for (double v : coarsen(lattice, level)) total += v;
        CHECK(total == doctest::Approx(fine_total).epsilon(1e-13));
    }
}

TEST_CASE("nested coarsening agrees bitwise under the fixed summation order") {
    const BrownianLattice lattice = generate(777, 11, 13, 2.0);
    for (int level = 12; level >= 0; --level) {
        const auto direct = coarsen(lattice, level);

        BrownianLattice intermediate;
        intermediate.horizon = lattice.horizon;
        intermediate.level = level + 1;
        intermediate.increments = coarsen(lattice, level + 1);
        const auto via_mid = coarsen(intermediate, level);

        REQUIRE(direct.size() == via_mid.size());
        CHECK(std::memcmp(direct.data(), via_mid.data(), direct.size() * sizeof(double)) == 0);
    }
}
