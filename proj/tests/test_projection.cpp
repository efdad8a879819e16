#include <doctest.h>

#include <cmath>
#include <random>

#include "aitsde/errors.hpp"
#include "aitsde/model.hpp"
#include "aitsde/projection.hpp"

using namespace aitsde;

TEST_CASE("exponent range endpoints") {
    CHECK(default_exponent(4.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(default_exponent(2.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(default_exponent(3.0) == doctest::Approx(0.25).epsilon(1e-15));

    CHECK_NOTHROW(make_projection(1.0 / 8.0, 4.0));  // lower endpoint 1/(2r)
    CHECK_NOTHROW(make_projection(1.0 / 6.0, 4.0));  // upper endpoint 1/(2r-2)
    CHECK_THROWS_AS(make_projection(0.12, 4.0), DomainError);
    CHECK_THROWS_AS(make_projection(0.18, 4.0), DomainError);
    CHECK_THROWS_AS(make_projection(0.25, 1.0), DomainError);  // r must exceed 1
}

TEST_CASE("projection caps at h^-q and is the identity below the cap") {
    const ProjectionConfig cfg = make_projection(1.0 / 6.0, 4.0);
    const double h = std::pow(2.0, -6.0);
    // h^-q = 2^(6/6) = 2 exactly
    CHECK(project(cfg, h, 100.0) == 2.0);
    CHECK(project(cfg, h, 1.999) == 1.999);
    CHECK(project(cfg, h, 2.0) == 2.0);

    // r=2, q=1/2, h=0.01: cap = 0.01^-0.5; long double power oracle
    const ProjectionConfig half = make_projection(0.5, 2.0);
    const double cap = static_cast<double>(powl(0.01L, -0.5L));
    CHECK(cap == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(project(half, 0.01, 10.5) == doctest::Approx(cap).epsilon(1e-12));
    CHECK(project(half, 0.01, 10.5) == doctest::Approx(10.0).epsilon(1e-12));

    CHECK_THROWS_AS(project(cfg, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(project(cfg, -1.0, 1.0), DomainError);
    CHECK_THROWS_AS(project(cfg, h, 0.0), DomainError);
}

TEST_CASE("PowerTruncation forwards to project") {
    const PowerTruncation map(make_projection(1.0 / 6.0, 4.0));
    const double h = std::pow(2.0, -6.0);
    CHECK(map(h, 100.0) == 2.0);
    CHECK(map.config().q == doctest::Approx(1.0 / 6.0));
    const CorrectiveMap& abstract = map;
    CHECK(abstract(h, 0.5) == 0.5);
}

namespace {

struct PropertyRng {
    std::mt19937_64 gen{20240901};
    std::uniform_real_distribution<double> log_x{std::log(1e-3), std::log(1e3)};
    std::uniform_real_distribution<double> unit{0.0, 1.0};

    double state() { return std::exp(log_x(gen)); }
    double step() { return std::exp(std::log(1e-4) + unit(gen) * std::log(1e4)); }  // (1e-4, 1]
    double exponent(double r) {
        const double lo = 1.0 / (2.0 * r);
        const double hi = 1.0 / (2.0 * r - 2.0);
        return lo + unit(gen) * (hi - lo);
    }
};

}  // namespace

TEST_CASE("contractivity, non-expansiveness and the truncation bound") {
    PropertyRng rng;
    for (double r : {2.0, 3.0, 4.0}) {
        for (int i = 0; i < 10000; ++i) {
            const ProjectionConfig cfg = make_projection(rng.exponent(r), r);
            const double h = rng.step();
            const double x = rng.state();
            const double y = rng.state();
            const double px = project(cfg, h, x);
            const double py = project(cfg, h, y);
            REQUIRE(px <= x);                                  // |P(x)| <= |x|
            REQUIRE(px > 0);
            REQUIRE(px <= std::pow(h, -cfg.q));                // truncation bound
            REQUIRE(std::abs(px - py) <= std::abs(x - y));     // non-expansive
        }
    }
}

TEST_CASE("displacement bound |x - P(x)| <= 2 h (1 + x^(2r+1)) at q = 1/(2r)") {
    PropertyRng rng;
    for (double r : {2.0, 3.0, 4.0}) {
        const ProjectionConfig cfg = make_projection(1.0 / (2.0 * r), r);
        for (int i = 0; i < 10000; ++i) {
            const double h = rng.step();
            const double x = rng.state();
            const double displacement = x - project(cfg, h, x);
            REQUIRE(displacement <= 2.0 * h * (1.0 + std::pow(x, 2.0 * r + 1.0)));
        }
    }
}

TEST_CASE("combined displacement bound with the min form holds for every admissible q") {
    // |x - P(x)| <= 4 h (1 + x^(2r+1)) min(1, h (1 + x^(2r)))
    PropertyRng rng;
    for (double r : {2.0, 3.0, 4.0}) {
        for (int i = 0; i < 10000; ++i) {
            const ProjectionConfig cfg = make_projection(rng.exponent(r), r);
            const double h = rng.step();
            const double x = rng.state();
            const double displacement = x - project(cfg, h, x);
            const double bound = 4.0 * h * (1.0 + std::pow(x, 2.0 * r + 1.0)) *
                                 std::min(1.0, h * (1.0 + std::pow(x, 2.0 * r)));
            REQUIRE(displacement <= bound);
        }
    }
}

TEST_CASE("h-weighted Lipschitz transfer through the truncation") {
    // h |f(P(x)) - f(P(y))|^2 <= (alpha_2 r)^2 T^(1 - q(2r-2)) |x - y|^2 and the
    // same for g_hat with (sigma^2 rho (2 rho - 1))^2, on h = T/N, T = 1.
    PropertyRng rng;
    const double horizon = 1.0;
    for (const char* name : {"example1", "example2", "example3"}) {
        const ModelParams p = *preset_params(name);
        for (int exponent_case = 0; exponent_case < 2; ++exponent_case) {
            const double q = exponent_case == 0 ? 1.0 / (2.0 * p.r) : default_exponent(p.r);
            const ProjectionConfig cfg = make_projection(q, p.r);
            const double t_power = std::pow(horizon, 1.0 - q * (2.0 * p.r - 2.0));
            const double lf = std::pow(p.alpha_2 * p.r, 2.0) * t_power;
            const double lg = std::pow(p.sigma * p.sigma * p.rho * (2.0 * p.rho - 1.0), 2.0) *
                              t_power;
            for (int level = 4; level <= 10; ++level) {
                const double h = horizon / static_cast<double>(1 << level);
                for (int i = 0; i < 1500; ++i) {
                    const double x = rng.state();
                    const double y = rng.state();
                    if (std::abs(x - y) < 1e-12) continue;
                    const double px = project(cfg, h, x);
                    const double py = project(cfg, h, y);
                    const double df = f(p, px) - f(p, py);
                    const double dg = g_hat(p, px) - g_hat(p, py);
                    const double dist_sq = (x - y) * (x - y);
                    REQUIRE(h * df * df <= lf * dist_sq);
                    REQUIRE(h * dg * dg <= lg * dist_sq);
                }
            }
        }
    }
}
