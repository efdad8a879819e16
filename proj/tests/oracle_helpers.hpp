// Independent extended-precision oracles used by the test suites. These
// recompute scheme quantities from their defining formulas in 80-bit (or
// synthesized 128-bit) arithmetic and never call the library code paths
// they are checking.
#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "aitsde/model.hpp"

namespace oracle {

// Explicit part of a SIPMM/SIPEM update, recomputed in long double:
//   phi   = min(y, h^-q)
//   theta = -a_0 + a_1 phi - a_2 phi^r
//   A     = phi + theta h + sigma phi^rho dW [+ 1/2 (dW^2 - h) rho sigma^2 phi^(2 rho - 1)]
inline long double explicit_part(const aitsde::ModelParams& p, long double q, long double y,
                                 long double h, long double dw, bool milstein) {
    const long double cap = powl(h, -q);
    const long double phi = y < cap ? y : cap;
    const long double theta = -static_cast<long double>(p.alpha_0) +
                              static_cast<long double>(p.alpha_1) * phi -
                              static_cast<long double>(p.alpha_2) * powl(phi, p.r);
    long double a = phi + theta * h + static_cast<long double>(p.sigma) * powl(phi, p.rho) * dw;
    if (milstein)
        a += 0.5L * (dw * dw - h) * static_cast<long double>(p.rho) * p.sigma * p.sigma *
             powl(phi, 2.0L * p.rho - 1.0L);
    return a;
}

// sqrt(v) for v held in __float128, seeded from sqrtl and polished with two
// Newton corrections; accurate to ~2e-34 relative.
inline __float128 sqrt_q(__float128 v) {
    __float128 s = sqrtl(static_cast<long double>(v));
    s = 0.5Q * (s + v / s);
    s = 0.5Q * (s + v / s);
    return s;
}

// Positive root of Y^2 - a Y - c = 0 by the direct quadratic formula in
// 128-bit arithmetic; valid even when a^2 dominates 4c by ~30 digits.
inline long double quad_root(long double a, long double c) {
    const __float128 aq = a;
    const __float128 disc = sqrt_q(aq * aq + 4.0Q * static_cast<__float128>(c));
    return static_cast<long double>(0.5Q * (aq + disc));
}

// BEM residual G(Y) = Y - y - h (a_{-1}/Y - a_0 + a_1 Y - a_2 Y^r) - g(y) dW
// in long double.
inline long double bem_residual(const aitsde::ModelParams& p, long double y, long double h,
                                long double dw, long double x) {
    const long double gy = static_cast<long double>(p.sigma) * powl(y, p.rho);
    return x - y -
           h * (static_cast<long double>(p.alpha_m1) / x - p.alpha_0 +
                static_cast<long double>(p.alpha_1) * x -
                static_cast<long double>(p.alpha_2) * powl(x, p.r)) -
           gy * dw;
}

// Root of the BEM relation by pure bisection on a sign-changing bracket.
inline long double bem_bisect(const aitsde::ModelParams& p, long double y, long double h,
                              long double dw) {
    long double lo = 1e-12L;
    while (bem_residual(p, y, h, dw, lo) > 0) lo *= 0.5L;  // G(0+) = -inf
    long double hi = y + 1.0L;
    while (bem_residual(p, y, h, dw, hi) < 0) hi *= 2.0L;
    for (int i = 0; i < 200; ++i) {
        const long double mid = 0.5L * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (bem_residual(p, y, h, dw, mid) < 0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5L * (lo + hi);
}

// Ordinary least squares slope/intercept in long double via the centered
// normal equations.
inline std::pair<long double, long double> ols(const long double* xs, const long double* ys,
                                               int n) {
    long double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    long double sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const long double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

}  // namespace oracle
