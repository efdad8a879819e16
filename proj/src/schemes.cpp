#include "aitsde/schemes.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "aitsde/errors.hpp"

namespace aitsde {

std::string_view to_string(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::Sipmm: return "SIPMM";
        case SchemeKind::Sipem: return "SIPEM";
        case SchemeKind::Bem: return "BEM";
    }
    return "SIPMM";
}

std::optional<SchemeKind> scheme_from_string(std::string_view name) {
    if (name == "SIPMM" || name == "sipmm") return SchemeKind::Sipmm;
    if (name == "SIPEM" || name == "sipem") return SchemeKind::Sipem;
    if (name == "BEM" || name == "bem") return SchemeKind::Bem;
    return std::nullopt;
}

namespace {

void check_step_input(const StepInput& in) {
    if (!(in.y > 0)) throw DomainError("schemes: state y must be positive");
    if (!(in.h > 0)) throw DomainError("schemes: step size h must be positive");
}

}  // namespace

double quadratic_positive_root(double a, double c) {
    const double disc = std::sqrt(a * a + 4.0 * c);
    if (a >= 0) return 0.5 * (a + disc);
    return 2.0 * c / (disc - a);
}

double sipmm_explicit_part(const ModelParams& p, const CorrectiveMap& map,
                           const StepInput& in) {
    check_step_input(in);
    const double phi = map(in.h, in.y);
    const double theta = -p.alpha_0 + p.alpha_1 * phi + f(p, phi);
    return phi + theta * in.h + g(p, phi) * in.dw +
           0.5 * (in.dw * in.dw - in.h) * g_hat(p, phi);
}

double sipem_explicit_part(const ModelParams& p, const CorrectiveMap& map,
                           const StepInput& in) {
    check_step_input(in);
    const double phi = map(in.h, in.y);
    const double theta = -p.alpha_0 + p.alpha_1 * phi + f(p, phi);
    return phi + theta * in.h + g(p, phi) * in.dw;
}

double sipmm_step(const ModelParams& p, const CorrectiveMap& map, const StepInput& in) {
    return quadratic_positive_root(sipmm_explicit_part(p, map, in), p.alpha_m1 * in.h);
}

double sipem_step(const ModelParams& p, const CorrectiveMap& map, const StepInput& in) {
    return quadratic_positive_root(sipem_explicit_part(p, map, in), p.alpha_m1 * in.h);
}

namespace {

// Residual of the implicit BEM relation, G(Y) = Y - h drift(Y) - target
// with target = y + g(y) dW. Strictly increasing on (0, inf) when
// h a_1 < 1, with G(0+) = -inf and G(inf) = +inf, so the positive root
// exists and is unique.
struct BemResidual {
    const ModelParams& p;
    double h;
    double target;

    double operator()(double x) const {
        return x - h * (p.alpha_m1 / x - p.alpha_0 + p.alpha_1 * x -
                        p.alpha_2 * std::pow(x, p.r)) -
               target;
    }
    double derivative(double x) const {
        return 1.0 + h * (p.alpha_m1 / (x * x) - p.alpha_1 +
                          p.alpha_2 * p.r * std::pow(x, p.r - 1.0));
    }
    long double extended(long double x) const {
        return x - static_cast<long double>(h) *
                       (static_cast<long double>(p.alpha_m1) / x - p.alpha_0 +
                        static_cast<long double>(p.alpha_1) * x -
                        static_cast<long double>(p.alpha_2) * powl(x, p.r)) -
               static_cast<long double>(target);
    }
    long double extended_derivative(long double x) const {
        return 1.0L + static_cast<long double>(h) *
                          (static_cast<long double>(p.alpha_m1) / (x * x) - p.alpha_1 +
                           static_cast<long double>(p.alpha_2) * p.r * powl(x, p.r - 1.0));
    }
};

constexpr int kBemIterationBudget = 200;
constexpr double kBemTol = 1e-12;

[[noreturn]] void bem_budget_exhausted(const StepInput& in) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "schemes: BEM root finder exhausted its budget at y=%.17g h=%.17g dw=%.17g",
                  in.y, in.h, in.dw);
    throw ConvergenceError(msg);
}

}  // namespace

double bem_step(const ModelParams& p, const StepInput& in) {
    check_step_input(in);
    if (!(in.h < 1.0 / p.alpha_1))
        throw StepSizeError("schemes: BEM requires h < 1/alpha_1");

    const BemResidual resid{p, in.h, in.y + g(p, in.y) * in.dw};
    const auto tol_at = [](double x) { return kBemTol * std::max(1.0, std::abs(x)); };

    // Newton from y, safeguarded by a lazily maintained bracket: G is
    // strictly increasing, so each evaluation tightens one side. Steps
    // leaving the bracket fall back to bisection (or doubling while the
    // upper side is still open).
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double x = in.y;
    bool converged = false;
    for (int iter = 0; iter < kBemIterationBudget; ++iter) {
        const double gx = resid(x);
        if (std::abs(gx) <= tol_at(x)) {
            converged = true;
            break;
        }
        if (gx < 0)
            lo = x;
        else
            hi = x;
        const double slope = resid.derivative(x);
        double next = x - gx / slope;
        if (!(next > lo && next < hi))
            next = std::isinf(hi) ? std::max(2.0 * x, x + 1.0) : 0.5 * (lo + hi);
        if (next == x) break;  // stagnated at double resolution
        x = next;
    }

    if (!converged) {
        // The double iteration stalls when rounding noise in G exceeds the
        // tolerance. Polish in extended precision, then re-check.
        long double xl = x;
        for (int iter = 0; iter < 4; ++iter) {
            const long double gx = resid.extended(xl);
            if (fabsl(gx) <= tol_at(static_cast<double>(xl))) break;
            long double next = xl - gx / resid.extended_derivative(xl);
            if (!(next > 0)) next = 0.5L * xl;
            xl = next;
        }
        x = static_cast<double>(xl);
        if (!(x > 0) || fabsl(resid.extended(x)) > tol_at(x)) bem_budget_exhausted(in);
    }
    return x;
}

namespace {

inline double step_once(const ModelParams& p, const CorrectiveMap& map, SchemeKind kind,
                        double y, double h, double dw) {
    const StepInput in{y, h, dw};
    switch (kind) {
        case SchemeKind::Sipmm: return sipmm_step(p, map, in);
        case SchemeKind::Sipem: return sipem_step(p, map, in);
        case SchemeKind::Bem: return bem_step(p, in);
    }
    throw DomainError("schemes: unknown scheme kind");
}

void check_grid(std::span<const double> increments, double h, double horizon) {
    if (!(h > 0)) throw DomainError("schemes: step size h must be positive");
    if (!(horizon > 0)) throw DomainError("schemes: horizon must be positive");
    const double n_steps = horizon / h;
    if (std::abs(n_steps - static_cast<double>(increments.size())) > 1e-9)
        throw DomainError("schemes: increment count must equal horizon / h");
}

[[noreturn]] void rethrow_with_step(const Error& e, std::size_t n) {
    const std::string msg = std::string(e.what()) + " (at step n=" + std::to_string(n) + ")";
    if (dynamic_cast<const StepSizeError*>(&e)) throw StepSizeError(msg);
    if (dynamic_cast<const ConvergenceError*>(&e)) throw ConvergenceError(msg);
    if (dynamic_cast<const DomainError*>(&e)) throw DomainError(msg);
    throw Error(msg);
}

}  // namespace

Trajectory integrate(const ModelParams& p, const CorrectiveMap& map, SchemeKind kind,
                     std::span<const double> increments, double h, double horizon) {
    check_grid(increments, h, horizon);
    if (kind == SchemeKind::Bem && !(h < 1.0 / p.alpha_1))
        throw StepSizeError("schemes: BEM requires h < 1/alpha_1");

    const std::size_t n_steps = increments.size();
    Trajectory path;
    path.t.resize(n_steps + 1);
    path.y.reserve(n_steps + 1);
    path.y.push_back(p.x0);
    for (std::size_t n = 0; n < n_steps; ++n) {
        path.t[n] = static_cast<double>(n) * h;
        try {
            path.y.push_back(step_once(p, map, kind, path.y.back(), h, increments[n]));
        } catch (const Error& e) {
            rethrow_with_step(e, n);
        }
    }
    path.t[n_steps] = horizon;
    return path;
}

double terminal_value(const ModelParams& p, const CorrectiveMap& map, SchemeKind kind,
                      std::span<const double> increments, double h) {
    if (kind == SchemeKind::Bem && !(h < 1.0 / p.alpha_1))
        throw StepSizeError("schemes: BEM requires h < 1/alpha_1");
    double y = p.x0;
    for (std::size_t n = 0; n < increments.size(); ++n) {
        try {
            y = step_once(p, map, kind, y, h, increments[n]);
        } catch (const Error& e) {
            rethrow_with_step(e, n);
        }
    }
    return y;
}

}  // namespace aitsde
