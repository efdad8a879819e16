#include "aitsde/model.hpp"

#include <cmath>

#include "aitsde/errors.hpp"

namespace aitsde {

std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::NonCritical: return "NonCritical";
        case Regime::CriticalOrderOne: return "CriticalOrderOne";
        case Regime::CriticalHalfOnly: return "CriticalHalfOnly";
        case Regime::Inadmissible: return "Inadmissible";
    }
    return "Inadmissible";
}

ModelParams validate(const ModelParams& p) {
    if (!(p.alpha_m1 > 0)) throw DomainError("model: alpha_m1 must be positive");
    if (!(p.alpha_0 > 0)) throw DomainError("model: alpha_0 must be positive");
    if (!(p.alpha_1 > 0)) throw DomainError("model: alpha_1 must be positive");
    if (!(p.alpha_2 > 0)) throw DomainError("model: alpha_2 must be positive");
    if (!(p.sigma > 0)) throw DomainError("model: sigma must be positive");
    if (!(p.r > 1)) throw DomainError("model: r must be greater than 1");
    if (!(p.rho > 1)) throw DomainError("model: rho must be greater than 1");
    if (!(p.x0 > 0)) throw DomainError("model: x0 must be positive");
    if (p.r + 1.0 < 2.0 * p.rho - kCriticalEqualityTol)
        throw DomainError("model: admissibility requires r + 1 >= 2 rho");
    return p;
}

Regime classify_regime(const ModelParams& p) {
    const double gap = p.r + 1.0 - 2.0 * p.rho;
    if (gap > kCriticalEqualityTol) return Regime::NonCritical;
    if (gap >= -kCriticalEqualityTol) {
        // Critical case r + 1 = 2 rho: only the ratio a_2/sigma^2 and r
        // enter the branch tests.
        const double ratio = p.alpha_2 / (p.sigma * p.sigma);
        if (ratio >= 4.0 * p.r + 0.5) return Regime::CriticalOrderOne;
        if (ratio > (p.r + 2.0 + 1.0 / p.r) / 8.0) return Regime::CriticalHalfOnly;
    }
    return Regime::Inadmissible;
}

namespace {

void require_positive_state(double x, const char* where) {
    if (!(x > 0)) throw DomainError(std::string("model: ") + where + " requires x > 0");
}

}  // namespace

double drift(const ModelParams& p, double x) {
    require_positive_state(x, "drift");
    return p.alpha_m1 / x - p.alpha_0 + p.alpha_1 * x + f(p, x);
}

double f(const ModelParams& p, double x) {
    require_positive_state(x, "f");
    return -p.alpha_2 * std::pow(x, p.r);
}

double g(const ModelParams& p, double x) {
    require_positive_state(x, "g");
    return p.sigma * std::pow(x, p.rho);
}

double g_hat(const ModelParams& p, double x) {
    require_positive_state(x, "g_hat");
    return p.rho * p.sigma * p.sigma * std::pow(x, 2.0 * p.rho - 1.0);
}

std::optional<ModelParams> preset_params(std::string_view name) {
    ModelParams p;
    p.alpha_m1 = 1.5;
    p.alpha_0 = 2.0;
    p.alpha_1 = 1.0;
    p.alpha_2 = 13.0;
    p.sigma = 1.0;
    p.x0 = 0.5;
    if (name == "example1") {
        p.r = 4.0;
        p.rho = 1.5;
        return p;
    }
    if (name == "example2") {
        p.r = 3.0;
        p.rho = 2.0;
        return p;
    }
    if (name == "example3") {
        p.r = 2.0;
        p.rho = 1.5;
        return p;
    }
    return std::nullopt;
}

}  // namespace aitsde
