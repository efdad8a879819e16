#pragma once

#include <optional>
#include <string_view>

namespace aitsde {

// Coefficients of the generalized Ait-Sahalia interest rate model
//
//   dX_t = (a_{-1} X_t^{-1} - a_0 + a_1 X_t - a_2 X_t^r) dt + sigma X_t^rho dW_t,
//   X_0 = x0 > 0,
//
// on the domain (0, inf), with a_{-1}, a_0, a_1, a_2, sigma, x0 > 0,
// r, rho > 1 and r + 1 >= 2 rho.
struct ModelParams {
    double alpha_m1 = 0;  // a_{-1}
    double alpha_0 = 0;
    double alpha_1 = 0;
    double alpha_2 = 0;
    double sigma = 0;
    double r = 0;
    double rho = 0;
    double x0 = 0;
};

// Which convergence guarantee a parameter set falls under.
enum class Regime {
    NonCritical,       // r + 1 > 2 rho
    CriticalOrderOne,  // r + 1 = 2 rho and a_2/sigma^2 >= 4r + 1/2
    CriticalHalfOnly,  // r + 1 = 2 rho, coefficients monotone but the
                       // order-one guarantee does not apply
    Inadmissible,
};

std::string_view to_string(Regime regime);

// Absolute tolerance for the critical-case equality test r + 1 = 2 rho.
// Parameters are user-entered literals: exact dyadic values compare
// exactly and the tolerance only guards decimal-literal rounding.
inline constexpr double kCriticalEqualityTol = 1e-12;

// Returns params unchanged iff every constraint above holds; throws
// DomainError naming the first violated constraint otherwise.
ModelParams validate(const ModelParams& params);

Regime classify_regime(const ModelParams& params);

// Full drift  a_{-1}/x - a_0 + a_1 x - a_2 x^r,  x > 0.
double drift(const ModelParams& params, double x);

// f(x) = -a_2 x^r
double f(const ModelParams& params, double x);

// g(x) = sigma x^rho
double g(const ModelParams& params, double x);

// g_hat(x) = g'(x) g(x) = rho sigma^2 x^(2 rho - 1)
double g_hat(const ModelParams& params, double x);

// Built-in parameter sets for the bundled experiments; name is one of
// "example1" (non-critical, r = 4, rho = 1.5), "example2" (critical,
// r = 3, rho = 2), "example3" (critical, r = 2, rho = 1.5).
std::optional<ModelParams> preset_params(std::string_view name);

}  // namespace aitsde
