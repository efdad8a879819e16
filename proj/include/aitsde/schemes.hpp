#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "aitsde/model.hpp"
#include "aitsde/projection.hpp"

namespace aitsde {

enum class SchemeKind {
    Sipmm,  // semi-implicit projected Milstein method
    Sipem,  // SIPMM with the Milstein correction removed (order-0.5)
    Bem,    // backward (fully drift-implicit) Euler
};

std::string_view to_string(SchemeKind kind);
std::optional<SchemeKind> scheme_from_string(std::string_view name);

struct StepInput {
    double y = 0;   // current state, > 0
    double h = 0;   // step size, > 0
    double dw = 0;  // Brownian increment over the step
};

// Unique positive root of  Y^2 - a Y - c = 0,  c > 0. Evaluated branch-wise:
// (a + sqrt(a^2 + 4c)) / 2 for a >= 0 and the conjugate form
// 2c / (sqrt(a^2 + 4c) - a) for a < 0, so neither branch cancels.
double quadratic_positive_root(double a, double c);

// Explicit part of one SIPMM update. With phi = map(h, y) and
// theta = -a_0 + a_1 phi + f(phi):
//
//   A = phi + theta h + g(phi) dW + 1/2 (dW^2 - h) g_hat(phi)
//
// The next state is then the positive root of Y^2 - A Y - a_{-1} h = 0,
// which resolves the implicit a_{-1} Y^{-1} h term in closed form.
double sipmm_explicit_part(const ModelParams& params, const CorrectiveMap& map,
                           const StepInput& in);

// Same with the Milstein correction 1/2 (dW^2 - h) g_hat(phi) dropped.
double sipem_explicit_part(const ModelParams& params, const CorrectiveMap& map,
                           const StepInput& in);

// One step of each scheme. SIPMM and SIPEM are positive for every h > 0
// and every real dW. BEM requires h < 1/a_1 (StepSizeError otherwise) and
// solves  Y = y + h (a_{-1}/Y - a_0 + a_1 Y - a_2 Y^r) + g(y) dW  with a
// safeguarded Newton iteration to |G(Y)| <= 1e-12 max(1, |Y|).
double sipmm_step(const ModelParams& params, const CorrectiveMap& map, const StepInput& in);
double sipem_step(const ModelParams& params, const CorrectiveMap& map, const StepInput& in);
double bem_step(const ModelParams& params, const StepInput& in);

inline double sipmm_step(const ModelParams& params, const ProjectionConfig& cfg,
                         const StepInput& in) {
    return sipmm_step(params, PowerTruncation(cfg), in);
}
inline double sipem_step(const ModelParams& params, const ProjectionConfig& cfg,
                         const StepInput& in) {
    return sipem_step(params, PowerTruncation(cfg), in);
}

// One path on the uniform grid t_k = k h, k = 0..N: y[0] = x0 and
// y[n+1] = step(y[n], h, increments[n]). Every state is strictly positive.
struct Trajectory {
    std::vector<double> t;
    std::vector<double> y;
};

Trajectory integrate(const ModelParams& params, const CorrectiveMap& map, SchemeKind kind,
                     std::span<const double> increments, double h, double horizon);

// Terminal state only, no storage of the path; bitwise identical to
// integrate(...).y.back().
double terminal_value(const ModelParams& params, const CorrectiveMap& map, SchemeKind kind,
                      std::span<const double> increments, double h);

}  // namespace aitsde
