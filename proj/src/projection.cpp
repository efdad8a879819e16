#include "aitsde/projection.hpp"

#include <algorithm>
#include <cmath>

#include "aitsde/errors.hpp"

namespace aitsde {

namespace {
// Guards decimal-literal rounding at the interval endpoints, same policy
// as the model equality test.
constexpr double kRangeTol = 1e-12;
}  // namespace

double default_exponent(double r) {
    if (!(r > 1)) throw DomainError("projection: r must be greater than 1");
    return 1.0 / (2.0 * r - 2.0);
}

ProjectionConfig make_projection(double q, double r) {
    if (!(r > 1)) throw DomainError("projection: r must be greater than 1");
    const double lo = 1.0 / (2.0 * r);
    const double hi = 1.0 / (2.0 * r - 2.0);
    if (!(q >= lo - kRangeTol && q <= hi + kRangeTol))
        throw DomainError("projection: q outside the admissible range [1/(2r), 1/(2r-2)]");
    return ProjectionConfig{q, r};
}

double project(const ProjectionConfig& cfg, double h, double x) {
    if (!(h > 0)) throw DomainError("projection: step size h must be positive");
    if (!(x > 0)) throw DomainError("projection: state x must be positive");
    return std::min(x, std::pow(h, -cfg.q));
}

}  // namespace aitsde
