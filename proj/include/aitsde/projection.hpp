#pragma once

namespace aitsde {

// Exponent of the step-size dependent truncation mapping
//
//   P_h(x) = min{1, h^{-q} |x|^{-1}} x = min(x, h^{-q})  on x > 0.
//
// The admissible range couples q to the drift power r:
// 1/(2r) <= q <= 1/(2r-2).
struct ProjectionConfig {
    double q = 0;
    double r = 0;
};

// Largest admissible exponent 1/(2r-2), the weakest truncation; the
// bundled experiments use this choice.
double default_exponent(double r);

// Validates the exponent range; throws DomainError otherwise.
ProjectionConfig make_projection(double q, double r);

double project(const ProjectionConfig& cfg, double h, double x);

// Step-size dependent corrective state mapping applied before the explicit
// terms of a scheme update. Any implementation must contract magnitudes
// (|map(h, x)| <= |x|) and be non-expansive in x. PowerTruncation is the
// only shipped implementation.
class CorrectiveMap {
public:
    virtual ~CorrectiveMap() = default;
    virtual double operator()(double h, double x) const = 0;
};

class PowerTruncation final : public CorrectiveMap {
public:
    explicit PowerTruncation(ProjectionConfig cfg) : cfg_(cfg) {}
    double operator()(double h, double x) const override { return project(cfg_, h, x); }
    const ProjectionConfig& config() const { return cfg_; }

private:
    ProjectionConfig cfg_;
};

}  // namespace aitsde
