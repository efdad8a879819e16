#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "aitsde/brownian.hpp"
#include "aitsde/model.hpp"
#include "aitsde/schemes.hpp"

namespace aitsde {

// One strong-convergence experiment: a reference solution on a fine dyadic
// lattice, schemes under test on coarsenings of the same lattice, terminal
// mean-square error over num_paths coupled paths.
struct ExperimentConfig {
    ModelParams params;
    double q = 0;                // projection exponent
    double horizon = 1.0;        // T
    std::vector<int> levels;     // coarse levels l, step size h = T / 2^l
    int ref_level = 0;           // fine lattice level L
    SchemeKind ref_scheme = SchemeKind::Sipmm;
    std::vector<SchemeKind> schemes;
    int num_paths = 0;           // M
    std::uint64_t seed = 0;
    int threads = 1;             // worker cap; results do not depend on it
    bool timing = false;         // record integration wall time per cell
};

// Throws on violated invariants: max(levels) < ref_level, num_paths >= 2,
// valid params and q, BEM step sizes inside h < 1/alpha_1.
void validate(const ExperimentConfig& cfg);

struct CellResult {
    SchemeKind scheme;
    int level;
    double h;
    double rmse;
    double wall_time_s;  // 0 unless timing was requested
};

struct RateFit {
    double rate;      // least-squares slope of log2(rmse) vs log2(h)
    double residual;  // RMS of fit residuals in log2 space
};

struct ConvergenceReport {
    ExperimentConfig config;
    std::vector<CellResult> cells;  // scheme-major, levels in config order
    std::vector<std::pair<SchemeKind, RateFit>> rates;  // schemes with >= 2 levels
};

// Replaceable lattice source; the default forwards to brownian::generate.
// Tests substitute deterministic sources (e.g. all-zero increments).
using LatticeSource = std::function<BrownianLattice(
    std::uint64_t seed, std::uint64_t path_index, int level, double horizon)>;

ConvergenceReport run_strong_error(const ExperimentConfig& cfg);
ConvergenceReport run_strong_error(const ExperimentConfig& cfg, const LatticeSource& source);

// Coupling self-check: integrates the reference scheme against itself on
// the shared lattice at ref_level. A correct coupling path returns 0.0
// exactly.
double run_self_check(const ExperimentConfig& cfg);

// Ordinary least squares of log2(rmse) against log2(h) over (h, rmse)
// points. Requires >= 2 points, all positive.
RateFit fit_rate(std::span<const std::pair<double, double>> points);

// Minimum state encountered while running SIPMM and SIPEM for
// T = 16 max(h_list) at every step size in h_list over num_paths paths.
// Passes iff every state stays strictly positive, for any h.
struct StressCell {
    SchemeKind scheme;
    double h;
    double min_state;
};
struct StressReport {
    std::vector<StressCell> cells;
    double min_state = 0;
    bool pass = false;
};
StressReport positivity_stress(const ModelParams& params, double q,
                               std::span<const double> h_list, int num_paths,
                               std::uint64_t seed);

// Wall-clock seconds of the full num_paths integration sweep per
// (scheme, level), single-threaded, lattice generation excluded.
// num_paths = 0 is allowed and times an empty sweep.
struct TimingCell {
    SchemeKind scheme;
    int level;
    double h;
    double wall_time_s;
};
std::vector<TimingCell> time_schemes(const ExperimentConfig& cfg);

}  // namespace aitsde
