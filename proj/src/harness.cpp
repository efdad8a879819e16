#include "aitsde/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "aitsde/errors.hpp"
#include "aitsde/rng.hpp"

namespace aitsde {

namespace {

// Compensated (Kahan) accumulation in a fixed order, for reproducible and
// accurate reductions over up to ~1e6 terms.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double value) {
        const double y = value - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

double dyadic_step(double horizon, int level) {
    return horizon / static_cast<double>(std::uint64_t{1} << level);
}

void check_bem_window(const ExperimentConfig& cfg) {
    const bool bem_under_test =
        std::find(cfg.schemes.begin(), cfg.schemes.end(), SchemeKind::Bem) !=
        cfg.schemes.end();
    const double window = 1.0 / cfg.params.alpha_1;
    if (bem_under_test) {
        for (int level : cfg.levels)
            if (!(dyadic_step(cfg.horizon, level) < window))
                throw StepSizeError("harness: BEM level " + std::to_string(level) +
                                    " violates h < 1/alpha_1");
    }
    if (cfg.ref_scheme == SchemeKind::Bem &&
        !(dyadic_step(cfg.horizon, cfg.ref_level) < window))
        throw StepSizeError("harness: BEM reference level violates h < 1/alpha_1");
}

void validate_common(const ExperimentConfig& cfg) {
    validate(cfg.params);
    make_projection(cfg.q, cfg.params.r);
    if (!(cfg.horizon > 0)) throw DomainError("harness: horizon must be positive");
    if (cfg.levels.empty()) throw DomainError("harness: levels must be non-empty");
    if (cfg.schemes.empty()) throw DomainError("harness: schemes must be non-empty");
    if (cfg.ref_level < 0 || cfg.ref_level > kMaxLatticeLevel)
        throw DomainError("harness: ref_level must lie in [0, 30]");
    for (int level : cfg.levels)
        if (level < 0 || level > kMaxLatticeLevel)
            throw DomainError("harness: level must lie in [0, 30]");
    if (cfg.threads < 1) throw DomainError("harness: threads must be >= 1");
    check_bem_window(cfg);
}

struct Cell {
    SchemeKind scheme;
    int level;
    double h;
};

std::vector<Cell> make_cells(const ExperimentConfig& cfg) {
    std::vector<Cell> cells;
    cells.reserve(cfg.schemes.size() * cfg.levels.size());
    for (SchemeKind scheme : cfg.schemes)
        for (int level : cfg.levels)
            cells.push_back({scheme, level, dyadic_step(cfg.horizon, level)});
    return cells;
}

BrownianLattice default_source(std::uint64_t seed, std::uint64_t path_index, int level,
                               double horizon) {
    return generate(seed, path_index, level, horizon);
}

[[noreturn]] void rethrow_in_context(const Error& e, const std::string& ctx) {
    const std::string msg = std::string(e.what()) + " [" + ctx + "]";
    if (dynamic_cast<const StepSizeError*>(&e)) throw StepSizeError(msg);
    if (dynamic_cast<const ConvergenceError*>(&e)) throw ConvergenceError(msg);
    if (dynamic_cast<const DomainError*>(&e)) throw DomainError(msg);
    throw Error(msg);
}

using Clock = std::chrono::steady_clock;

double seconds_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
    validate_common(cfg);
    if (cfg.num_paths < 2) throw DomainError("harness: num_paths must be >= 2");
    const int max_level = *std::max_element(cfg.levels.begin(), cfg.levels.end());
    if (!(max_level < cfg.ref_level))
        throw DomainError("harness: every level must be finer-coarse than ref_level "
                          "(max(levels) < ref_level)");
}

ConvergenceReport run_strong_error(const ExperimentConfig& cfg) {
    return run_strong_error(cfg, default_source);
}

ConvergenceReport run_strong_error(const ExperimentConfig& cfg, const LatticeSource& source) {
    validate(cfg);
    const std::vector<Cell> cells = make_cells(cfg);
    const std::size_t n_cells = cells.size();
    const std::size_t n_paths = static_cast<std::size_t>(cfg.num_paths);
    const double h_ref = dyadic_step(cfg.horizon, cfg.ref_level);
    const PowerTruncation map(make_projection(cfg.q, cfg.params.r));

    // Per-path squared errors are stored by path index and reduced in that
    // fixed order afterwards, so the result is independent of scheduling.
    std::vector<std::vector<double>> sq_err(n_cells, std::vector<double>(n_paths, 0.0));

    const int n_threads =
        static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), n_paths));
    std::vector<std::vector<double>> time_acc(
        static_cast<std::size_t>(n_threads), std::vector<double>(n_cells, 0.0));

    constexpr std::size_t kNoCell = std::numeric_limits<std::size_t>::max();
    std::atomic<std::size_t> next_path{0};
    std::atomic<bool> failed{false};
    std::mutex failure_mutex;
    std::exception_ptr failure;
    std::size_t failure_path = std::numeric_limits<std::size_t>::max();
    std::string failure_ctx;

    auto record_failure = [&](std::size_t path, const std::string& ctx) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        failed.store(true, std::memory_order_relaxed);
        if (path < failure_path) {
            failure_path = path;
            failure = std::current_exception();
            failure_ctx = ctx;
        }
    };

    auto worker = [&](int thread_id) {
        std::vector<double> coarse;
        for (;;) {
            const std::size_t m = next_path.fetch_add(1);
            if (m >= n_paths || failed.load(std::memory_order_relaxed)) break;
            std::size_t cell_index = kNoCell;
            try {
                const BrownianLattice lattice = source(cfg.seed, m, cfg.ref_level, cfg.horizon);
                const double reference = terminal_value(cfg.params, map, cfg.ref_scheme,
                                                        lattice.increments, h_ref);
                for (cell_index = 0; cell_index < n_cells; ++cell_index) {
                    const Cell& cell = cells[cell_index];
                    coarse.resize(std::size_t{1} << cell.level);
                    coarsen_into(lattice, cell.level, coarse);
                    const auto t0 = Clock::now();
                    const double value =
                        terminal_value(cfg.params, map, cell.scheme, coarse, cell.h);
                    if (cfg.timing)
                        time_acc[static_cast<std::size_t>(thread_id)][cell_index] +=
                            seconds_between(t0, Clock::now());
                    const double diff = value - reference;
                    sq_err[cell_index][m] = diff * diff;
                }
            } catch (const Error&) {
                std::string ctx;
                if (cell_index == kNoCell) {
                    ctx = "reference scheme=" + std::string(to_string(cfg.ref_scheme)) +
                          " level=" + std::to_string(cfg.ref_level) +
                          " path=" + std::to_string(m);
                } else {
                    const Cell& cell = cells[cell_index];
                    ctx = "scheme=" + std::string(to_string(cell.scheme)) +
                          " level=" + std::to_string(cell.level) +
                          " path=" + std::to_string(m);
                }
                record_failure(m, ctx);
            }
        }
    };

    if (n_threads <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker, i);
        for (auto& t : pool) t.join();
    }

    if (failure) {
        try {
            std::rethrow_exception(failure);
        } catch (const Error& e) {
            rethrow_in_context(e, failure_ctx);
        }
    }

    ConvergenceReport report;
    report.config = cfg;
    report.cells.reserve(n_cells);
    for (std::size_t c = 0; c < n_cells; ++c) {
        KahanSum acc;
        for (std::size_t m = 0; m < n_paths; ++m) acc.add(sq_err[c][m]);
        double wall = 0.0;
        for (int t = 0; t < n_threads; ++t) wall += time_acc[static_cast<std::size_t>(t)][c];
        report.cells.push_back({cells[c].scheme, cells[c].level, cells[c].h,
                                std::sqrt(acc.sum / static_cast<double>(n_paths)), wall});
    }

    for (SchemeKind scheme : cfg.schemes) {
        std::vector<std::pair<double, double>> points;
        for (const CellResult& cell : report.cells)
            if (cell.scheme == scheme && cell.rmse > 0) points.emplace_back(cell.h, cell.rmse);
        if (points.size() >= 2) report.rates.emplace_back(scheme, fit_rate(points));
    }
    return report;
}

double run_self_check(const ExperimentConfig& cfg) {
    validate_common(cfg);
    if (cfg.num_paths < 2) throw DomainError("harness: num_paths must be >= 2");
    const double h_ref = dyadic_step(cfg.horizon, cfg.ref_level);
    const PowerTruncation map(make_projection(cfg.q, cfg.params.r));
    KahanSum acc;
    for (std::size_t m = 0; m < static_cast<std::size_t>(cfg.num_paths); ++m) {
        const BrownianLattice lattice = generate(cfg.seed, m, cfg.ref_level, cfg.horizon);
        const double reference =
            terminal_value(cfg.params, map, cfg.ref_scheme, lattice.increments, h_ref);
        const std::vector<double> replay = coarsen(lattice, cfg.ref_level);
        const double value = terminal_value(cfg.params, map, cfg.ref_scheme, replay, h_ref);
        const double diff = value - reference;
        acc.add(diff * diff);
    }
    return std::sqrt(acc.sum / static_cast<double>(cfg.num_paths));
}

RateFit fit_rate(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2) throw DomainError("fit_rate: need at least 2 points");
    for (const auto& [h, rmse] : points) {
        if (!(h > 0)) throw DomainError("fit_rate: step sizes must be positive");
        if (!(rmse > 0)) throw DomainError("fit_rate: rmse values must be positive");
    }
    const double n = static_cast<double>(points.size());
    double mean_x = 0, mean_y = 0;
    for (const auto& [h, rmse] : points) {
        mean_x += std::log2(h);
        mean_y += std::log2(rmse);
    }
    mean_x /= n;
    mean_y /= n;
    double sxx = 0, sxy = 0;
    for (const auto& [h, rmse] : points) {
        const double dx = std::log2(h) - mean_x;
        sxx += dx * dx;
        sxy += dx * (std::log2(rmse) - mean_y);
    }
    if (!(sxx > 0)) throw DomainError("fit_rate: step sizes must be distinct");
    const double slope = sxy / sxx;
    double ss_res = 0;
    for (const auto& [h, rmse] : points) {
        const double res = std::log2(rmse) - (mean_y + slope * (std::log2(h) - mean_x));
        ss_res += res * res;
    }
    return RateFit{slope, std::sqrt(ss_res / n)};
}

StressReport positivity_stress(const ModelParams& params, double q,
                               std::span<const double> h_list, int num_paths,
                               std::uint64_t seed) {
    validate(params);
    const PowerTruncation map(make_projection(q, params.r));
    if (h_list.empty()) throw DomainError("harness: h_list must be non-empty");
    for (double h : h_list)
        if (!(h > 0)) throw DomainError("harness: stress step sizes must be positive");
    if (num_paths < 1) throw DomainError("harness: stress needs at least one path");

    const double horizon = 16.0 * *std::max_element(h_list.begin(), h_list.end());
    StressReport report;
    report.min_state = std::numeric_limits<double>::infinity();
    for (SchemeKind scheme : {SchemeKind::Sipmm, SchemeKind::Sipem}) {
        for (double h : h_list) {
            const auto n_steps = static_cast<std::uint64_t>(std::ceil(horizon / h - 1e-9));
            double min_state = params.x0;
            for (std::uint64_t m = 0; m < static_cast<std::uint64_t>(num_paths); ++m) {
                const double scale = std::sqrt(h);
                double y = params.x0;
                for (std::uint64_t i = 0; i < n_steps; ++i) {
                    const StepInput in{y, h, scale * rng::normal_draw(seed, m, i)};
                    y = scheme == SchemeKind::Sipmm ? sipmm_step(params, map, in)
                                                    : sipem_step(params, map, in);
                    min_state = std::min(min_state, y);
                }
            }
            report.cells.push_back({scheme, h, min_state});
            report.min_state = std::min(report.min_state, min_state);
        }
    }
    report.pass = report.min_state > 0;
    return report;
}

std::vector<TimingCell> time_schemes(const ExperimentConfig& cfg) {
    validate_common(cfg);
    if (cfg.num_paths < 0) throw DomainError("harness: num_paths must be >= 0");
    const PowerTruncation map(make_projection(cfg.q, cfg.params.r));
    std::vector<TimingCell> cells;
    for (const Cell& cell : make_cells(cfg)) {
        double elapsed = 0.0;
        for (std::size_t m = 0; m < static_cast<std::size_t>(cfg.num_paths); ++m) {
            const BrownianLattice lattice = generate(cfg.seed, m, cell.level, cfg.horizon);
            const auto t0 = Clock::now();
            const double value =
                terminal_value(cfg.params, map, cell.scheme, lattice.increments, cell.h);
            elapsed += seconds_between(t0, Clock::now());
            (void)value;
        }
        cells.push_back({cell.scheme, cell.level, cell.h, elapsed});
    }
    return cells;
}

}  // namespace aitsde
