// Command-line front end: strong-convergence experiments, positivity
// stress runs, timing sweeps and a quick self-check for the Ait-Sahalia
// SIPMM/SIPEM/BEM schemes.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aitsde/config.hpp"
#include "aitsde/errors.hpp"
#include "aitsde/harness.hpp"
#include "aitsde/report_io.hpp"
#include "aitsde/rng.hpp"
#include "aitsde/version.hpp"

namespace {

using namespace aitsde;

struct CommonFlags {
    std::optional<std::string> preset;
    std::optional<std::string> config_path;
    std::optional<std::string> schemes;
    std::optional<std::string> levels;
    std::optional<int> ref_level;
    std::optional<std::string> ref_scheme;
    std::optional<int> paths;
    std::optional<std::uint64_t> seed;
    std::optional<double> q;
    std::optional<double> horizon;
    std::optional<int> threads;
    bool timing = false;
    std::string out_dir = ".";
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--preset", flags.preset, "Built-in parameter set: example1|example2|example3");
    cmd->add_option("--config", flags.config_path, "key=value config file");
    cmd->add_option("--scheme", flags.schemes, "Comma list of schemes under test (SIPMM,SIPEM,BEM)");
    cmd->add_option("--levels", flags.levels, "Comma list of coarse levels l (h = T/2^l)");
    cmd->add_option("--ref-level", flags.ref_level, "Fine reference lattice level L");
    cmd->add_option("--ref-scheme", flags.ref_scheme, "Reference scheme (SIPMM or BEM)");
    cmd->add_option("--paths", flags.paths, "Number of Monte Carlo paths M");
    cmd->add_option("--seed", flags.seed, "Seed; omit for a random one (printed and recorded)");
    cmd->add_option("--q", flags.q, "Truncation exponent q (default 1/(2r-2))");
    cmd->add_option("--T", flags.horizon, "Time horizon T");
    cmd->add_option("--threads", flags.threads, "Worker cap (results are thread-count independent)");
    cmd->add_option("--out", flags.out_dir, "Output directory for CSV/SVG/manifest");
}

// Assembles file + flag entries (flags last, so they win), injecting a
// random printed seed when none was given.
KeyValueList gather_entries(const CommonFlags& flags, bool* seed_was_random) {
    KeyValueList entries;
    if (flags.config_path) entries = load_config_file(*flags.config_path);
    if (flags.preset) entries.emplace_back("preset", *flags.preset);
    if (flags.schemes) entries.emplace_back("schemes", *flags.schemes);
    if (flags.levels) entries.emplace_back("levels", *flags.levels);
    if (flags.ref_level) entries.emplace_back("ref_level", std::to_string(*flags.ref_level));
    if (flags.ref_scheme) entries.emplace_back("ref_scheme", *flags.ref_scheme);
    if (flags.paths) entries.emplace_back("paths", std::to_string(*flags.paths));
    if (flags.seed) entries.emplace_back("seed", std::to_string(*flags.seed));
    if (flags.q) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", *flags.q);
        entries.emplace_back("q", buf);
    }
    if (flags.horizon) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", *flags.horizon);
        entries.emplace_back("T", buf);
    }
    if (flags.threads) entries.emplace_back("threads", std::to_string(*flags.threads));
    if (flags.timing) entries.emplace_back("timing", "1");

    bool have_seed = false;
    for (const auto& [key, value] : entries) have_seed = have_seed || key == "seed";
    *seed_was_random = !have_seed;
    if (!have_seed) {
        std::random_device device;
        const std::uint64_t seed =
            (static_cast<std::uint64_t>(device()) << 32) ^ device();
        entries.emplace_back("seed", std::to_string(seed));
    }
    return entries;
}

BuiltConfig build_with_warnings(const KeyValueList& entries) {
    BuiltConfig built = build_config(entries);
    for (const std::string& warning : built.warnings)
        std::fprintf(stderr, "warning: %s\n", warning.c_str());
    return built;
}

std::string utc_timestamp() {
    char buf[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int run_converge(const CommonFlags& flags) {
    bool random_seed = false;
    const BuiltConfig built = build_with_warnings(gather_entries(flags, &random_seed));
    const ExperimentConfig& cfg = built.config;
    if (random_seed)
        std::printf("seed: %" PRIu64 " (randomly chosen)\n", cfg.seed);

    const ConvergenceReport report = run_strong_error(cfg);

    std::printf("%-6s %5s %12s %14s\n", "scheme", "level", "h", "rmse");
    for (const CellResult& cell : report.cells)
        std::printf("%-6s %5d %12.8f %14.8e\n", std::string(to_string(cell.scheme)).c_str(),
                    cell.level, cell.h, cell.rmse);
    for (const auto& [scheme, fit] : report.rates)
        std::printf("%-6s rate %.4f (fit residual %.4f)\n",
                    std::string(to_string(scheme)).c_str(), fit.rate, fit.residual);

    const std::filesystem::path out_dir(flags.out_dir);
    std::filesystem::create_directories(out_dir);
    const auto csv_path = out_dir / "convergence.csv";
    const auto svg_path = out_dir / "convergence.svg";
    const auto manifest_path = out_dir / "manifest.txt";
    emit_csv(report, csv_path);
    emit_plot(report, svg_path);

    RunManifest manifest;
    manifest.tool_version = kToolVersion;
    manifest.timestamp = utc_timestamp();
    manifest.artifacts.emplace_back("csv", csv_path.string());
    manifest.artifacts.emplace_back("svg", svg_path.string());
    manifest.artifacts.emplace_back("manifest", manifest_path.string());
    manifest.config = config_echo(cfg);
    write_manifest(manifest, manifest_path);
    std::printf("wrote %s, %s, %s\n", csv_path.c_str(), svg_path.c_str(), manifest_path.c_str());
    return 0;
}

int run_stress(const CommonFlags& flags, const std::string& h_list_text) {
    bool random_seed = false;
    KeyValueList entries = gather_entries(flags, &random_seed);
    // Stress runs only need params, q, paths and seed; supply harmless
    // experiment defaults so a bare --preset works.
    const BuiltConfig built = build_with_warnings(entries);
    const ExperimentConfig& cfg = built.config;

    std::vector<double> h_list;
    {
        std::string item;
        std::stringstream stream(h_list_text);
        while (std::getline(stream, item, ','))
            if (!item.empty()) h_list.push_back(std::stod(item));
    }
    if (h_list.empty()) throw ConfigError("stress: --h-list must name at least one step size");

    const int paths = flags.paths.value_or(1000);
    const StressReport report = positivity_stress(cfg.params, cfg.q, h_list, paths, cfg.seed);
    if (random_seed) std::printf("seed: %" PRIu64 " (randomly chosen)\n", cfg.seed);
    for (const StressCell& cell : report.cells)
        std::printf("%-6s h=%-10g min state %.6e\n",
                    std::string(to_string(cell.scheme)).c_str(), cell.h, cell.min_state);
    std::printf("positivity stress: %s (min state %.6e over %d paths)\n",
                report.pass ? "PASS" : "FAIL", report.min_state, paths);
    return report.pass ? 0 : 1;
}

int run_bench(const CommonFlags& flags) {
    bool random_seed = false;
    KeyValueList entries = gather_entries(flags, &random_seed);
    entries.emplace_back("threads", "1");  // timing runs are single-threaded
    const BuiltConfig built = build_with_warnings(entries);
    const ExperimentConfig& cfg = built.config;

    const std::vector<TimingCell> cells = time_schemes(cfg);
    std::printf("%-6s %5s %12s %12s\n", "scheme", "level", "h", "seconds");
    for (const TimingCell& cell : cells)
        std::printf("%-6s %5d %12.8f %12.6f\n", std::string(to_string(cell.scheme)).c_str(),
                    cell.level, cell.h, cell.wall_time_s);
    return 0;
}

bool check_line(const char* name, bool pass) {
    std::printf("[%s] %s\n", pass ? "PASS" : "FAIL", name);
    return pass;
}

// Reduced-scale run of the property and acceptance checks; a fast smoke
// test of an installed binary.
int run_check(const CommonFlags& flags) {
    const int threads = flags.threads.value_or(1);
    const std::uint64_t seed = flags.seed.value_or(20240915);
    bool all = true;

    // positivity under extreme step sizes
    {
        bool pass = true;
        for (const char* name : {"example1", "example2", "example3"}) {
            const ModelParams params = *preset_params(name);
            const double h_list[] = {0.25, 1.0, 10.0};
            const StressReport report =
                positivity_stress(params, default_exponent(params.r), h_list, 100, seed);
            pass = pass && report.pass;
        }
        all &= check_line("positivity stress (h up to 10, all presets)", pass);
    }

    // implicit-step residuals
    {
        const ModelParams params = *preset_params("example1");
        const PowerTruncation map(make_projection(default_exponent(params.r), params.r));
        bool pass = true;
        for (int i = 0; i < 2000 && pass; ++i) {
            const double y = 0.05 + 5.0 * rng::to_open_unit(rng::mix64(3 * i));
            const double h = 0.01 + 0.5 * rng::to_open_unit(rng::mix64(3 * i + 1));
            const double dw = std::sqrt(h) * rng::normal_quantile(rng::to_open_unit(rng::mix64(3 * i + 2)));
            const StepInput in{y, h, dw};
            const double root = sipmm_step(params, map, in);
            const long double a = sipmm_explicit_part(params, map, in);
            const long double resid =
                static_cast<long double>(root) * root - a * root - params.alpha_m1 * in.h;
            pass = fabsl(resid) <= 1e-11L * std::max(1.0, root * root);
        }
        all &= check_line("SIPMM quadratic residual <= 1e-11 max(1, Y^2)", pass);
    }

    // coupling self-check
    {
        ExperimentConfig cfg;
        cfg.params = *preset_params("example1");
        cfg.q = default_exponent(cfg.params.r);
        cfg.levels = {4};
        cfg.ref_level = 8;
        cfg.num_paths = 16;
        cfg.schemes = {SchemeKind::Sipmm};
        cfg.seed = seed;
        all &= check_line("self-check RMSE is exactly zero", run_self_check(cfg) == 0.0);
    }

    // desk-scale order gap
    {
        ExperimentConfig cfg;
        cfg.params = *preset_params("example1");
        cfg.q = default_exponent(cfg.params.r);
        cfg.levels = {5, 6, 7, 8};
        cfg.ref_level = 11;
        cfg.ref_scheme = SchemeKind::Sipmm;
        cfg.schemes = {SchemeKind::Sipmm, SchemeKind::Sipem};
        cfg.num_paths = 400;
        cfg.seed = seed;
        cfg.threads = threads;
        const ConvergenceReport report = run_strong_error(cfg);
        double rate_sipmm = 0, rate_sipem = 0;
        for (const auto& [scheme, fit] : report.rates) {
            if (scheme == SchemeKind::Sipmm) rate_sipmm = fit.rate;
            if (scheme == SchemeKind::Sipem) rate_sipem = fit.rate;
        }
        std::printf("       fitted rates at reduced M: SIPMM %.3f, SIPEM %.3f\n", rate_sipmm,
                    rate_sipem);
        all &= check_line("SIPMM fits near order one (reduced M, wide window)",
                          rate_sipmm > 0.7 && rate_sipmm < 1.3);
        all &= check_line("SIPEM fits near order one-half (reduced M, wide window)",
                          rate_sipem > 0.3 && rate_sipem < 0.9);
    }

    std::printf("check: %s\n", all ? "all checks passed" : "FAILURES present");
    return all ? 0 : 1;
}

int dispatch_error_code(const Error& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    if (dynamic_cast<const DomainError*>(&e)) return 3;
    if (dynamic_cast<const StepSizeError*>(&e)) return 4;
    if (dynamic_cast<const ConvergenceError*>(&e)) return 5;
    if (dynamic_cast<const IoError*>(&e)) return 6;
    return 1;
}

const char* error_code_name(int code) {
    switch (code) {
        case 2: return "ConfigError";
        case 3: return "DomainError";
        case 4: return "StepSizeError";
        case 5: return "ConvergenceError";
        case 6: return "IoError";
        default: return "Error";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kToolVersion) +
                 " - positivity-preserving Milstein schemes for the Ait-Sahalia model"};
    app.require_subcommand(1);

    CommonFlags converge_flags;
    CLI::App* converge = app.add_subcommand(
        "converge", "Strong-error sweep against a fine-step reference; emits CSV/SVG/manifest");
    add_common_flags(converge, converge_flags);

    CommonFlags stress_flags;
    std::string h_list_text = "0.25,1,10";
    CLI::App* stress = app.add_subcommand(
        "stress", "Positivity stress over extreme step sizes (pass iff every state > 0)");
    add_common_flags(stress, stress_flags);
    stress->add_option("--h-list", h_list_text, "Comma list of step sizes (default 0.25,1,10)");

    CommonFlags bench_flags;
    CLI::App* bench = app.add_subcommand(
        "bench", "Single-threaded wall-time sweep per (scheme, level), generation excluded");
    add_common_flags(bench, bench_flags);

    CommonFlags check_flags;
    CLI::App* check = app.add_subcommand("check", "Reduced-scale property/self-check suite");
    check->add_option("--threads", check_flags.threads, "Worker cap");
    check->add_option("--seed", check_flags.seed, "Seed for the reduced suite");

    try {
        app.parse(argc, argv);
        if (app.got_subcommand(converge)) return run_converge(converge_flags);
        if (app.got_subcommand(stress)) return run_stress(stress_flags, h_list_text);
        if (app.got_subcommand(bench)) return run_bench(bench_flags);
        if (app.got_subcommand(check)) return run_check(check_flags);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const Error& e) {
        const int code = dispatch_error_code(e);
        std::fprintf(stderr, "error[%s]: %s\n", error_code_name(code), e.what());
        return code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error[Unexpected]: %s\n", e.what());
        return 1;
    }
}
