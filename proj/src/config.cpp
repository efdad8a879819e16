#include "aitsde/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "aitsde/errors.hpp"
#include "aitsde/projection.hpp"

namespace aitsde {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    double out = 0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last)
        throw ConfigError("config: key '" + key + "' expects a number, got '" + value + "'");
    return out;
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& value) {
    Int out = 0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last)
        throw ConfigError("config: key '" + key + "' expects an integer, got '" + value + "'");
    return out;
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::string item;
    std::stringstream stream(value);
    while (std::getline(stream, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

SchemeKind parse_scheme(const std::string& key, const std::string& name) {
    const auto kind = scheme_from_string(name);
    if (!kind)
        throw ConfigError("config: key '" + key + "' has unknown scheme '" + name +
                          "' (expected SIPMM, SIPEM or BEM)");
    return *kind;
}

// Metadata keys a manifest carries alongside the config echo; accepted and
// ignored so a manifest file can be fed back as a config.
bool is_metadata_key(const std::string& key) {
    return key == "version" || key == "timestamp" || key == "csv" || key == "svg" ||
           key == "manifest" || key == "out";
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

}  // namespace

KeyValueList load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open '" + path.string() + "'");
    KeyValueList entries;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: " + path.string() + ":" +
                              std::to_string(line_number) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config: " + path.string() + ":" +
                              std::to_string(line_number) + ": empty key");
        entries.emplace_back(key, value);
    }
    return entries;
}

const std::vector<std::string>& known_config_keys() {
    static const std::vector<std::string> keys = {
        "preset",  "alpha_m1", "alpha_0",    "alpha_1", "alpha_2",
        "sigma",   "r",        "rho",        "x0",      "T",
        "q",       "levels",   "ref_level",  "ref_scheme", "schemes",
        "paths",   "seed",     "threads",    "timing"};
    return keys;
}

BuiltConfig build_config(const KeyValueList& entries) {
    std::optional<ModelParams> preset;
    for (const auto& [key, value] : entries) {
        if (key != "preset") continue;
        preset = preset_params(value);
        if (!preset)
            throw ConfigError("config: unknown preset '" + value +
                              "' (expected example1, example2 or example3)");
    }

    std::optional<double> alpha_m1, alpha_0, alpha_1, alpha_2, sigma, r, rho, x0;
    if (preset) {
        alpha_m1 = preset->alpha_m1;
        alpha_0 = preset->alpha_0;
        alpha_1 = preset->alpha_1;
        alpha_2 = preset->alpha_2;
        sigma = preset->sigma;
        r = preset->r;
        rho = preset->rho;
        x0 = preset->x0;
    }

    ExperimentConfig cfg;
    cfg.horizon = 1.0;
    cfg.levels = {5, 6, 7, 8, 9};
    cfg.ref_level = 12;
    cfg.ref_scheme = SchemeKind::Sipmm;
    cfg.schemes = {SchemeKind::Sipmm, SchemeKind::Sipem, SchemeKind::Bem};
    cfg.num_paths = 2000;
    std::optional<double> q;

    for (const auto& [key, value] : entries) {
        if (key == "preset" || is_metadata_key(key)) continue;
        if (key == "alpha_m1") alpha_m1 = parse_double(key, value);
        else if (key == "alpha_0") alpha_0 = parse_double(key, value);
        else if (key == "alpha_1") alpha_1 = parse_double(key, value);
        else if (key == "alpha_2") alpha_2 = parse_double(key, value);
        else if (key == "sigma") sigma = parse_double(key, value);
        else if (key == "r") r = parse_double(key, value);
        else if (key == "rho") rho = parse_double(key, value);
        else if (key == "x0") x0 = parse_double(key, value);
        else if (key == "T") cfg.horizon = parse_double(key, value);
        else if (key == "q") q = parse_double(key, value);
        else if (key == "levels") {
            cfg.levels.clear();
            for (const auto& item : split_list(value))
                cfg.levels.push_back(parse_int<int>(key, item));
            if (cfg.levels.empty()) throw ConfigError("config: key 'levels' is empty");
        } else if (key == "ref_level") cfg.ref_level = parse_int<int>(key, value);
        else if (key == "ref_scheme") cfg.ref_scheme = parse_scheme(key, value);
        else if (key == "schemes") {
            cfg.schemes.clear();
            for (const auto& item : split_list(value)) cfg.schemes.push_back(parse_scheme(key, item));
            if (cfg.schemes.empty()) throw ConfigError("config: key 'schemes' is empty");
        } else if (key == "paths") cfg.num_paths = parse_int<int>(key, value);
        else if (key == "seed") cfg.seed = parse_int<std::uint64_t>(key, value);
        else if (key == "threads") cfg.threads = parse_int<int>(key, value);
        else if (key == "timing") cfg.timing = value == "1" || value == "true";
        else throw ConfigError("config: unknown key '" + key + "'");
    }

    const auto require = [](const std::optional<double>& field, const char* name) {
        if (!field) throw ConfigError(std::string("config: missing required key '") + name + "'");
        return *field;
    };
    cfg.params.alpha_m1 = require(alpha_m1, "alpha_m1");
    cfg.params.alpha_0 = require(alpha_0, "alpha_0");
    cfg.params.alpha_1 = require(alpha_1, "alpha_1");
    cfg.params.alpha_2 = require(alpha_2, "alpha_2");
    cfg.params.sigma = require(sigma, "sigma");
    cfg.params.r = require(r, "r");
    cfg.params.rho = require(rho, "rho");
    cfg.params.x0 = require(x0, "x0");
    cfg.q = q.value_or(0.0);

    BuiltConfig built;
    try {
        validate(cfg.params);
        if (!q) cfg.q = default_exponent(cfg.params.r);
        make_projection(cfg.q, cfg.params.r);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    switch (classify_regime(cfg.params)) {
        case Regime::Inadmissible:
            throw ConfigError(
                "config: parameters fall in the Inadmissible regime (critical case with "
                "alpha_2/sigma^2 <= (r + 2 + 1/r)/8); refusing to run");
        case Regime::CriticalHalfOnly:
            built.warnings.push_back(
                "parameters fall in the CriticalHalfOnly regime: coefficients are monotone "
                "but the order-one convergence guarantee does not apply");
            break;
        default:
            break;
    }

    built.config = cfg;
    return built;
}

KeyValueList config_echo(const ExperimentConfig& cfg) {
    KeyValueList echo;
    echo.emplace_back("alpha_m1", format_double(cfg.params.alpha_m1));
    echo.emplace_back("alpha_0", format_double(cfg.params.alpha_0));
    echo.emplace_back("alpha_1", format_double(cfg.params.alpha_1));
    echo.emplace_back("alpha_2", format_double(cfg.params.alpha_2));
    echo.emplace_back("sigma", format_double(cfg.params.sigma));
    echo.emplace_back("r", format_double(cfg.params.r));
    echo.emplace_back("rho", format_double(cfg.params.rho));
    echo.emplace_back("x0", format_double(cfg.params.x0));
    echo.emplace_back("T", format_double(cfg.horizon));
    echo.emplace_back("q", format_double(cfg.q));
    std::string levels;
    for (std::size_t i = 0; i < cfg.levels.size(); ++i)
        levels += (i ? "," : "") + std::to_string(cfg.levels[i]);
    echo.emplace_back("levels", levels);
    echo.emplace_back("ref_level", std::to_string(cfg.ref_level));
    echo.emplace_back("ref_scheme", std::string(to_string(cfg.ref_scheme)));
    std::string schemes;
    for (std::size_t i = 0; i < cfg.schemes.size(); ++i)
        schemes += (i ? "," : "") + std::string(to_string(cfg.schemes[i]));
    echo.emplace_back("schemes", schemes);
    echo.emplace_back("paths", std::to_string(cfg.num_paths));
    echo.emplace_back("seed", std::to_string(cfg.seed));
    echo.emplace_back("threads", std::to_string(cfg.threads));
    echo.emplace_back("timing", cfg.timing ? "1" : "0");
    return echo;
}

}  // namespace aitsde
