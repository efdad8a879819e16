#pragma once

#include <filesystem>
#include <string>

#include "aitsde/config.hpp"
#include "aitsde/harness.hpp"

namespace aitsde {

// CSV rendering of a convergence report: header
//   scheme,level,h,rmse,wall_time_s
// one row per (scheme, level) cell, then one
//   <scheme>,RATE,,<q_hat>,<residual>
// summary row per fitted scheme. Decimals carry 17 significant digits and
// lines end with LF, so re-running an identical config reproduces the file
// byte for byte.
std::string to_csv(const ConvergenceReport& report);
void emit_csv(const ConvergenceReport& report, const std::filesystem::path& path);

// Self-contained SVG log2-log2 plot: one <polyline> per scheme, two dashed
// <line> reference slopes (1 and 1/2) anchored at the finest-step point of
// the first SIPMM series (first scheme if SIPMM is absent), legend with
// fitted rates. No external assets. Requires two or more levels per scheme
// and positive rmse values.
std::string to_svg(const ConvergenceReport& report);
void emit_plot(const ConvergenceReport& report, const std::filesystem::path& path);

struct RunManifest {
    std::string tool_version;
    std::string timestamp;  // ISO 8601 UTC
    KeyValueList artifacts;  // e.g. {"csv", "out/convergence.csv"}
    KeyValueList config;     // config_echo of the executed run
};

// key=value rendering; loadable by build_config to reproduce the run
// (metadata keys are ignored on the way back in).
std::string to_manifest_text(const RunManifest& manifest);
void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

}  // namespace aitsde
