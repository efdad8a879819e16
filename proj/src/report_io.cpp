#include "aitsde/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <vector>

#include "aitsde/errors.hpp"

namespace aitsde {

namespace {

std::string num17(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string coord(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9f", value);
    return buf;
}

void write_text_file(const std::string& text, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("io: cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw IoError("io: failed writing '" + path.string() + "'");
}

}  // namespace

std::string to_csv(const ConvergenceReport& report) {
    std::string csv = "scheme,level,h,rmse,wall_time_s\n";
    for (const CellResult& cell : report.cells) {
        csv += std::string(to_string(cell.scheme)) + "," + std::to_string(cell.level) + "," +
               num17(cell.h) + "," + num17(cell.rmse) + "," + num17(cell.wall_time_s) + "\n";
    }
    for (const auto& [scheme, fit] : report.rates) {
        csv += std::string(to_string(scheme)) + ",RATE,," + num17(fit.rate) + "," +
               num17(fit.residual) + "\n";
    }
    return csv;
}

void emit_csv(const ConvergenceReport& report, const std::filesystem::path& path) {
    write_text_file(to_csv(report), path);
}

namespace {

struct Series {
    SchemeKind scheme;
    std::vector<std::pair<double, double>> points;  // (log2 h, log2 rmse), h ascending
};

constexpr double kWidth = 720, kHeight = 540;
constexpr double kLeft = 70, kRight = 700, kTop = 40, kBottom = 480;

const char* series_color(std::size_t index) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};
    return palette[index % (sizeof palette / sizeof palette[0])];
}

}  // namespace

std::string to_svg(const ConvergenceReport& report) {
    std::vector<Series> series;
    for (SchemeKind scheme : report.config.schemes) {
        Series s{scheme, {}};
        for (const CellResult& cell : report.cells) {
            if (cell.scheme != scheme) continue;
            if (!(cell.rmse > 0))
                throw DomainError("plot: rmse must be positive on a log scale");
            s.points.emplace_back(std::log2(cell.h), std::log2(cell.rmse));
        }
        if (s.points.size() < 2)
            throw DomainError("plot: need at least two levels per scheme");
        std::sort(s.points.begin(), s.points.end());
        series.push_back(std::move(s));
    }
    if (series.empty()) throw DomainError("plot: report has no schemes");

    // Reference slopes hang off the finest-step point of the SIPMM series
    // (first series when SIPMM was not run).
    const Series* anchor_series = &series.front();
    for (const Series& s : series)
        if (s.scheme == SchemeKind::Sipmm) {
            anchor_series = &s;
            break;
        }
    const auto [anchor_x, anchor_y] = anchor_series->points.front();

    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    for (const Series& s : series)
        for (const auto& [x, y] : s.points) {
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    for (double slope : {1.0, 0.5})
        for (double x : {x_min, x_max}) {
            const double y = anchor_y + slope * (x - anchor_x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    const double x_pad = 0.04 * std::max(x_max - x_min, 1e-9);
    const double y_pad = 0.04 * std::max(y_max - y_min, 1e-9);
    x_min -= x_pad;
    x_max += x_pad;
    y_min -= y_pad;
    y_max += y_pad;

    const auto sx = [&](double x) {
        return kLeft + (x - x_min) / (x_max - x_min) * (kRight - kLeft);
    };
    const auto sy = [&](double y) {
        return kBottom - (y - y_min) / (y_max - y_min) * (kBottom - kTop);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num17(kWidth) +
           "\" height=\"" + num17(kHeight) + "\" viewBox=\"0 0 " + num17(kWidth) + " " +
           num17(kHeight) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + num17(kWidth) + "\" height=\"" +
           num17(kHeight) + "\" fill=\"white\"/>\n";
    svg += "<text x=\"" + coord((kLeft + kRight) / 2) +
           "\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">"
           "Strong error at T vs step size</text>\n";

    // Plot frame and ticks drawn with rect/path so that <line> elements are
    // reserved for the two reference slopes.
    svg += "<rect x=\"" + coord(kLeft) + "\" y=\"" + coord(kTop) + "\" width=\"" +
           coord(kRight - kLeft) + "\" height=\"" + coord(kBottom - kTop) +
           "\" fill=\"none\" stroke=\"black\"/>\n";
    std::string ticks = "<path stroke=\"black\" fill=\"none\" d=\"";
    std::string labels;
    for (int k = static_cast<int>(std::ceil(x_min)); k <= static_cast<int>(std::floor(x_max)); ++k) {
        ticks += "M" + coord(sx(k)) + " " + coord(kBottom) + "v6";
        labels += "<text x=\"" + coord(sx(k)) + "\" y=\"" + coord(kBottom + 20) +
                  "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" +
                  std::to_string(k) + "</text>\n";
    }
    for (int k = static_cast<int>(std::ceil(y_min)); k <= static_cast<int>(std::floor(y_max)); ++k) {
        ticks += "M" + coord(kLeft) + " " + coord(sy(k)) + "h-6";
        labels += "<text x=\"" + coord(kLeft - 10) + "\" y=\"" + coord(sy(k) + 4) +
                  "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">" +
                  std::to_string(k) + "</text>\n";
    }
    ticks += "\"/>\n";
    svg += ticks + labels;
    svg += "<text x=\"" + coord((kLeft + kRight) / 2) + "\" y=\"" + coord(kBottom + 42) +
           "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">log2(h)</text>\n";
    svg += "<text x=\"18\" y=\"" + coord((kTop + kBottom) / 2) +
           "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 18 " +
           coord((kTop + kBottom) / 2) + ")\">log2(RMSE)</text>\n";

    for (double slope : {1.0, 0.5}) {
        const double y0 = anchor_y + slope * (x_min - anchor_x);
        const double y1 = anchor_y + slope * (x_max - anchor_x);
        svg += "<line class=\"refline slope-" + std::string(slope == 1.0 ? "1" : "05") +
               "\" x1=\"" + coord(sx(x_min)) + "\" y1=\"" + coord(sy(y0)) + "\" x2=\"" +
               coord(sx(x_max)) + "\" y2=\"" + coord(sy(y1)) +
               "\" stroke=\"#777777\" stroke-dasharray=\"7 5\"/>\n";
    }

    for (std::size_t i = 0; i < series.size(); ++i) {
        const Series& s = series[i];
        std::string points;
        for (const auto& [x, y] : s.points) {
            if (!points.empty()) points += " ";
            points += coord(sx(x)) + "," + coord(sy(y));
        }
        svg += "<polyline class=\"series\" data-scheme=\"" +
               std::string(to_string(s.scheme)) + "\" points=\"" + points +
               "\" fill=\"none\" stroke=\"" + series_color(i) + "\" stroke-width=\"1.8\"/>\n";
        for (const auto& [x, y] : s.points)
            svg += "<circle cx=\"" + coord(sx(x)) + "\" cy=\"" + coord(sy(y)) +
                   "\" r=\"3\" fill=\"" + series_color(i) + "\"/>\n";
    }

    double legend_y = kTop + 18;
    for (std::size_t i = 0; i < series.size(); ++i) {
        std::string label(to_string(series[i].scheme));
        for (const auto& [scheme, fit] : report.rates)
            if (scheme == series[i].scheme) {
                char buf[48];
                std::snprintf(buf, sizeof buf, " (fit %.4f)", fit.rate);
                label += buf;
            }
        svg += "<rect x=\"" + coord(kLeft + 12) + "\" y=\"" + coord(legend_y - 9) +
               "\" width=\"14\" height=\"4\" fill=\"" + series_color(i) + "\"/>\n";
        svg += "<text x=\"" + coord(kLeft + 32) + "\" y=\"" + coord(legend_y) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + label + "</text>\n";
        legend_y += 18;
    }
    svg += "<text x=\"" + coord(kLeft + 32) + "\" y=\"" + coord(legend_y) +
           "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#555555\">dashed: slopes 1 "
           "and 1/2</text>\n";

    svg += "</svg>\n";
    return svg;
}

void emit_plot(const ConvergenceReport& report, const std::filesystem::path& path) {
    write_text_file(to_svg(report), path);
}

std::string to_manifest_text(const RunManifest& manifest) {
    std::string text;
    text += "version=" + manifest.tool_version + "\n";
    text += "timestamp=" + manifest.timestamp + "\n";
    for (const auto& [key, value] : manifest.artifacts) text += key + "=" + value + "\n";
    for (const auto& [key, value] : manifest.config) text += key + "=" + value + "\n";
    return text;
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
    write_text_file(to_manifest_text(manifest), path);
}

}  // namespace aitsde
