#include "hoaxnet/output.hpp"

#include "hoaxnet/errors.hpp"
#include "hoaxnet/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace hoaxnet {

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s(buf);
    if (s == "-0.000000") s = "0.000000";
    return s;
}

void write_report_header(std::ostream& out) {
    const auto& names = EquilibriumReport::field_names();
    for (std::size_t k = 0; k < names.size(); ++k) out << (k ? "," : "") << names[k];
}

void write_report_values(std::ostream& out, const EquilibriumReport& r) {
    const auto v = r.values();
    for (std::size_t k = 0; k < v.size(); ++k) out << (k ? "," : "") << fixed6(v[k]);
}

}  // namespace

void write_comments(std::ostream& out, std::span<const std::string> comments) {
    for (const auto& c : comments) out << "# " << c << '\n';
}

void write_report_csv(std::ostream& out, const EquilibriumReport& report) {
    write_report_header(out);
    out << '\n';
    write_report_values(out, report);
    out << '\n';
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    out << result.axis1.name << ',' << result.axis2.name << ',';
    write_report_header(out);
    out << '\n';
    for (const auto& cell : result.cells) {
        out << fixed6(cell.value1) << ',' << fixed6(cell.value2) << ',';
        write_report_values(out, cell.report);
        out << '\n';
    }
}

void write_trajectory_csv(std::ostream& out, std::span<const PopulationCounts> series) {
    out << "t,S_gu,B_gu,F_gu,S_sk,B_sk,F_sk\n";
    for (std::size_t t = 0; t < series.size(); ++t) {
        const auto& c = series[t];
        out << t << ',' << c.gullible.S << ',' << c.gullible.B << ',' << c.gullible.F << ',' << c.skeptic.S << ','
            << c.skeptic.B << ',' << c.skeptic.F << '\n';
    }
}

void write_threshold_csv(std::ostream& out, std::size_t steps) {
    const AxisSpec axis{"alpha", 0.0, 1.0, steps};
    out << "alpha,critical_pf\n";
    for (double a : axis.values()) out << fixed6(a) << ',' << fixed6(critical_pf(a)) << '\n';
}

void write_heatmap_pgm(std::ostream& out, const SweepResult& result, std::string_view field,
                       std::span<const std::string> comments) {
    const std::size_t rows = result.axis1.steps;
    const std::size_t cols = result.axis2.steps;
    out << "P5\n";
    write_comments(out, comments);
    out << "# field: " << field << '\n';
    out << cols << ' ' << rows << '\n' << 65535 << '\n';
    std::string pixels;
    pixels.reserve(2 * rows * cols);
    for (const auto& cell : result.cells) {
        const double v = std::clamp(cell.report.field(field), 0.0, 1.0);
        const auto level = static_cast<unsigned>(std::lround(v * 65535.0));
        pixels.push_back(static_cast<char>((level >> 8) & 0xFF));
        pixels.push_back(static_cast<char>(level & 0xFF));
    }
    out.write(pixels.data(), static_cast<std::streamsize>(pixels.size()));
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path, "cannot open for writing");
    body(out);
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

}  // namespace hoaxnet
