#pragma once

#include "hoaxnet/engine.hpp"

#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hoaxnet {

/// Writes each line prefixed with "# ".
void write_comments(std::ostream& out, std::span<const std::string> comments);

/// Header row plus one row of report fields, 6 fractional digits.
void write_report_csv(std::ostream& out, const EquilibriumReport& report);

/// One row per grid cell, row-major over (axis1, axis2).
void write_sweep_csv(std::ostream& out, const SweepResult& result);

/// Columns t,S_gu,B_gu,F_gu,S_sk,B_sk,F_sk.
void write_trajectory_csv(std::ostream& out, std::span<const PopulationCounts> series);

/// Columns alpha,critical_pf over `steps` evenly spaced alphas covering [0, 1].
void write_threshold_csv(std::ostream& out, std::size_t steps);

/// Binary 16-bit graymap (P5, maxval 65535) of one report field. Rows follow
/// axis1, columns axis2; values in [0, 1] map linearly to [0, 65535], clamped.
void write_heatmap_pgm(std::ostream& out, const SweepResult& result, std::string_view field,
                       std::span<const std::string> comments = {});

/// Opens `path` for binary writing, runs `body`, and reports failures as IoError.
void write_file(const std::string& path, const std::function<void(std::ostream&)>& body);

}  // namespace hoaxnet
