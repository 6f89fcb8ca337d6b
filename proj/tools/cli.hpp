// Copyright 2026 The robustats Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace robustats::cli {

inline constexpr int kSchemaVersion = 1;

/// Runs one subcommand. args excludes the program name. Returns 0 on success,
/// 2 on usage errors and 1 on computation errors (message written to err).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Renders a plot-data CSV and its .json sidecar. kind is one of ddplot,
/// outlier_map, pca_map, cellmap, boxplot or cellmcd_<plot type>.
std::string render_svg(const std::string& csv_path, const std::string& kind);

}  // namespace robustats::cli
