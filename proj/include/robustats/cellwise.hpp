// Copyright 2026 The robustats Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "robustats/common.hpp"
#include "robustats/frame.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace robustats {

/// Per-cell diagnostics. Matrices are n x p over the model columns.
struct CellFlags {
    std::vector<std::string> columns;
    std::vector<std::int64_t> row_ids;
    std::vector<std::string> row_names;
    BoolMatrix flags;
    BoolMatrix missing;
    /// NaN where the cell is missing.
    Matrix std_residuals;
    /// Predictions in the original units.
    Matrix predictions;
    Vector row_scores;
    BoolVector row_flags;
    double cutoff = 0.0;
};

struct DdcOptions {
    double cell_cutoff_prob = 0.99;
    double corr_lim = 0.5;
    Index max_predictors = 10;
    Exec exec = Exec::parallel;
};

struct DdcModel {
    DdcOptions options;
    std::vector<std::string> columns;
    /// Numeric columns left out because they cannot be standardized.
    std::vector<std::string> dropped_columns;
    Vector location;
    Vector scale;
    /// Wrapped correlations between the standardized columns.
    Matrix correlation;
    /// slopes(j, k): slope of column j on column k in standardized units.
    Matrix slopes;
    /// connected[j]: predictor columns of j, strongest first.
    std::vector<std::vector<Index>> connected;
    Vector residual_scale;
    double cutoff = 0.0;
    CellFlags training;
};

DdcModel fit_ddc(const Frame& frame, const DdcOptions& options = {});
CellFlags ddc_predict(const DdcModel& model, const Frame& frame);
/// Flagged and missing cells of the model columns replaced by their predictions.
Frame ddc_impute(const DdcModel& model, const Frame& frame);

inline constexpr int kCellMissing = std::numeric_limits<int>::min();

/// Cell color class: 0 = inlier, kCellMissing, +k / -k = k-th positive/negative bin.
struct CellmapGrid {
    std::vector<std::string> row_labels;
    std::vector<std::int64_t> row_ids;
    std::vector<std::string> column_labels;
    Eigen::MatrixXi codes;
    Matrix std_residuals;
    int bins = 0;
    double cutoff = 0.0;
    double saturation = 4.0;
};

/// Bin of one cell: missing kCellMissing, |r| <= cutoff 0, else sign(r) * ceil(K (|r| - cutoff) / (sat - cutoff)) capped at K.
int cell_color(double r, bool missing, double cutoff, int bins = 5, double saturation = 4.0);
std::string cell_color_name(int code);

CellmapGrid cellmap_data(const CellFlags& flags,
                         const std::optional<std::vector<std::int64_t>>& rows = std::nullopt,
                         const std::optional<std::vector<std::string>>& columns = std::nullopt,
                         int bins = 5);

struct CellMcdOptions {
    double alpha = 0.75;
    double cutoff_prob = 0.99;
    int max_iterations = 100;
    double tolerance = 1e-4;
    Exec exec = Exec::parallel;
};

struct CellMCDFit {
    Vector location;
    Matrix scatter;
    /// true = unflagged and observed.
    BoolMatrix W;
    BoolMatrix missing;
    Matrix predictions;
    Matrix conditional_sd;
    /// (x - prediction) / conditional_sd, NaN where missing.
    Matrix std_residuals;
    Matrix imputed;
    Matrix data;
    std::vector<double> objective_trace;
    Vector penalties;
    Index h = 0;
    double cutoff = 0.0;
    double cutoff_prob = 0.99;
    bool converged = false;
    std::vector<std::string> warnings;

    /// Flagged cells: observed but not in W.
    BoolMatrix flags() const { return !W && !missing; }
};

/// Columns standardized by the cellwise one-step M-estimator; NaN marks missing cells.
CellMCDFit fit_cellmcd(const Matrix& X, const CellMcdOptions& options = {});

enum class CellMcdPlot { indexplot, residuals_vs_variable, residuals_vs_predictions, variable_vs_predictions, bivariate };
std::string to_string(CellMcdPlot t);
CellMcdPlot parse_cellmcd_plot(const std::string& name);

struct CellMcdPlotData {
    CellMcdPlot type = CellMcdPlot::indexplot;
    Vector x;
    Vector y;
    std::vector<double> hlines;
    std::vector<double> vlines;
    /// Bivariate only: closed tolerance ellipse, 2 x m.
    Matrix ellipse;
    /// Row positions beyond the annotation rule.
    std::vector<Index> annotated;
};

/// Ellipse {x : (x - m)' S^-1 (x - m) = chi2_{2,prob}} sampled at m points.
Matrix tolerance_ellipse(const Vector& center, const Matrix& S, double prob, int points = 181);

CellMcdPlotData cellmcd_plot_data(const CellMCDFit& fit, CellMcdPlot type, Index variable,
                                  std::optional<Index> second_variable = std::nullopt,
                                  double annotation_quantile = 0.99);

}  // namespace robustats
