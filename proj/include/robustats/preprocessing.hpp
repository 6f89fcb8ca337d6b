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
#include "robustats/univariate.hpp"

#include <span>
#include <string>
#include <vector>

namespace robustats {

struct CleanThresholds {
    double frac_na_row = 0.5;
    double frac_na_col = 0.5;
    int min_unique = 3;
    double scale_floor = 1e-12;
};

/// Columns and rows removed by clean_dataset, keyed by reason. Each column is
/// listed under its first failing rule only.
struct CleanReport {
    std::vector<std::string> non_numeric_cols;
    std::vector<std::string> cols_rownumbers;
    std::vector<std::string> cols_discrete;
    std::vector<std::string> cols_bad_scale;
    std::vector<std::string> cols_missings;
    std::vector<std::int64_t> rows_missings;

    bool empty() const;
    /// {"dropped_columns": {five reasons}, "dropped_rows": {"rows_missings": [...]}}
    std::string to_json() const;
};

struct CleanResult {
    Frame data;
    CleanReport report;
};

/// Drops, in order: text columns, case-number columns, columns with fewer than
/// min_unique distinct values, columns with consistent MAD below scale_floor,
/// then columns and rows whose missing fraction reaches the thresholds.
CleanResult clean_dataset(const Frame& frame, const CleanThresholds& thresholds = {});

enum class PowerMethod { automatic, boxcox, yeojohnson };
std::string to_string(PowerMethod m);
PowerMethod parse_power_method(const std::string& name);

struct PowerTransformOptions {
    bool standardize = true;
    double lambda_lower = -4.0;
    double lambda_upper = 6.0;
    /// Chi-square(1) probability defining the reweighting cutoff.
    double quantile = 0.99;
    int nsteps = 2;
};

/// Fitted transform: z = (T_lambda((x - pre_location) / pre_scale) - post_location) / post_scale.
/// Box-Cox keeps pre_location = 0. Without standardization all shifts are 0 and scales 1.
struct PowerTransform {
    PowerMethod method = PowerMethod::boxcox;
    double lambda_raw = 1.0;
    double lambda_rew = 1.0;
    double pre_location = 0.0;
    double pre_scale = 1.0;
    double post_location = 0.0;
    double post_scale = 1.0;
};

double boxcox(double x, double lambda);
double boxcox_inverse(double y, double lambda);
double yeojohnson(double x, double lambda);
double yeojohnson_inverse(double y, double lambda);

/// lambda_raw minimizes a robust normality criterion of the rectified transform,
/// followed by reweighted maximum likelihood. method = automatic picks Box-Cox iff
/// every value is strictly positive. Values must be finite.
PowerTransform fit_power_transform(std::span<const double> x,
                                   PowerMethod method = PowerMethod::automatic,
                                   const PowerTransformOptions& options = {});

enum class Direction { forward, inverse };

/// NaN entries pass through unchanged.
std::vector<double> apply_power_transform(const PowerTransform& t, std::span<const double> x,
                                          Direction direction = Direction::forward);

struct ColumnScale {
    std::string column;
    double location = 0.0;
    double scale = 1.0;
};

struct ScaleResult {
    Frame data;
    std::vector<ColumnScale> parameters;
};

/// (x - location) / scale per numeric column, estimated on non-missing cells. Text
/// columns pass through.
ScaleResult robust_scale(const Frame& frame, UnivariateMethod method = UnivariateMethod::umcd,
                         bool with_centering = true, bool with_scaling = true);
Frame robust_unscale(const Frame& frame, const std::vector<ColumnScale>& parameters);

}  // namespace robustats
