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
#include "robustats/covariance.hpp"
#include "robustats/kernel.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace robustats {

enum class RegMethod { lts, s, mm };
std::string to_string(RegMethod m);
RegMethod parse_reg_method(const std::string& name);

struct RegressionFit {
    RegMethod method = RegMethod::lts;
    Vector coefficients;
    double intercept = 0.0;
    bool has_intercept = true;
    double residual_scale = 0.0;
    /// Location/scatter of the predictors used for leverage distances.
    std::optional<LocationScatter> x_model;
    bool converged = true;
    Index h = 0;
    double alpha = 0.0;
    std::optional<std::uint64_t> seed;
    /// LTS: raw trimmed sum of squares. S: the M-scale. MM: final M-objective.
    double objective = 0.0;
    Vector raw_coefficients;
    double raw_intercept = 0.0;
    double raw_scale = 0.0;
    /// LTS reweighting mask.
    BoolVector weights;
    /// MM: M-objective at the S start.
    double start_objective = 0.0;
    int iterations = 0;
    std::vector<std::string> warnings;
};

struct LtsOptions {
    double alpha = 0.5;
    Index n_initial_subsets = 500;
    int n_initial_c_steps = 2;
    Index n_best_subsets = 10;
    bool reweighting = true;
    bool intercept = true;
    bool fit_x_model = true;
    std::uint64_t seed = 0;
    Exec exec = Exec::parallel;
};

/// h = floor(alpha n) smallest squared residuals, concentrated from random
/// elemental starts.
RegressionFit fit_fast_lts(const Matrix& X, const Vector& y, const LtsOptions& options = {});

struct SOptions {
    LossFunction loss = LossFunction::bisquare(1.547);
    /// Right-hand side of the scale constraint mean rho(r / s) = b.
    double b = 0.5;
    Index n_initial_subsets = 500;
    int n_initial_steps = 2;
    Index n_best = 5;
    double tolerance = 1e-7;
    int max_iterations = 500;
    bool intercept = true;
    bool fit_x_model = true;
    std::uint64_t seed = 0;
    Exec exec = Exec::parallel;
};

/// Solves mean(rho(r / s)) = b for s. Returns 0 when more than n (1 - b) residuals vanish.
double m_scale(const Vector& r, const LossFunction& loss, double b);

RegressionFit fit_s_regression(const Matrix& X, const Vector& y, const SOptions& options = {});

/// Bisquare tuning constant reaching the given normal efficiency (4.685 at 0.95).
double bisquare_efficiency_constant(double efficiency);

struct MMOptions {
    double efficiency = 0.95;
    double tolerance = 1e-8;
    int max_iterations = 500;
    SOptions s;
};

/// S fit for the scale, then IRLS on the bisquare M-objective with that scale fixed.
RegressionFit fit_mm_regression(const Matrix& X, const Vector& y, const MMOptions& options = {});

Vector predict(const RegressionFit& fit, const Matrix& X);

enum class PointClass { regular, vertical, good_leverage, bad_leverage };
std::string to_string(PointClass c);

struct OutlierMapData {
    Vector std_residuals;
    Vector x_distances;
    double v_threshold = 2.5;
    double h_threshold = 0.0;
    std::vector<PointClass> classes;
};

OutlierMapData outlier_map_data(const RegressionFit& fit, const Matrix& X, const Vector& y);

}  // namespace robustats
