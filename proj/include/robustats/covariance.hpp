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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace robustats {

enum class CovMethod { fastmcd, detmcd, ogk, kendall, wrapping };
std::string to_string(CovMethod m);
CovMethod parse_cov_method(const std::string& name);

struct LocationScatter {
    Vector location;
    Matrix scatter;
    Vector raw_location;
    Matrix raw_scatter;
    CovMethod method = CovMethod::fastmcd;
    Index h = 0;
    double alpha = 0.0;
    std::optional<std::uint64_t> seed;
    double raw_consistency = 1.0;
    double reweighted_consistency = 1.0;
    /// Determinant of the uncorrected covariance of the best h-subset (MCD methods).
    double objective = 0.0;
    /// Sorted indices of the best h-subset (MCD methods).
    std::vector<Index> subset;
    /// Reweighting mask (MCD methods with reweighting).
    BoolVector weights;
    std::vector<std::string> warnings;
};

/// h = max(floor(alpha n), floor((n + p + 1) / 2)), capped at n.
Index mcd_h(Index n, Index p, double alpha);

struct FastMcdOptions {
    double alpha = 0.75;
    Index n_initial_subsets = 500;
    int n_initial_c_steps = 2;
    Index n_best_subsets = 10;
    bool reweighting = true;
    bool consistency = true;
    std::uint64_t seed = 0;
    Exec exec = Exec::parallel;
};

/// Random (p+1)-subset starts, each concentrated by C-steps; the best
/// n_best_subsets are iterated until the subset repeats. Start k draws from its
/// own stream derived from (seed, k).
LocationScatter fit_fast_mcd(const Matrix& X, const FastMcdOptions& options = {});

struct DetMcdOptions {
    double alpha = 0.75;
    bool reweighting = true;
    bool consistency = true;
    Exec exec = Exec::parallel;
};

/// Six deterministic starts computed on median/Qn standardized data, each
/// concentrated to convergence.
LocationScatter fit_det_mcd(const Matrix& X, const DetMcdOptions& options = {});

/// One orthogonalization step with tau scales and tau locations.
LocationScatter fit_ogk(const Matrix& X);

/// sin(pi tau_b / 2) correlations scaled by Qn, medians as location.
LocationScatter fit_kendall_tau_cov(const Matrix& X);

struct WrappingConstants {
    double b = 1.5;
    double c = 4.0;
    double q1 = 0.0;
    double q2 = 0.0;
};

/// q1, q2 of the tanh branch: continuity at b together with 2 A q2 = q1 B,
/// A = E[psi(Z)^2], B = E[psi'(Z)].
WrappingConstants wrapping_constants(double b = 1.5, double c = 4.0);
double wrapping_psi(double z, const WrappingConstants& k);

/// Classical mean and covariance of psi-wrapped median/MAD standardized data,
/// mapped back to the original units.
LocationScatter fit_wrapping_cov(const Matrix& X, double b = 1.5, double c = 4.0);

Vector robust_distances(const LocationScatter& fit, const Matrix& X);

struct DDPlotData {
    Vector classical_distances;
    Vector robust_distances;
    double cutoff = 0.0;
    BoolVector flags;
};

DDPlotData distance_distance_data(const LocationScatter& fit, const Matrix& X);

LocationScatter fit_covariance(const Matrix& X, CovMethod method, double alpha = 0.75,
                               std::uint64_t seed = 0, Exec exec = Exec::parallel);

}  // namespace robustats
