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

enum class PCAMethod { robpca, spherical };
std::string to_string(PCAMethod m);
PCAMethod parse_pca_method(const std::string& name);

struct PCAFit {
    PCAMethod method = PCAMethod::robpca;
    Vector center;
    /// p x q, orthonormal columns.
    Matrix loadings;
    /// Score variances, nonincreasing.
    Vector eigenvalues;
    /// Cumulative explained-variance ratios of the first q components.
    Vector explained_variance_ratio;
    double sd_cutoff = 0.0;
    double od_cutoff = 0.0;
    Index h = 0;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> warnings;

    Index n_components() const { return loadings.cols(); }
};

struct RobpcaOptions {
    std::optional<Index> n_components;
    double k_min_var_explained = 0.8;
    double alpha = 0.75;
    std::uint64_t seed = 0;
    Exec exec = Exec::parallel;
};

PCAFit fit_robpca(const Matrix& X, const RobpcaOptions& options = {});

struct SphericalPcaOptions {
    std::optional<Index> n_components;
    double k_min_var_explained = 0.8;
};

PCAFit fit_spherical_pca(const Matrix& X, const SphericalPcaOptions& options = {});

/// (X - center) loadings.
Matrix scores(const PCAFit& fit, const Matrix& X);
/// center + scores loadings'.
Matrix project(const PCAFit& fit, const Matrix& X);

/// (med + z_{0.975} s)^{3/2} with univariate MCD location/scale of od^{2/3}.
double od_cutoff(const Vector& od);

enum class PCAClass { regular, orthogonal, good_leverage, bad_leverage };
std::string to_string(PCAClass c);

struct PCAOutlierMapData {
    Vector score_distances;
    Vector orthogonal_distances;
    double sd_cutoff = 0.0;
    double od_cutoff = 0.0;
    std::vector<PCAClass> classes;
};

PCAOutlierMapData pca_outlier_map_data(const PCAFit& fit, const Matrix& X);

}  // namespace robustats
