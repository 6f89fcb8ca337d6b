// Copyright 2026 The robustats Authors
// SPDX-License-Identifier: Apache-2.0

// Independent oracles and property checks shared by the unit suites and the
// acceptance runner.

#pragma once

#include "robustats/common.hpp"
#include "robustats/frame.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace robustats::checks {

Matrix normal_matrix(Rng& rng, Index n, Index p);
Vector normal_vector(Rng& rng, Index n);
/// Random orthogonal matrix (QR of a Gaussian matrix with sign-fixed R).
Matrix random_orthogonal(Rng& rng, Index p);
/// Q1 diag(s) Q2 with singular values in [0.5, 2].
Matrix random_affine(Rng& rng, Index p);

/// Largest |a - b| / max(1, |b|) over all entries.
double rel_diff(const Matrix& a, const Matrix& b);
bool bitwise_equal(const Matrix& a, const Matrix& b);

/// Every subset of {0..n-1} of size k, in lexicographic order.
void for_each_subset(Index n, Index k, const std::function<void(const std::vector<Index>&)>& f);

// Brute-force oracles.
double naive_qn(const std::vector<double>& x);
double brute_medcouple(const std::vector<double>& x);
/// Smallest determinant of the (divisor h - 1) covariance over all h-subsets.
double exhaustive_mcd_objective(const Matrix& X, Index h);
/// Smallest least-squares residual sum of squares over all h-subsets (intercept included).
double exhaustive_lts_objective(const Matrix& X, const Vector& y, Index h);
/// Lower regularized gamma P(a, x) by series or continued fraction.
double gamma_p(double a, double x);
double chi2_quantile_bisection(double prob, double df);
/// Outlyingness over 'angles' equally spaced directions on the half circle (p = 2).
Vector sdo_angular_grid(const Matrix& X, int angles);
/// Objective sum ||x_i - m|| minimized by a grid search refined three times.
Vector l1median_grid(const Matrix& X);

struct OracleSummary {
    int instances = 0;
    double max_rel_diff = 0.0;
};

/// FastMCD raw objective vs exhaustive enumeration on random instances with n <= 12.
OracleSummary mcd_oracle(int instances, std::uint64_t seed);
/// FastLTS raw objective vs exhaustive enumeration on random instances with n <= 12.
OracleSummary lts_oracle(int instances, std::uint64_t seed);
/// Fast Qn vs the naive pairwise version on random samples with n <= 200.
OracleSummary qn_oracle(int instances, std::uint64_t seed);
/// Medcouple vs the brute-force kernel median on random samples with n <= 100.
OracleSummary medcouple_oracle(int instances, std::uint64_t seed);

struct EquivarianceSummary {
    std::string estimator;
    std::string group;
    int transforms = 0;
    double max_error = 0.0;
};

/// Covariance estimators; fastmcd under general affine maps, the coordinatewise
/// ones under diagonal scaling, permutation and translation.
EquivarianceSummary covariance_equivariance(const std::string& method, int transforms, std::uint64_t seed);
/// Regression, scale and affine equivariance of lts, s and mm.
EquivarianceSummary regression_equivariance(const std::string& method, int transforms, std::uint64_t seed);
/// Rotation, scaling and translation equivariance of robpca and spherical PCA.
EquivarianceSummary pca_equivariance(const std::string& method, int transforms, std::uint64_t seed);

struct ConsistencySummary {
    std::string estimator;
    double mean_scale = 0.0;
    /// Largest |mean rho(r / s) - b| over the returned S solutions (S only).
    double max_constraint_residual = 0.0;
};

/// Average scale on clean standard normal data.
ConsistencySummary scale_consistency(const std::string& estimator, Index n, int replicates,
                                     std::uint64_t seed);

struct DeterminismSummary {
    std::string estimator;
    bool identical = true;
};

/// Serial path and parallel path with 1, 2, 3 and 4 threads give bitwise equal results.
DeterminismSummary thread_invariance(const std::string& estimator, std::uint64_t seed);
/// Two DetMCD fits of the same data give bitwise equal results.
bool detmcd_repeatable(std::uint64_t seed);

/// Cleaned bundled TopGear with Price power-transformed into Price_transformed
/// and Displacement, BHP, Torque and TopSpeed transformed in place. Missing
/// cells are kept.
Frame topgear_transformed();
/// Log-prepared TopGear for cellwise MCD: Verdict dropped, log of the engine
/// columns and log(Price / 1000).
Frame topgear_log();

}  // namespace robustats::checks
