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
#include <span>

namespace robustats {

/// Normal-consistency constant for the MAD.
inline constexpr double kMadConsistency = 1.4833;

double median(std::span<const double> x);
double mad(std::span<const double> x, bool consistent = true);
/// Lower weighted median: smallest sorted x whose cumulative weight reaches half the total.
double weighted_median(std::span<const double> x, std::span<const double> w);
double medcouple(std::span<const double> x);

/// Type-7 (linear interpolation) sample quantile.
double quantile(std::span<const double> x, double prob);

double mean(std::span<const double> x);
/// Sample standard deviation with divisor n - ddof.
double stddev(std::span<const double> x, int ddof = 1);

Vector column_medians(const Matrix& X);
Vector column_means(const Matrix& X);
/// Classical covariance with divisor n - 1.
Matrix covariance(const Matrix& X);
Matrix covariance(const Matrix& X, const Vector& center);

/// Distances sqrt((x - mu)' Sigma^-1 (x - mu)) via a Cholesky factor.
Vector mahalanobis_distances(const Matrix& X, const Vector& mu, const Matrix& Sigma);

class L1MedianError : public Error {
public:
    L1MedianError(const std::string& what, Vector last) : Error(what), last_(std::move(last)) {}
    const Vector& last_iterate() const { return last_; }

private:
    Vector last_;
};

/// Spatial median by Weiszfeld iteration with the Vardi-Zhang correction at data points.
Vector l1median(const Matrix& X, double tol = 1e-8, int max_iter = 1000);

struct DirectionSampler {
    Index n_directions = 0;  // 0 selects 250 * p capped at 2500
    std::uint64_t seed = 0;

    /// p x m matrix of unit directions through random pairs of distinct points.
    Matrix directions(const Matrix& X) const;
};

Index default_direction_count(Index p);

/// Stahel-Donoho outlyingness using the raw MAD of each projection.
Vector stahel_donoho(const Matrix& X, const DirectionSampler& sampler,
                     Exec exec = Exec::parallel);
/// Outlyingness of X over a given set of directions (columns of A).
Vector stahel_donoho_directions(const Matrix& X, const Matrix& A, Exec exec = Exec::parallel);

struct LossFunction {
    enum class Kind { huber, bisquare };
    Kind kind = Kind::huber;
    double tuning = 1.5;

    static LossFunction huber(double b = 1.5) { return {Kind::huber, b}; }
    static LossFunction bisquare(double c = 4.685) { return {Kind::bisquare, c}; }

    /// Huber: u^2/2 inside, linear outside. Bisquare: 1 - (1 - (u/c)^2)^3, equal to 1 beyond c.
    double rho(double u) const;
    /// Huber: clip(u, -b, b). Bisquare: u (1 - (u/c)^2)^2.
    double psi(double u) const;
    /// psi(u) / u with weight(0) = psi'(0) = 1.
    double weight(double u) const;
};

enum class LossEval { rho, psi, weight };
double loss_eval(const LossFunction& f, double u, LossEval which);

double chi2_quantile(double prob, double df);
double chi2_cdf(double x, double df);
double normal_quantile(double prob);
double normal_cdf(double x);
double normal_pdf(double x);

double propagation_fraction(double eps, int p);

}  // namespace robustats
