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
#include "robustats/kernel.hpp"

#include <optional>
#include <span>
#include <string>

namespace robustats {

enum class UnivariateMethod { umcd, onestep_m, qn, tau, median_mad };

std::string to_string(UnivariateMethod m);
UnivariateMethod parse_univariate_method(const std::string& name);

struct UnivariateFit {
    double location = 0.0;
    double scale = 0.0;
    UnivariateMethod method = UnivariateMethod::umcd;
    std::optional<Index> h;
    bool consistency_applied = false;
    bool degenerate = false;
    double raw_location = 0.0;
    double raw_scale = 0.0;
};

struct BoxplotFences {
    double q1 = 0.0, q3 = 0.0, iqr = 0.0, mc = 0.0;
    double lower = 0.0, upper = 0.0;
    BoolVector outlier_flags;
};

/// h = max(floor(alpha n), 2). The raw fit is the contiguous window of the sorted
/// sample with the smallest variance (divisor h - 1).
UnivariateFit fit_univariate_mcd(std::span<const double> x, double alpha = 0.75,
                                 bool reweight = true, bool consistent = true);

/// Weight functions of a one-step M-estimator. The location step uses
/// location_loss.weight; the scale step uses psi(r)^2 of scale_loss, normalised by
/// delta = E[psi(Z)^2] so the scale is consistent at the normal.
struct OneStepSpec {
    LossFunction location_loss = LossFunction::huber(1.5);
    LossFunction scale_loss = LossFunction::huber(1.5);
};

/// delta = E[psi(Z)^2] for Z ~ N(0, 1), by adaptive quadrature.
double one_step_delta(const LossFunction& scale_loss);

UnivariateFit fit_one_step_m(std::span<const double> x, const OneStepSpec& spec = {});

/// Bisquare(3) location and Huber(2.5) scale, used to standardize columns for
/// cellwise methods.
OneStepSpec cellwise_one_step_spec();

/// Qn = 2.219 times the k-th smallest pairwise gap, k = C(h, 2), h = floor(n/2) + 1.
/// Uses the O(n log n) weighted-median selection algorithm.
UnivariateFit fit_qn(std::span<const double> x);

UnivariateFit fit_tau(std::span<const double> x, double c1 = 4.5, double c2 = 3.0,
                      bool consistent = true);

BoxplotFences adjusted_boxplot_fences(std::span<const double> x);
/// Fences for given quartiles and medcouple.
std::pair<double, double> adjusted_fences(double q1, double q3, double mc);

/// Dispatch by method with default settings.
UnivariateFit fit_univariate(std::span<const double> x, UnivariateMethod method);

}  // namespace robustats
