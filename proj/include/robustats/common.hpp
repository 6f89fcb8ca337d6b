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

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace robustats {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;
using BoolVector = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// Raised when an estimator cannot produce a result on the given data
/// (degenerate scale, singular scatter, exact fit, ...).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when arguments violate an operation's preconditions.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Execution policy for kernels that have both a serial reference path and
/// an OpenMP path. Both paths give bitwise identical results.
enum class Exec { serial, parallel };

/// Derives an independent 64-bit seed for stream `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Small deterministic generator. Integer draws use rejection sampling on the raw
/// 64-bit engine output so that sequences do not depend on the standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform integer in [0, n).
    std::size_t below(std::size_t n);
    /// Uniform real in [0, 1).
    double uniform();
    double normal();

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// k distinct indices drawn uniformly from [0, n), in draw order.
std::vector<Index> sample_indices(Rng& rng, Index n, Index k);

inline std::span<const double> as_span(const Vector& v) {
    return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace robustats
