// Copyright 2026 The robustats Authors
// SPDX-License-Identifier: Apache-2.0

// Serial reference path vs OpenMP path for the parallel kernels.

#include "robustats/cellwise.hpp"
#include "robustats/covariance.hpp"
#include "robustats/kernel.hpp"
#include "robustats/pca.hpp"
#include "robustats/regression.hpp"

#include <benchmark/benchmark.h>

using namespace robustats;

namespace {

Matrix gaussian(Index n, Index p, std::uint64_t seed) {
    Rng rng(seed);
    Matrix X(n, p);
    for (Index j = 0; j < p; ++j) {
        for (Index i = 0; i < n; ++i) X(i, j) = rng.normal();
    }
    X.topRows(n / 10).array() += 6.0;
    return X;
}

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

void BM_FastMcd(benchmark::State& state) {
    const Matrix X = gaussian(1000, 5, 1);
    FastMcdOptions o;
    o.exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(fit_fast_mcd(X, o).objective);
}

void BM_FastLts(benchmark::State& state) {
    const Matrix X = gaussian(1000, 4, 2);
    const Vector y = X.rowwise().sum();
    LtsOptions o;
    o.exec = exec_of(state);
    o.fit_x_model = false;
    for (auto _ : state) benchmark::DoNotOptimize(fit_fast_lts(X, y, o).objective);
}

void BM_StahelDonoho(benchmark::State& state) {
    const Matrix X = gaussian(2000, 6, 3);
    const DirectionSampler d;
    for (auto _ : state) benchmark::DoNotOptimize(stahel_donoho(X, d, exec_of(state)).sum());
}

void BM_Robpca(benchmark::State& state) {
    const Matrix X = gaussian(1000, 10, 4);
    RobpcaOptions o;
    o.exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(fit_robpca(X, o).eigenvalues.sum());
}

void BM_Ddc(benchmark::State& state) {
    Matrix X = gaussian(2000, 10, 5);
    X.col(1) += X.col(0);
    const Frame f = Frame::from_matrix(X);
    DdcOptions o;
    o.exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(fit_ddc(f, o).cutoff);
}

}  // namespace

BENCHMARK(BM_FastMcd)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FastLts)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StahelDonoho)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Robpca)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Ddc)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
