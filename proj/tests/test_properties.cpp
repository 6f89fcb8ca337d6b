// Copyright 2026 The robustats Authors
// SPDX-License-Identifier: Apache-2.0

// Smaller versions of the acceptance property suites.

#include "checks.hpp"

#include "doctest.h"

#include <cmath>

using namespace robustats;
using namespace robustats::checks;

TEST_SUITE("properties") {

TEST_CASE("exact oracles") {
    CHECK(mcd_oracle(20, 101).max_rel_diff < 1e-9);
    CHECK(lts_oracle(20, 101).max_rel_diff < 1e-9);
    CHECK(qn_oracle(100, 101).max_rel_diff == 0.0);
    CHECK(medcouple_oracle(100, 101).max_rel_diff < 1e-12);
}

TEST_CASE("equivariance") {
    for (const char* m : {"fastmcd", "detmcd", "ogk", "kendall", "wrapping"}) {
        const EquivarianceSummary s = covariance_equivariance(m, 10, 102);
        CAPTURE(s.estimator);
        CHECK(s.transforms == 10);
        CHECK(s.max_error < 1e-6);
    }
    for (const char* m : {"lts", "s", "mm"}) {
        const EquivarianceSummary s = regression_equivariance(m, 10, 102);
        CAPTURE(s.estimator);
        CHECK(s.max_error < 1e-6);
    }
    for (const char* m : {"robpca", "spherical"}) {
        const EquivarianceSummary s = pca_equivariance(m, 10, 102);
        CAPTURE(s.estimator);
        CHECK(s.max_error < 1e-6);
    }
}

TEST_CASE("scale consistency at the normal") {
    for (const char* e : {"umcd", "qn", "tau"}) {
        const ConsistencySummary s = scale_consistency(e, 1000, 50, 103);
        CAPTURE(s.estimator);
        CHECK(std::abs(s.mean_scale - 1.0) < 0.03);
    }
    const ConsistencySummary lts = scale_consistency("lts", 1000, 5, 103);
    CHECK(std::abs(lts.mean_scale - 1.0) < 0.05);
    const ConsistencySummary s = scale_consistency("s", 1000, 5, 103);
    CHECK(std::abs(s.mean_scale - 1.0) < 0.05);
    CHECK(s.max_constraint_residual < 1e-6);
}

TEST_CASE("serial and parallel paths agree bitwise") {
    for (const char* e : {"stahel_donoho", "fastmcd", "detmcd", "lts", "s", "mm", "robpca", "ddc", "cellmcd"}) {
        CAPTURE(e);
        CHECK(thread_invariance(e, 104).identical);
    }
    CHECK(detmcd_repeatable(104));
}

}
