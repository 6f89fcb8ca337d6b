// Copyright 2026 The robustats Authors
// SPDX-License-Identifier: Apache-2.0

#include "checks.hpp"

#include "robustats/kernel.hpp"

#include "doctest.h"

#include <cmath>
#include <vector>

using namespace robustats;
using robustats::checks::normal_matrix;

TEST_SUITE("kernel") {

TEST_CASE("median, mad and quantile on small samples") {
    const std::vector<double> odd = {5, 1, 3, 2, 4};
    const std::vector<double> even = {4, 1, 3, 2};
    CHECK(median(odd) == 3.0);
    CHECK(median(even) == 2.5);
    CHECK(mad(odd, false) == 1.0);
    CHECK(mad(odd) == doctest::Approx(kMadConsistency));
    CHECK(quantile(odd, 0.25) == 2.0);
    CHECK(quantile(even, 0.5) == 2.5);
    CHECK(quantile(even, 1.0) == 4.0);
    CHECK_THROWS_AS(quantile(odd, 1.5), InvalidArgument);
    CHECK_THROWS_AS(median(std::vector<double>{}), InvalidArgument);
}

TEST_CASE("weighted median is the lower weighted median") {
    const std::vector<double> x = {1, 2, 3, 4};
    CHECK(weighted_median(x, std::vector<double>{1, 1, 1, 1}) == 2.0);
    CHECK(weighted_median(x, std::vector<double>{1, 1, 1, 5}) == 4.0);
    CHECK(weighted_median(x, std::vector<double>{3, 1, 1, 1}) == 1.0);
    CHECK_THROWS_AS(weighted_median(x, std::vector<double>{1, 0, 1, 1}), InvalidArgument);
}

TEST_CASE("medcouple matches the brute-force kernel median") {
    const auto s = checks::medcouple_oracle(200, 11);
    CHECK(s.instances == 200);
    CHECK(s.max_rel_diff <= 1e-12);
    // Symmetric samples have medcouple 0; reflection flips its sign.
    CHECK(medcouple(std::vector<double>{1, 2, 3, 4, 5}) == doctest::Approx(0.0));
    const std::vector<double> skew = {1, 2, 3, 4, 10, 20};
    std::vector<double> reflected;
    for (double v : skew) reflected.push_back(-v);
    CHECK(medcouple(skew) == doctest::Approx(-medcouple(reflected)));
    CHECK(medcouple(skew) > 0.0);
    CHECK_THROWS_AS(medcouple(std::vector<double>{2, 2, 2}), Error);
}

TEST_CASE("chi-square quantiles match an independent bisection") {
    for (double df : {1.0, 2.0, 3.0, 5.0, 11.0, 30.0}) {
        for (double p : {0.01, 0.25, 0.5, 0.75, 0.975, 0.99}) {
            const double oracle = checks::chi2_quantile_bisection(p, df);
            CHECK(chi2_quantile(p, df) == doctest::Approx(oracle).epsilon(1e-10));
            CHECK(chi2_cdf(oracle, df) == doctest::Approx(p).epsilon(1e-10));
        }
    }
    // Frozen reference values.
    CHECK(chi2_quantile(0.975, 2.0) == doctest::Approx(7.377758908227871).epsilon(1e-12));
    CHECK(chi2_quantile(0.5, 1.0) == doctest::Approx(0.454936423119572).epsilon(1e-12));
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
}

TEST_CASE("mahalanobis distances agree with an explicit inverse") {
    Rng rng(3);
    const Matrix X = normal_matrix(rng, 20, 3);
    Matrix S(3, 3);
    S << 2.0, 0.3, 0.1, 0.3, 1.0, -0.2, 0.1, -0.2, 0.5;
    const Vector mu = Vector::LinSpaced(3, -1.0, 1.0);
    const Vector d = mahalanobis_distances(X, mu, S);
    const Matrix P = S.inverse();
    for (Index i = 0; i < X.rows(); ++i) {
        const Vector z = X.row(i).transpose() - mu;
        CHECK(d(i) == doctest::Approx(std::sqrt(z.dot(P * z))).epsilon(1e-12));
    }
}

TEST_CASE("l1median matches a refined grid search") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        Rng rng(seed);
        Matrix X = normal_matrix(rng, 25, 2);
        X.topRows(4).array() += 10.0;
        const Vector m = l1median(X);
        const Vector g = checks::l1median_grid(X);
        CHECK((m - g).norm() < 1e-5);
    }
    // The spatial median of a symmetric cross is its centre.
    Matrix cross(4, 2);
    cross << 1, 0, -1, 0, 0, 1, 0, -1;
    CHECK(l1median(cross).norm() < 1e-8);
}

TEST_CASE("Stahel-Donoho outlyingness matches an angular grid") {
    Rng rng(5);
    Matrix X = normal_matrix(rng, 40, 2);
    X.topRows(3).array() += 6.0;
    const int angles = 720;
    Matrix A(2, angles);
    const double pi = std::acos(-1.0);
    for (int k = 0; k < angles; ++k) A.col(k) << std::cos(pi * k / angles), std::sin(pi * k / angles);
    const Vector grid = checks::sdo_angular_grid(X, angles);
    CHECK(checks::rel_diff(stahel_donoho_directions(X, A), grid) < 1e-12);
    // Sampled directions cannot exceed the supremum over all directions.
    DirectionSampler sampler;
    sampler.seed = 9;
    const Vector sampled = stahel_donoho(X, sampler);
    const Vector fine = checks::sdo_angular_grid(X, 20000);
    CHECK((sampled.array() <= fine.array() * (1.0 + 1e-3) + 1e-12).all());
    CHECK(sampled.head(3).minCoeff() > sampled.tail(37).maxCoeff());
}

TEST_CASE("direction sampler is seeded and normalized") {
    Rng rng(6);
    const Matrix X = normal_matrix(rng, 30, 3);
    DirectionSampler s;
    s.seed = 4;
    const Matrix A = s.directions(X);
    CHECK(A.cols() == default_direction_count(3));
    CHECK((A.colwise().norm().array() - 1.0).abs().maxCoeff() < 1e-12);
    CHECK(checks::bitwise_equal(A, s.directions(X)));
    CHECK(default_direction_count(20) == 2500);
}

TEST_CASE("loss functions") {
    const auto h = LossFunction::huber(1.5);
    CHECK(h.rho(1.0) == 0.5);
    CHECK(h.rho(3.0) == doctest::Approx(1.5 * 3.0 - 0.5 * 2.25));
    CHECK(h.psi(-4.0) == -1.5);
    CHECK(h.weight(3.0) == doctest::Approx(0.5));
    CHECK(h.weight(0.0) == 1.0);
    const auto b = LossFunction::bisquare(4.685);
    CHECK(b.rho(0.0) == 0.0);
    CHECK(b.rho(5.0) == 1.0);
    CHECK(b.psi(5.0) == 0.0);
    CHECK(b.weight(0.0) == 1.0);
    // psi is the derivative of rho up to the normalization 6 / c^2.
    for (double u : {-3.0, -0.7, 0.2, 1.9, 4.0}) {
        const double e = 1e-6;
        const double dr = (b.rho(u + e) - b.rho(u - e)) / (2 * e);
        CHECK(dr * 4.685 * 4.685 / 6.0 == doctest::Approx(b.psi(u)).epsilon(1e-6));
        CHECK(loss_eval(b, u, LossEval::weight) == doctest::Approx(b.psi(u) / u));
    }
}

TEST_CASE("propagation fraction") {
    CHECK(propagation_fraction(0.0, 5) == 0.0);
    CHECK(propagation_fraction(0.1, 1) == doctest::Approx(0.1));
    CHECK(propagation_fraction(0.01, 20) == doctest::Approx(1.0 - std::pow(0.99, 20)));
    CHECK_THROWS_AS(propagation_fraction(1.5, 2), InvalidArgument);
}

TEST_CASE("seed derivation and sampling") {
    CHECK(derive_seed(1, 2) == derive_seed(1, 2));
    CHECK(derive_seed(1, 2) != derive_seed(1, 3));
    Rng rng(7);
    const auto idx = sample_indices(rng, 10, 4);
    CHECK(idx.size() == 4);
    for (std::size_t a = 0; a < idx.size(); ++a) {
        CHECK(idx[a] >= 0);
        CHECK(idx[a] < 10);
        for (std::size_t b = a + 1; b < idx.size(); ++b) CHECK(idx[a] != idx[b]);
    }
}

}
