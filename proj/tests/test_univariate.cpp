// Copyright 2026 The robustats Authors
// SPDX-License-Identifier: Apache-2.0

#include "checks.hpp"

#include "robustats/kernel.hpp"
#include "robustats/univariate.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

using namespace robustats;

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int k = 1; k < n; ++k) s += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

double phi(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::acos(-1.0)); }

double chi2_cdf_oracle(double x, double df) { return checks::gamma_p(df / 2.0, x / 2.0); }

std::vector<double> normal_sample(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    std::vector<double> x(n);
    for (auto& v : x) v = rng.normal();
    return x;
}

}  // namespace

TEST_SUITE("univariate") {

TEST_CASE("univariate MCD picks the tightest window") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto x = normal_sample(seed, 15 + seed);
        for (std::size_t i = 0; i < 3; ++i) x[i] += 10.0;
        const UnivariateFit fit = fit_univariate_mcd(x, 0.75, false, false);
        std::vector<double> s = x;
        std::sort(s.begin(), s.end());
        const auto h = static_cast<std::size_t>(std::floor(0.75 * static_cast<double>(x.size())));
        double best = 1e300, loc = 0.0, sd = 0.0;
        for (std::size_t a = 0; a + h <= s.size(); ++a) {
            double m = 0.0;
            for (std::size_t k = a; k < a + h; ++k) m += s[k];
            m /= static_cast<double>(h);
            double ss = 0.0;
            for (std::size_t k = a; k < a + h; ++k) ss += (s[k] - m) * (s[k] - m);
            if (ss < best) {
                best = ss;
                loc = m;
                sd = std::sqrt(ss / static_cast<double>(h - 1));
            }
        }
        CHECK(fit.raw_location == doctest::Approx(loc).epsilon(1e-12));
        CHECK(fit.raw_scale == doctest::Approx(sd).epsilon(1e-10));
        CHECK(*fit.h == static_cast<Index>(h));
    }
}

TEST_CASE("univariate MCD consistency factors") {
    const auto x = normal_sample(1, 40);
    const UnivariateFit raw = fit_univariate_mcd(x, 0.75, false, false);
    const UnivariateFit cons = fit_univariate_mcd(x, 0.75, false, true);
    const double frac = 30.0 / 40.0;
    const double oracle = frac / chi2_cdf_oracle(checks::chi2_quantile_bisection(frac, 1.0), 3.0);
    CHECK(cons.raw_scale / raw.raw_scale == doctest::Approx(std::sqrt(oracle)).epsilon(1e-10));
    // Frozen: factor at h / n = 0.75 and at the 0.975 reweighting fraction.
    CHECK(oracle == doctest::Approx(2.713527101776).epsilon(1e-9));
    const double rew = 0.975 / chi2_cdf_oracle(checks::chi2_quantile_bisection(0.975, 1.0), 3.0);
    CHECK(rew == doctest::Approx(1.174778641565).epsilon(1e-9));
    CHECK_THROWS_AS(fit_univariate_mcd(std::vector<double>{1, 2, 3}), InvalidArgument);
    const UnivariateFit flat = fit_univariate_mcd(std::vector<double>{1, 1, 1, 1, 1, 9});
    CHECK(flat.degenerate);
}

TEST_CASE("fast Qn matches the naive pairwise version") {
    const auto s = checks::qn_oracle(300, 21);
    CHECK(s.instances == 300);
    CHECK(s.max_rel_diff == 0.0);
    CHECK(fit_qn(std::vector<double>{1, 2}).scale == doctest::Approx(2.219));
}

TEST_CASE("tau scale against a direct evaluation") {
    auto x = normal_sample(3, 60);
    x[0] = 30.0;
    const UnivariateFit fit = fit_tau(x, 4.5, 3.0, false);
    const double med = median(x);
    const double s0 = mad(x, false);
    double wsum = 0.0, wx = 0.0;
    for (double v : x) {
        const double u = (v - med) / s0;
        const double w = std::abs(u) <= 4.5 ? std::pow(1.0 - u * u / 20.25, 2) : 0.0;
        wsum += w;
        wx += w * v;
    }
    const double loc = wx / wsum;
    double acc = 0.0;
    for (double v : x) acc += std::min(9.0, std::pow((v - loc) / s0, 2));
    CHECK(fit.location == doctest::Approx(loc).epsilon(1e-12));
    CHECK(fit.scale == doctest::Approx(s0 * std::sqrt(acc / 60.0)).epsilon(1e-12));
    // Normal-consistency constant E[min(b^2, Z^2)], b = 3 times the normal quartile.
    const double b = 3.0 * normal_quantile(0.75);
    const double e = (2.0 * normal_cdf(b) - 1.0) - 2.0 * b * phi(b) + 2.0 * b * b * (1.0 - normal_cdf(b));
    CHECK(e == doctest::Approx(0.924715392176).epsilon(1e-9));
    const UnivariateFit cons = fit_tau(x, 4.5, 3.0, true);
    CHECK(cons.scale == doctest::Approx(fit.scale / std::sqrt(e)).epsilon(1e-9));
}

TEST_CASE("one-step M delta by quadrature") {
    auto delta = [](const LossFunction& f) {
        return simpson([&](double z) { return std::pow(f.psi(z), 2) * phi(z); }, -12.0, 12.0, 40000);
    };
    const auto h25 = LossFunction::huber(2.5);
    const auto h15 = LossFunction::huber(1.5);
    const auto b3 = LossFunction::bisquare(3.0);
    CHECK(one_step_delta(h25) == doctest::Approx(delta(h25)).epsilon(1e-9));
    CHECK(one_step_delta(h15) == doctest::Approx(delta(h15)).epsilon(1e-9));
    CHECK(one_step_delta(b3) == doctest::Approx(delta(b3)).epsilon(1e-9));
    CHECK(one_step_delta(h25) == doctest::Approx(0.9775599835).epsilon(1e-9));
    CHECK(one_step_delta(h15) == doctest::Approx(0.7784652162).epsilon(1e-9));
    CHECK(one_step_delta(b3) == doctest::Approx(0.343432609239).epsilon(1e-9));
}

TEST_CASE("one-step M estimate follows its definition") {
    auto x = normal_sample(4, 50);
    x[1] = -25.0;
    const OneStepSpec spec = cellwise_one_step_spec();
    const UnivariateFit fit = fit_one_step_m(x, spec);
    const double mu0 = median(x), s0 = mad(x);
    double wsum = 0.0, wx = 0.0, p2 = 0.0;
    for (double v : x) {
        const double r = (v - mu0) / s0;
        const double w = std::abs(r) < 3.0 ? std::pow(1.0 - r * r / 9.0, 2) : 0.0;
        wsum += w;
        wx += w * v;
        p2 += std::pow(std::clamp(r, -2.5, 2.5), 2);
    }
    CHECK(fit.location == doctest::Approx(wx / wsum).epsilon(1e-12));
    CHECK(fit.scale == doctest::Approx(s0 * std::sqrt(p2 / (50.0 * 0.9775599835))).epsilon(1e-9));
}

TEST_CASE("adjusted boxplot fences") {
    std::vector<double> x;
    for (int i = 1; i <= 30; ++i) x.push_back(std::exp(0.1 * i));
    x.push_back(200.0);
    const BoxplotFences f = adjusted_boxplot_fences(x);
    const double q1 = quantile(x, 0.25), q3 = quantile(x, 0.75), mc = medcouple(x);
    CHECK(mc > 0.0);
    CHECK(f.lower == doctest::Approx(q1 - 1.5 * std::exp(-4.0 * mc) * (q3 - q1)));
    CHECK(f.upper == doctest::Approx(q3 + 1.5 * std::exp(3.0 * mc) * (q3 - q1)));
    CHECK(f.outlier_flags(30));
    CHECK(f.outlier_flags.head(30).count() == 0);
    const auto [lo, hi] = adjusted_fences(0.0, 1.0, -0.2);
    CHECK(lo == doctest::Approx(-1.5 * std::exp(0.6)));
    CHECK(hi == doctest::Approx(1.0 + 1.5 * std::exp(-0.8)));
    const auto [l0, h0] = adjusted_fences(0.0, 1.0, 0.0);
    CHECK(l0 == -1.5);
    CHECK(h0 == 2.5);
}

TEST_CASE("location and scale equivariance of the univariate estimators") {
    auto x = normal_sample(8, 80);
    x[3] = 12.0;
    for (auto m : {UnivariateMethod::umcd, UnivariateMethod::onestep_m, UnivariateMethod::qn,
                   UnivariateMethod::tau, UnivariateMethod::median_mad}) {
        const UnivariateFit a = fit_univariate(x, m);
        std::vector<double> y;
        for (double v : x) y.push_back(-3.0 * v + 7.0);
        const UnivariateFit b = fit_univariate(y, m);
        CHECK(b.scale == doctest::Approx(3.0 * a.scale).epsilon(1e-10));
        CHECK(b.location == doctest::Approx(-3.0 * a.location + 7.0).epsilon(1e-10));
        CHECK(parse_univariate_method(to_string(m)) == m);
    }
    CHECK_THROWS_AS(parse_univariate_method("bogus"), InvalidArgument);
}

}
