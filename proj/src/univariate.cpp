// Copyright 2026 The robustats Authors
// SPDX-License-Identifier: Apache-2.0

#include "robustats/univariate.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace robustats {

std::string to_string(UnivariateMethod m) {
    switch (m) {
    case UnivariateMethod::umcd: return "umcd";
    case UnivariateMethod::onestep_m: return "onestep_m";
    case UnivariateMethod::qn: return "qn";
    case UnivariateMethod::tau: return "tau";
    case UnivariateMethod::median_mad: return "median_mad";
    }
    return "unknown";
}

UnivariateMethod parse_univariate_method(const std::string& name) {
    if (name == "umcd") return UnivariateMethod::umcd;
    if (name == "onestep_m" || name == "onestep") return UnivariateMethod::onestep_m;
    if (name == "qn") return UnivariateMethod::qn;
    if (name == "tau") return UnivariateMethod::tau;
    if (name == "median_mad" || name == "mad") return UnivariateMethod::median_mad;
    throw InvalidArgument("unknown univariate method: " + name);
}

namespace {

double umcd_factor(double frac) {
    return frac / chi2_cdf(chi2_quantile(frac, 1.0), 3.0);
}

}  // namespace

UnivariateFit fit_univariate_mcd(std::span<const double> x, double alpha, bool reweight,
                                 bool consistent) {
    const auto n = static_cast<Index>(x.size());
    if (n < 4) throw InvalidArgument("univariate MCD needs at least 4 points");
    if (!(alpha >= 0.5 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in [0.5, 1]");
    const auto h = static_cast<Index>(std::floor(alpha * static_cast<double>(n)));
    if (h < 2) throw InvalidArgument("h must be at least 2");

    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    // centre before accumulating so the running sums stay well conditioned
    const double shift = s[static_cast<std::size_t>(n / 2)];
    double sum = 0.0, sq = 0.0;
    for (Index i = 0; i < h; ++i) {
        const double v = s[static_cast<std::size_t>(i)] - shift;
        sum += v;
        sq += v * v;
    }
    const double hd = static_cast<double>(h);
    double best_ss = sq - sum * sum / hd;
    Index best = 0;
    for (Index start = 1; start + h <= n; ++start) {
        const double out = s[static_cast<std::size_t>(start - 1)] - shift;
        const double in = s[static_cast<std::size_t>(start + h - 1)] - shift;
        sum += in - out;
        sq += in * in - out * out;
        const double ss = sq - sum * sum / hd;
        if (ss < best_ss) {
            best_ss = ss;
            best = start;
        }
    }
    const std::span<const double> window(s.data() + best, static_cast<std::size_t>(h));
    UnivariateFit fit;
    fit.method = UnivariateMethod::umcd;
    fit.h = h;
    fit.raw_location = mean(window);
    fit.raw_scale = stddev(window, 1);
    fit.consistency_applied = consistent;
    if (consistent) fit.raw_scale *= std::sqrt(umcd_factor(hd / static_cast<double>(n)));
    fit.location = fit.raw_location;
    fit.scale = fit.raw_scale;
    if (fit.raw_scale == 0.0) {
        fit.degenerate = true;
        return fit;
    }
    if (!reweight) return fit;

    const double cut = std::sqrt(chi2_quantile(0.975, 1.0));
    std::vector<double> kept;
    for (double v : x) {
        if (std::abs(v - fit.raw_location) / fit.raw_scale <= cut) kept.push_back(v);
    }
    if (kept.size() < 2) return fit;
    fit.location = mean(kept);
    fit.scale = stddev(kept, 1);
    if (consistent) fit.scale *= std::sqrt(umcd_factor(0.975));
    return fit;
}

double one_step_delta(const LossFunction& scale_loss) {
    using boost::math::quadrature::gauss_kronrod;
    const double t = scale_loss.tuning;
    if (scale_loss.kind == LossFunction::Kind::huber) {
        // E[min(Z^2, b^2)] = F_chi2_3(b^2) + 2 b^2 (1 - Phi(b))
        return chi2_cdf(t * t, 3.0) + 2.0 * t * t * (1.0 - normal_cdf(t));
    }
    const auto f = [&](double z) {
        const double p = scale_loss.psi(z);
        return p * p * normal_pdf(z);
    };
    const double inner = gauss_kronrod<double, 61>::integrate(f, 0.0, t, 15, 1e-14);
    const double outer = gauss_kronrod<double, 61>::integrate(f, t, 40.0, 15, 1e-14);
    return 2.0 * (inner + outer);
}

OneStepSpec cellwise_one_step_spec() {
    return {LossFunction::bisquare(3.0), LossFunction::huber(2.5)};
}

UnivariateFit fit_one_step_m(std::span<const double> x, const OneStepSpec& spec) {
    if (x.size() < 2) throw InvalidArgument("one-step M needs at least 2 points");
    const double mu0 = median(x);
    const double s0 = mad(x, true);
    if (!(s0 > 0.0)) throw Error("degenerate scale");
    double wsum = 0.0, wx = 0.0, psi2 = 0.0;
    for (double v : x) {
        const double r = (v - mu0) / s0;
        const double w = spec.location_loss.weight(r);
        wsum += w;
        wx += w * v;
        const double p = spec.scale_loss.psi(r);
        psi2 += p * p;
    }
    const double delta = one_step_delta(spec.scale_loss);
    UnivariateFit fit;
    fit.method = UnivariateMethod::onestep_m;
    fit.raw_location = mu0;
    fit.raw_scale = s0;
    fit.location = wx / wsum;
    fit.scale = s0 * std::sqrt(psi2 / (static_cast<double>(x.size()) * delta));
    fit.consistency_applied = true;
    return fit;
}

namespace {

// k-th smallest (1-based) of y[i] - y[j], i > j, for sorted y. Weighted-median
// bisection over the implicit matrix of differences, so O(n log n) overall.
double kth_pairwise_gap(const std::vector<double>& y, std::int64_t k) {
    const auto n = static_cast<std::int64_t>(y.size());
    std::vector<std::int64_t> left(n), right(n), p(n), q(n);
    std::vector<double> work, weight;
    const std::int64_t h = n / 2 + 1;
    for (std::int64_t i = 0; i < n; ++i) {
        left[i] = n - i + 1;
        right[i] = (i <= h) ? n : n - (i - h);
    }
    std::int64_t nl = n * (n + 1) / 2;
    std::int64_t nr = n * n;
    const std::int64_t knew = k + nl;
    double trial = 0.0;
    bool found = false;
    while (!found && nr - nl > n) {
        work.clear();
        weight.clear();
        for (std::int64_t i = 1; i < n; ++i) {
            if (left[i] <= right[i]) {
                const std::int64_t w = right[i] - left[i] + 1;
                const std::int64_t jh = left[i] + w / 2;
                work.push_back(y[i] - y[n - jh]);
                weight.push_back(static_cast<double>(w));
            }
        }
        trial = weighted_median(work, weight);
        std::int64_t j = 0;
        for (std::int64_t i = n - 1; i >= 0; --i) {
            while (j < n && (y[i] - y[n - j - 1]) < trial) ++j;
            p[i] = j;
        }
        j = n + 1;
        for (std::int64_t i = 0; i < n; ++i) {
            while ((y[i] - y[n - j + 1]) > trial) --j;
            q[i] = j;
        }
        std::int64_t sump = 0, sumq = 0;
        for (std::int64_t i = 0; i < n; ++i) {
            sump += p[i];
            sumq += q[i] - 1;
        }
        if (knew <= sump) {
            right = p;
            nr = sump;
        } else if (knew > sumq) {
            left = q;
            nl = sumq;
        } else {
            found = true;
        }
    }
    if (found) return trial;
    work.clear();
    for (std::int64_t i = 1; i < n; ++i) {
        for (std::int64_t jj = left[i]; jj <= right[i]; ++jj) work.push_back(y[i] - y[n - jj]);
    }
    const auto pos = static_cast<std::ptrdiff_t>(knew - nl - 1);
    std::nth_element(work.begin(), work.begin() + pos, work.end());
    return work[static_cast<std::size_t>(pos)];
}

}  // namespace

UnivariateFit fit_qn(std::span<const double> x) {
    const auto n = static_cast<std::int64_t>(x.size());
    if (n < 2) throw InvalidArgument("Qn needs at least 2 points");
    std::vector<double> y(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const std::int64_t h = n / 2 + 1;
    const std::int64_t k = h * (h - 1) / 2;
    UnivariateFit fit;
    fit.method = UnivariateMethod::qn;
    fit.location = median(x);
    fit.scale = 2.219 * kth_pairwise_gap(y, k);
    fit.raw_location = fit.location;
    fit.raw_scale = fit.scale;
    fit.consistency_applied = true;
    fit.degenerate = fit.scale == 0.0;
    return fit;
}

UnivariateFit fit_tau(std::span<const double> x, double c1, double c2, bool consistent) {
    if (x.size() < 2) throw InvalidArgument("tau needs at least 2 points");
    const double med = median(x);
    const double s0 = mad(x, false);
    if (!(s0 > 0.0)) throw Error("degenerate scale");
    double wsum = 0.0, wx = 0.0;
    for (double v : x) {
        const double u = (v - med) / s0;
        if (std::abs(u) > c1) continue;
        const double t = 1.0 - (u / c1) * (u / c1);
        wsum += t * t;
        wx += t * t * v;
    }
    const double loc = wx / wsum;
    double rho = 0.0;
    for (double v : x) {
        const double u = (v - loc) / s0;
        rho += std::min(c2 * c2, u * u);
    }
    double scale = std::sqrt(s0 * s0 / static_cast<double>(x.size()) * rho);
    if (consistent) {
        // E[min(b^2, Z^2)] with b = c2 * Phi^-1(3/4), since the raw MAD estimates Phi^-1(3/4) sigma
        const double b = c2 * normal_quantile(0.75);
        const double corr =
            2.0 * ((1.0 - b * b) * normal_cdf(b) - b * normal_pdf(b) + b * b) - 1.0;
        scale /= std::sqrt(corr);
    }
    UnivariateFit fit;
    fit.method = UnivariateMethod::tau;
    fit.location = loc;
    fit.scale = scale;
    fit.raw_location = med;
    fit.raw_scale = s0;
    fit.consistency_applied = consistent;
    return fit;
}

std::pair<double, double> adjusted_fences(double q1, double q3, double mc) {
    const double iqr = q3 - q1;
    if (mc >= 0.0) {
        return {q1 - 1.5 * std::exp(-4.0 * mc) * iqr, q3 + 1.5 * std::exp(3.0 * mc) * iqr};
    }
    return {q1 - 1.5 * std::exp(-3.0 * mc) * iqr, q3 + 1.5 * std::exp(4.0 * mc) * iqr};
}

BoxplotFences adjusted_boxplot_fences(std::span<const double> x) {
    if (x.size() < 5) throw InvalidArgument("adjusted boxplot needs at least 5 points");
    BoxplotFences f;
    f.q1 = quantile(x, 0.25);
    f.q3 = quantile(x, 0.75);
    f.iqr = f.q3 - f.q1;
    f.mc = medcouple(x);
    std::tie(f.lower, f.upper) = adjusted_fences(f.q1, f.q3, f.mc);
    f.outlier_flags.resize(static_cast<Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
        f.outlier_flags(static_cast<Index>(i)) = x[i] < f.lower || x[i] > f.upper;
    }
    return f;
}

UnivariateFit fit_univariate(std::span<const double> x, UnivariateMethod method) {
    switch (method) {
    case UnivariateMethod::umcd: return fit_univariate_mcd(x);
    case UnivariateMethod::onestep_m: return fit_one_step_m(x);
    case UnivariateMethod::qn: return fit_qn(x);
    case UnivariateMethod::tau: return fit_tau(x);
    case UnivariateMethod::median_mad: {
        UnivariateFit fit;
        fit.method = method;
        fit.location = fit.raw_location = median(x);
        fit.scale = fit.raw_scale = mad(x, true);
        fit.consistency_applied = true;
        fit.degenerate = fit.scale == 0.0;
        return fit;
    }
    }
    throw InvalidArgument("unknown univariate method");
}

}  // namespace robustats
