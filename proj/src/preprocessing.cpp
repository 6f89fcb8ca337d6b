// Copyright 2026 The robustats Authors
// SPDX-License-Identifier: Apache-2.0

#include "robustats/preprocessing.hpp"

#include "json.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>

namespace robustats {

bool CleanReport::empty() const {
    return non_numeric_cols.empty() && cols_rownumbers.empty() && cols_discrete.empty() &&
           cols_bad_scale.empty() && cols_missings.empty() && rows_missings.empty();
}

std::string CleanReport::to_json() const {
    nlohmann::ordered_json j;
    j["dropped_columns"] = {{"non_numeric_cols", non_numeric_cols},
                            {"cols_rownumbers", cols_rownumbers},
                            {"cols_discrete", cols_discrete},
                            {"cols_bad_scale", cols_bad_scale},
                            {"cols_missings", cols_missings}};
    j["dropped_rows"] = {{"rows_missings", rows_missings}};
    return j.dump();
}

namespace {

std::vector<double> observed(const Column& c) {
    std::vector<double> v;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!c.missing(i)) v.push_back(c.values[i]);
    }
    return v;
}

bool is_row_numbers(const Column& c) {
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c.missing(i) || c.values[i] != static_cast<double>(i)) return false;
    }
    return c.size() > 0;
}

}  // namespace

CleanResult clean_dataset(const Frame& frame, const CleanThresholds& t) {
    if (frame.n_rows() == 0 || frame.n_cols() == 0) throw InvalidArgument("empty frame");
    CleanReport rep;
    std::vector<std::string> keep;
    for (const auto& c : frame.columns()) {
        if (c.kind != ColumnKind::numeric) {
            rep.non_numeric_cols.push_back(c.name);
        } else if (is_row_numbers(c)) {
            rep.cols_rownumbers.push_back(c.name);
        } else {
            const auto v = observed(c);
            const std::set<double> distinct(v.begin(), v.end());
            if (static_cast<int>(distinct.size()) < t.min_unique) {
                rep.cols_discrete.push_back(c.name);
            } else if (mad(v, true) < t.scale_floor) {
                rep.cols_bad_scale.push_back(c.name);
            } else {
                keep.push_back(c.name);
            }
        }
    }
    const auto n = static_cast<double>(frame.n_rows());
    std::vector<std::string> cols;
    for (const auto& name : keep) {
        const Column& c = frame.column(name);
        const auto na = static_cast<double>(std::count(c.na.begin(), c.na.end(), 1));
        if (na / n >= t.frac_na_col) {
            rep.cols_missings.push_back(name);
        } else {
            cols.push_back(name);
        }
    }
    if (cols.empty()) throw Error("no analyzable columns remain");
    std::vector<Index> rows;
    for (Index i = 0; i < frame.n_rows(); ++i) {
        int na = 0;
        for (const auto& name : cols) na += frame.column(name).missing(static_cast<std::size_t>(i));
        if (static_cast<double>(na) / static_cast<double>(cols.size()) >= t.frac_na_row) {
            rep.rows_missings.push_back(frame.row_ids()[static_cast<std::size_t>(i)]);
        } else {
            rows.push_back(i);
        }
    }
    if (rows.empty()) throw Error("no analyzable rows remain");
    return {frame.select_columns(cols).select_rows(rows), std::move(rep)};
}

std::string to_string(PowerMethod m) {
    switch (m) {
    case PowerMethod::automatic: return "auto";
    case PowerMethod::boxcox: return "boxcox";
    case PowerMethod::yeojohnson: return "yeojohnson";
    }
    return "auto";
}

PowerMethod parse_power_method(const std::string& name) {
    if (name == "auto") return PowerMethod::automatic;
    if (name == "boxcox") return PowerMethod::boxcox;
    if (name == "yeojohnson") return PowerMethod::yeojohnson;
    throw InvalidArgument("unknown transform method: " + name);
}

double boxcox(double x, double lambda) {
    if (!(x > 0.0)) throw InvalidArgument("Box-Cox needs strictly positive data");
    if (lambda == 0.0) return std::log(x);
    return std::expm1(lambda * std::log(x)) / lambda;
}

double boxcox_inverse(double y, double lambda) {
    if (lambda == 0.0) return std::exp(y);
    const double a = 1.0 + lambda * y;
    if (!(a > 0.0)) throw InvalidArgument("value outside the range of the Box-Cox transform");
    return std::pow(a, 1.0 / lambda);
}

double yeojohnson(double x, double lambda) {
    if (x >= 0.0) {
        if (lambda == 0.0) return std::log1p(x);
        return std::expm1(lambda * std::log1p(x)) / lambda;
    }
    const double m = 2.0 - lambda;
    if (m == 0.0) return -std::log1p(-x);
    return -std::expm1(m * std::log1p(-x)) / m;
}

double yeojohnson_inverse(double y, double lambda) {
    if (y >= 0.0) {
        if (lambda == 0.0) return std::expm1(y);
        const double a = 1.0 + lambda * y;
        if (!(a > 0.0)) throw InvalidArgument("value outside the range of the Yeo-Johnson transform");
        return std::expm1(std::log(a) / lambda);
    }
    const double m = 2.0 - lambda;
    if (m == 0.0) return -std::expm1(-y);
    const double a = 1.0 - m * y;
    if (!(a > 0.0)) throw InvalidArgument("value outside the range of the Yeo-Johnson transform");
    return -std::expm1(std::log(a) / m);
}

namespace {

using Transform = double (*)(double, double);

struct Family {
    Transform forward;
    Transform inverse;
    bool boxcox;
};

constexpr Family kBoxCox{boxcox, boxcox_inverse, true};
constexpr Family kYeoJohnson{yeojohnson, yeojohnson_inverse, false};

// Point beyond which the rectified transform continues linearly, for sorted x.
double changepoint(const Family& f, const std::vector<double>& xs, double lambda) {
    constexpr double factor = 1.5;
    constexpr double eps = 1e-5;
    const auto n = xs.size();
    const auto q = static_cast<std::size_t>(std::ceil(static_cast<double>(n) / 4.0));
    const double q1 = xs[q - 1];
    const double q3 = xs[n - q];
    double cp = (lambda < 1.0 ? f.forward(q3, lambda) : f.forward(q1, lambda)) * factor;
    if (lambda < 0.0) {
        cp = std::min(cp, std::abs(1.0 / lambda) - eps);
    } else if (f.boxcox && lambda > 0.0) {
        cp = std::max(cp, -1.0 / lambda + eps);
    } else if (!f.boxcox && lambda > 2.0) {
        cp = std::max(cp, 1.0 / (2.0 - lambda) + eps);
    }
    cp = f.inverse(cp, lambda);
    return std::clamp(cp, xs.front(), xs.back());
}

// Transform that is linear beyond the changepoint, bounding the influence of the
// tail that the power would otherwise stretch.
std::vector<double> rectified(const Family& f, const std::vector<double>& xs, double lambda) {
    std::vector<double> out(xs.size());
    if (lambda == 1.0) {
        for (std::size_t i = 0; i < xs.size(); ++i) out[i] = f.boxcox ? xs[i] - 1.0 : xs[i];
        return out;
    }
    const double cp = changepoint(f, xs, lambda);
    const double tcp = f.forward(cp, lambda);
    const double slope = f.boxcox ? std::pow(cp, lambda - 1.0)
                                  : std::pow(1.0 + std::abs(cp), lambda > 1.0 ? 1.0 - lambda
                                                                               : lambda - 1.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        bool linear = lambda > 1.0 ? x < cp : x > cp;
        if (!f.boxcox) linear = linear && (lambda > 1.0 ? x < 0.0 : x >= 0.0);
        out[i] = linear ? tcp + (x - cp) * slope : f.forward(x, lambda);
    }
    return out;
}

// Huber one-step location and scale; a zero MAD falls back to unit scale.
std::pair<double, double> huber_location_scale(std::span<const double> x) {
    const double med = median(x);
    const double s = mad(x, true);
    const double safe = s < 1e-12 ? 1.0 : s;
    const LossFunction huber = LossFunction::huber(1.5);
    double wsum = 0.0, wx = 0.0, psi2 = 0.0;
    for (double v : x) {
        const double r = (v - med) / safe;
        const double w = huber.weight(r);
        wsum += w;
        wx += w * v;
        const double p = huber.psi(r);
        psi2 += p * p;
    }
    const double scale =
        s < 1e-12 ? 0.0
                  : s * std::sqrt(psi2 / (static_cast<double>(x.size()) * one_step_delta(huber)));
    return {wx / wsum, scale};
}

std::vector<double> huber_standardize(const std::vector<double>& v) {
    const auto [loc, scale] = huber_location_scale(v);
    const double s = scale == 0.0 ? 1.0 : scale;
    std::vector<double> z(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) z[i] = (v[i] - loc) / s;
    return z;
}

// Bisquare rho with c = 0.5 in its unnormalized polynomial form.
double small_bisquare_rho(double u) {
    constexpr double c = 0.5;
    if (std::abs(u) > c) return c * c / 6.0;
    const double u2 = u * u;
    return u2 / 2.0 - u2 * u2 / (2.0 * c * c) + u2 * u2 * u2 / (6.0 * c * c * c * c);
}

// Robust distance between the standardized transformed sample and normal quantiles.
double robust_normality(const Family& f, const std::vector<double>& xs, double lambda) {
    const auto z = huber_standardize(rectified(f, xs, lambda));
    const auto n = static_cast<double>(z.size());
    double crit = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double q = normal_quantile((static_cast<double>(i + 1) - 1.0 / 3.0) / (n + 1.0 / 3.0));
        crit += small_bisquare_rho(z[i] - q);
    }
    return crit;
}

template <class F>
double minimize_bounded(F&& f, double lo, double hi) {
    std::uintmax_t iters = 500;
    const auto r = boost::math::tools::brent_find_minima(f, lo, hi, 40, iters);
    return r.first;
}

double gaussian_ml_objective(const Family& f, const std::vector<double>& x, double lambda) {
    const auto n = static_cast<double>(x.size());
    double mu = 0.0;
    std::vector<double> t(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) mu += (t[i] = f.forward(x[i], lambda));
    mu /= n;
    double s2 = 0.0, jac = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s2 += (t[i] - mu) * (t[i] - mu);
        jac += f.boxcox ? std::log(x[i]) : std::copysign(std::log1p(std::abs(x[i])), x[i]);
    }
    s2 /= n;
    return n / 2.0 * std::log(s2) - (lambda - 1.0) * jac;
}

struct ReweightedFit {
    double lambda_raw, lambda, mu, sd;
};

double population_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double a : v) s += a;
    return s / static_cast<double>(v.size());
}

double population_sd(const std::vector<double>& v) {
    const double m = population_mean(v);
    double s = 0.0;
    for (double a : v) s += (a - m) * (a - m);
    return std::sqrt(s / static_cast<double>(v.size()));
}

ReweightedFit reweighted_fit(const Family& f, const std::vector<double>& xs, double lo, double hi,
                             const PowerTransformOptions& opt) {
    const double lambda_raw =
        minimize_bounded([&](double l) { return robust_normality(f, xs, l); }, lo, hi);
    auto zt = huber_standardize(rectified(f, xs, lambda_raw));
    const double cutoff = std::sqrt(chi2_quantile(opt.quantile, 1.0));
    std::vector<double> xt(xs.size());
    std::vector<std::uint8_t> w(xs.size());
    double lambda = lambda_raw;
    for (int step = 0; step < opt.nsteps; ++step) {
        std::vector<double> sub;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            w[i] = std::abs(zt[i]) <= cutoff;
            if (w[i]) sub.push_back(xs[i]);
        }
        lambda = minimize_bounded([&](double l) { return gaussian_ml_objective(f, sub, l); }, lo, hi);
        for (std::size_t i = 0; i < xs.size(); ++i) xt[i] = f.forward(xs[i], lambda);
        const double m = population_mean(xt);
        const double s = population_sd(xt);
        for (std::size_t i = 0; i < xs.size(); ++i) zt[i] = (xt[i] - m) / s;
    }
    std::vector<double> kept;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (w[i]) kept.push_back(xt[i]);
    }
    return {lambda_raw, lambda, population_mean(kept), population_sd(kept)};
}

}  // namespace

PowerTransform fit_power_transform(std::span<const double> x, PowerMethod method,
                                   const PowerTransformOptions& opt) {
    if (x.size() < 10) throw InvalidArgument("power transform needs at least 10 values");
    for (double v : x) {
        if (!std::isfinite(v)) throw InvalidArgument("power transform needs finite values");
    }
    std::vector<double> xs(x.begin(), x.end());
    std::sort(xs.begin(), xs.end());
    if (xs.front() == xs.back()) throw InvalidArgument("constant data");
    const bool positive = xs.front() > 0.0;
    if (method == PowerMethod::boxcox && !positive) {
        throw InvalidArgument("Box-Cox needs strictly positive data");
    }
    if (method == PowerMethod::automatic) method = positive ? PowerMethod::boxcox : PowerMethod::yeojohnson;
    const Family& f = method == PowerMethod::boxcox ? kBoxCox : kYeoJohnson;

    PowerTransform t;
    t.method = method;
    if (opt.standardize) {
        if (f.boxcox) {
            t.pre_scale = median(xs);
        } else {
            t.pre_location = median(xs);
            t.pre_scale = mad(xs, true);
            if (!(t.pre_scale > 0.0)) throw InvalidArgument("degenerate scale");
        }
        for (double& v : xs) v = (v - t.pre_location) / t.pre_scale;
    }

    double lo = opt.lambda_lower, hi = opt.lambda_upper;
    for (int widen = 0;; ++widen) {
        const ReweightedFit r = reweighted_fit(f, xs, lo, hi, opt);
        const double dlo = std::abs(r.lambda - lo), dhi = std::abs(r.lambda - hi);
        if (std::min(dlo, dhi) > 0.05 * (hi - lo) || widen == 8) {
            t.lambda_raw = r.lambda_raw;
            t.lambda_rew = r.lambda;
            if (opt.standardize) {
                t.post_location = r.mu;
                t.post_scale = r.sd;
            }
            break;
        }
        // Push the nearer bound twice as far from the identity parameter.
        if (dlo <= dhi) lo = 1.0 + (lo - 1.0) * 2.0;
        if (dhi <= dlo) hi = 1.0 + (hi - 1.0) * 2.0;
    }
    return t;
}

std::vector<double> apply_power_transform(const PowerTransform& t, std::span<const double> x,
                                          Direction direction) {
    const Family& f = t.method == PowerMethod::yeojohnson ? kYeoJohnson : kBoxCox;
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = x[i];
        if (std::isnan(v)) {
            out[i] = v;
        } else if (direction == Direction::forward) {
            out[i] = (f.forward((v - t.pre_location) / t.pre_scale, t.lambda_rew) - t.post_location) /
                     t.post_scale;
        } else {
            out[i] = f.inverse(v * t.post_scale + t.post_location, t.lambda_rew) * t.pre_scale +
                     t.pre_location;
        }
    }
    return out;
}

ScaleResult robust_scale(const Frame& frame, UnivariateMethod method, bool with_centering,
                         bool with_scaling) {
    ScaleResult res;
    res.data = frame;
    for (const auto& c : frame.columns()) {
        if (c.kind != ColumnKind::numeric) continue;
        const auto v = observed(c);
        if (v.empty()) throw InvalidArgument("column '" + c.name + "' has no observed values");
        UnivariateFit fit;
        try {
            fit = fit_univariate(v, method);
        } catch (const Error&) {
            throw Error("zero robust scale in column '" + c.name + "'");
        }
        if (with_scaling && !(fit.scale > 0.0)) {
            throw Error("zero robust scale in column '" + c.name + "'");
        }
        ColumnScale cs{c.name, with_centering ? fit.location : 0.0, with_scaling ? fit.scale : 1.0};
        std::vector<double> out(c.values.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = (c.values[i] - cs.location) / cs.scale;
        res.data.set_numeric_column(c.name, std::move(out));
        res.parameters.push_back(cs);
    }
    return res;
}

Frame robust_unscale(const Frame& frame, const std::vector<ColumnScale>& parameters) {
    Frame out = frame;
    for (const auto& cs : parameters) {
        const Column& c = frame.column(cs.column);
        std::vector<double> v(c.values.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = c.values[i] * cs.scale + cs.location;
        out.set_numeric_column(cs.column, std::move(v));
    }
    return out;
}

}  // namespace robustats
