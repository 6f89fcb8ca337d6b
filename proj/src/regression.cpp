// Copyright 2026 The robustats Authors
// SPDX-License-Identifier: Apache-2.0

#include "robustats/regression.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace robustats {

std::string to_string(RegMethod m) {
    switch (m) {
    case RegMethod::lts: return "lts";
    case RegMethod::s: return "s";
    case RegMethod::mm: return "mm";
    }
    return "lts";
}

RegMethod parse_reg_method(const std::string& name) {
    if (name == "lts") return RegMethod::lts;
    if (name == "s") return RegMethod::s;
    if (name == "mm") return RegMethod::mm;
    throw InvalidArgument("unknown regression method: " + name);
}

std::string to_string(PointClass c) {
    switch (c) {
    case PointClass::regular: return "regular";
    case PointClass::vertical: return "vertical";
    case PointClass::good_leverage: return "good_leverage";
    case PointClass::bad_leverage: return "bad_leverage";
    }
    return "regular";
}

namespace {

Matrix design(const Matrix& X, bool intercept) {
    if (!intercept) return X;
    Matrix D(X.rows(), X.cols() + 1);
    D.col(0).setOnes();
    D.rightCols(X.cols()) = X;
    return D;
}

void check_inputs(const Matrix& X, const Vector& y) {
    if (X.rows() != y.size()) throw InvalidArgument("X and y have different row counts");
    if (!X.allFinite() || !y.allFinite()) throw InvalidArgument("data contains missing or infinite values");
}

// Least squares on the given rows; nullopt when the rows do not determine beta.
std::optional<Vector> least_squares(const Matrix& D, const Vector& y, const std::vector<Index>& rows) {
    const auto m = static_cast<Index>(rows.size());
    Matrix A(m, D.cols());
    Vector b(m);
    for (Index r = 0; r < m; ++r) {
        A.row(r) = D.row(rows[static_cast<std::size_t>(r)]);
        b(r) = y(rows[static_cast<std::size_t>(r)]);
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(A);
    qr.setThreshold(1e-10);
    if (qr.rank() < D.cols()) return std::nullopt;
    return Vector(qr.solve(b));
}

std::optional<Vector> weighted_least_squares(const Matrix& D, const Vector& y, const Vector& w) {
    const Vector sw = w.cwiseSqrt();
    const Matrix A = sw.asDiagonal() * D;
    Eigen::ColPivHouseholderQR<Matrix> qr(A);
    qr.setThreshold(1e-10);
    if (qr.rank() < D.cols()) return std::nullopt;
    return Vector(qr.solve(sw.cwiseProduct(y)));
}

// Elemental start: random rows of full rank, grown with further random rows if needed.
std::optional<Vector> elemental_fit(const Matrix& D, const Vector& y, std::uint64_t seed, Index limit) {
    const Index n = D.rows();
    Rng rng(seed);
    std::vector<Index> rows = sample_indices(rng, n, D.cols());
    auto beta = least_squares(D, y, rows);
    while (!beta && static_cast<Index>(rows.size()) < limit) {
        Index j;
        do {
            j = static_cast<Index>(rng.below(static_cast<std::size_t>(n)));
        } while (std::find(rows.begin(), rows.end(), j) != rows.end());
        rows.push_back(j);
        beta = least_squares(D, y, rows);
    }
    return beta;
}

std::vector<Index> order_by(const std::vector<double>& key) {
    std::vector<Index> order(key.size());
    for (std::size_t k = 0; k < key.size(); ++k) order[k] = static_cast<Index>(k);
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return key[static_cast<std::size_t>(a)] < key[static_cast<std::size_t>(b)]; });
    return order;
}

struct LtsCandidate {
    Vector beta;
    std::vector<Index> subset;
    double objective = std::numeric_limits<double>::infinity();
};

LtsCandidate lts_select(const Matrix& D, const Vector& y, const Vector& beta, Index h) {
    const Vector r = y - D * beta;
    std::vector<std::pair<double, Index>> order(static_cast<std::size_t>(r.size()));
    for (Index i = 0; i < r.size(); ++i) order[static_cast<std::size_t>(i)] = {r(i) * r(i), i};
    std::partial_sort(order.begin(), order.begin() + h, order.end());
    LtsCandidate c;
    c.beta = beta;
    c.objective = 0.0;
    for (Index i = 0; i < h; ++i) {
        c.objective += order[static_cast<std::size_t>(i)].first;
        c.subset.push_back(order[static_cast<std::size_t>(i)].second);
    }
    std::sort(c.subset.begin(), c.subset.end());
    return c;
}

// One C-step: refit on the current subset, then keep the h best-fitting rows.
LtsCandidate lts_c_step(const Matrix& D, const Vector& y, const LtsCandidate& c, Index h) {
    const auto beta = least_squares(D, y, c.subset);
    if (!beta) return c;
    return lts_select(D, y, *beta, h);
}

void unpack(const Vector& beta, bool intercept, Vector& coef, double& icpt) {
    if (intercept) {
        icpt = beta(0);
        coef = beta.tail(beta.size() - 1);
    } else {
        icpt = 0.0;
        coef = beta;
    }
}

void attach_x_model(const Matrix& X, bool wanted, RegressionFit& fit) {
    if (!wanted || X.cols() == 0) return;
    try {
        fit.x_model = fit_det_mcd(X);
    } catch (const std::exception& e) {
        fit.warnings.push_back(std::string("no predictor model: ") + e.what());
    }
}

}  // namespace

RegressionFit fit_fast_lts(const Matrix& X, const Vector& y, const LtsOptions& opt) {
    check_inputs(X, y);
    const Matrix D = design(X, opt.intercept);
    const Index n = D.rows();
    const Index p = D.cols();
    if (!(opt.alpha >= 0.5 && opt.alpha <= 1.0)) throw InvalidArgument("alpha must lie in [0.5, 1]");
    if (n <= 2 * p) throw InvalidArgument("LTS needs n > 2(p + 1)");
    const Index h = static_cast<Index>(std::floor(opt.alpha * static_cast<double>(n)));
    if (h < p + 1) throw InvalidArgument("h must be at least p + 1");

    const Index m = std::max<Index>(1, opt.n_initial_subsets);
    std::vector<LtsCandidate> starts(static_cast<std::size_t>(m));
    const bool parallel = opt.exec == Exec::parallel;
#pragma omp parallel for schedule(static) if (parallel)
    for (Index k = 0; k < m; ++k) {
        const auto beta = elemental_fit(D, y, derive_seed(opt.seed, static_cast<std::uint64_t>(k)), h);
        if (!beta) continue;
        LtsCandidate c = lts_select(D, y, *beta, h);
        for (int s = 0; s < opt.n_initial_c_steps; ++s) c = lts_c_step(D, y, c, h);
        starts[static_cast<std::size_t>(k)] = std::move(c);
    }
    std::vector<double> key;
    for (const auto& c : starts) key.push_back(c.objective);
    const auto order = order_by(key);
    if (!std::isfinite(key[static_cast<std::size_t>(order[0])])) throw Error("degenerate design");
    const Index kbest = std::min(m, std::max<Index>(1, opt.n_best_subsets));
    std::vector<LtsCandidate> finals(static_cast<std::size_t>(kbest));
#pragma omp parallel for schedule(static) if (parallel)
    for (Index k = 0; k < kbest; ++k) {
        LtsCandidate c = starts[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
        for (int it = 0; it < 1000 && std::isfinite(c.objective); ++it) {
            LtsCandidate next = lts_c_step(D, y, c, h);
            if (next.subset == c.subset || !(next.objective < c.objective)) {
                if (next.objective <= c.objective) c = std::move(next);
                break;
            }
            c = std::move(next);
        }
        finals[static_cast<std::size_t>(k)] = std::move(c);
    }
    const LtsCandidate* best = &finals[0];
    for (const auto& c : finals) {
        if (c.objective < best->objective) best = &c;
    }

    RegressionFit fit;
    fit.method = RegMethod::lts;
    fit.has_intercept = opt.intercept;
    fit.h = h;
    fit.alpha = opt.alpha;
    fit.seed = opt.seed;
    fit.objective = best->objective;
    unpack(best->beta, opt.intercept, fit.raw_coefficients, fit.raw_intercept);
    const double frac = static_cast<double>(h) / static_cast<double>(n);
    const double factor = h < n ? std::sqrt(frac / chi2_cdf(chi2_quantile(frac, 1.0), 3.0)) : 1.0;
    fit.raw_scale = factor * std::sqrt(best->objective / static_cast<double>(h));
    fit.coefficients = fit.raw_coefficients;
    fit.intercept = fit.raw_intercept;
    fit.residual_scale = fit.raw_scale;

    const Vector r = y - D * best->beta;
    const double yscale = std::max(mad(as_span(y), true), y.cwiseAbs().maxCoeff());
    if (!(fit.raw_scale > 1e-12 * (1.0 + yscale))) {
        fit.warnings.push_back("exact fit: h residuals vanish");
        fit.weights = r.array().abs() <= 1e-9 * (1.0 + yscale);
    } else if (opt.reweighting) {
        fit.weights = (r.array() / fit.raw_scale).abs() <= 2.5;
        std::vector<Index> keep;
        for (Index i = 0; i < n; ++i) {
            if (fit.weights(i)) keep.push_back(i);
        }
        if (const auto beta = least_squares(D, y, keep)) {
            const Vector rw = y - D * *beta;
            double ss = 0.0;
            for (Index i : keep) ss += rw(i) * rw(i);
            const double c2 = chi2_cdf(6.25, 1.0) / chi2_cdf(6.25, 3.0);
            fit.residual_scale = std::sqrt(ss / static_cast<double>(keep.size()) * c2);
            unpack(*beta, opt.intercept, fit.coefficients, fit.intercept);
        } else {
            fit.warnings.push_back("reweighted design is singular; raw fit returned");
        }
    }
    attach_x_model(X, opt.fit_x_model, fit);
    return fit;
}

double m_scale(const Vector& r, const LossFunction& loss, double b) {
    const Index n = r.size();
    if (n == 0) throw InvalidArgument("empty residual vector");
    const auto nz = static_cast<double>((r.array() != 0.0).count());
    if (nz / static_cast<double>(n) <= b) return 0.0;
    auto f = [&](double s) {
        double acc = 0.0;
        for (Index i = 0; i < n; ++i) acc += loss.rho(r(i) / s);
        return acc / static_cast<double>(n) - b;
    };
    const Vector ar = r.cwiseAbs();
    double s0 = median(as_span(ar)) / 0.6745;
    if (!(s0 > 0.0)) s0 = r.cwiseAbs().maxCoeff();
    double lo = s0, hi = s0;
    while (f(lo) < 0.0) lo *= 0.5;
    while (f(hi) > 0.0) hi *= 2.0;
    if (lo == hi) return lo;
    boost::uintmax_t iters = 200;
    const auto root = boost::math::tools::toms748_solve(
        f, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
    const double a = root.first, c = root.second;
    return std::abs(f(a)) <= std::abs(f(c)) ? a : c;
}

namespace {

struct SCandidate {
    Vector beta;
    double scale = std::numeric_limits<double>::infinity();
};

SCandidate s_step(const Matrix& D, const Vector& y, const SCandidate& c, const SOptions& o) {
    if (!(c.scale > 0.0)) return c;
    const Vector r = y - D * c.beta;
    Vector w(r.size());
    for (Index i = 0; i < r.size(); ++i) w(i) = o.loss.weight(r(i) / c.scale);
    const auto beta = weighted_least_squares(D, y, w);
    if (!beta) return c;
    SCandidate next;
    next.beta = *beta;
    next.scale = m_scale(y - D * *beta, o.loss, o.b);
    return next;
}

double m_objective(const Vector& r, double s, const LossFunction& loss) {
    double acc = 0.0;
    for (Index i = 0; i < r.size(); ++i) acc += loss.rho(r(i) / s);
    return acc;
}

}  // namespace

RegressionFit fit_s_regression(const Matrix& X, const Vector& y, const SOptions& o) {
    check_inputs(X, y);
    const Matrix D = design(X, o.intercept);
    const Index n = D.rows();
    const Index p = D.cols();
    if (n <= 2 * p) throw InvalidArgument("S-regression needs n > 2(p + 1)");
    const Index m = std::max<Index>(1, o.n_initial_subsets);
    std::vector<SCandidate> starts(static_cast<std::size_t>(m));
    const bool parallel = o.exec == Exec::parallel;
#pragma omp parallel for schedule(static) if (parallel)
    for (Index k = 0; k < m; ++k) {
        const auto beta = elemental_fit(D, y, derive_seed(o.seed, static_cast<std::uint64_t>(k)), n);
        if (!beta) continue;
        SCandidate c;
        c.beta = *beta;
        c.scale = m_scale(y - D * c.beta, o.loss, o.b);
        for (int s = 0; s < o.n_initial_steps; ++s) c = s_step(D, y, c, o);
        starts[static_cast<std::size_t>(k)] = std::move(c);
    }
    std::vector<double> key;
    for (const auto& c : starts) key.push_back(c.scale);
    const auto order = order_by(key);
    if (!std::isfinite(key[static_cast<std::size_t>(order[0])])) throw Error("degenerate design");
    const Index kbest = std::min(m, std::max<Index>(1, o.n_best));
    std::vector<SCandidate> finals(static_cast<std::size_t>(kbest));
    std::vector<std::uint8_t> done(static_cast<std::size_t>(kbest), 0);
    std::vector<int> iters(static_cast<std::size_t>(kbest), 0);
#pragma omp parallel for schedule(static) if (parallel)
    for (Index k = 0; k < kbest; ++k) {
        SCandidate c = starts[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
        int it = 0;
        bool converged = !(c.scale > 0.0);
        for (; it < o.max_iterations && !converged; ++it) {
            SCandidate next = s_step(D, y, c, o);
            converged = !(next.scale > 0.0) || std::abs(next.scale - c.scale) <= o.tolerance * c.scale;
            if (next.scale <= c.scale) c = std::move(next);
            else converged = true;
        }
        finals[static_cast<std::size_t>(k)] = std::move(c);
        done[static_cast<std::size_t>(k)] = converged;
        iters[static_cast<std::size_t>(k)] = it;
    }
    std::size_t bi = 0;
    for (std::size_t k = 1; k < finals.size(); ++k) {
        if (finals[k].scale < finals[bi].scale) bi = k;
    }
    RegressionFit fit;
    fit.method = RegMethod::s;
    fit.has_intercept = o.intercept;
    fit.seed = o.seed;
    fit.converged = done[bi] != 0;
    fit.iterations = iters[bi];
    unpack(finals[bi].beta, o.intercept, fit.coefficients, fit.intercept);
    fit.raw_coefficients = fit.coefficients;
    fit.raw_intercept = fit.intercept;
    fit.residual_scale = fit.raw_scale = fit.objective = finals[bi].scale;
    if (!fit.converged) fit.warnings.push_back("S iterations did not converge");
    if (!(fit.residual_scale > 0.0)) fit.warnings.push_back("exact fit: zero M-scale");
    attach_x_model(X, o.fit_x_model, fit);
    return fit;
}

double bisquare_efficiency_constant(double efficiency) {
    if (!(efficiency > 0.0 && efficiency < 1.0)) throw InvalidArgument("efficiency must lie in (0, 1)");
    using boost::math::quadrature::gauss_kronrod;
    auto eff = [](double c) {
        auto psi2 = [c](double u) {
            const double t = 1.0 - (u / c) * (u / c);
            return u * u * t * t * t * t * normal_pdf(u);
        };
        auto dpsi = [c](double u) {
            const double v = (u / c) * (u / c);
            return (1.0 - v) * (1.0 - 5.0 * v) * normal_pdf(u);
        };
        const double a = 2.0 * gauss_kronrod<double, 61>::integrate(dpsi, 0.0, c);
        const double b = 2.0 * gauss_kronrod<double, 61>::integrate(psi2, 0.0, c);
        return a * a / b;
    };
    boost::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(
        [&](double c) { return eff(c) - efficiency; }, 0.5, 50.0,
        boost::math::tools::eps_tolerance<double>(48), iters);
    return 0.5 * (r.first + r.second);
}

RegressionFit fit_mm_regression(const Matrix& X, const Vector& y, const MMOptions& o) {
    SOptions so = o.s;
    const bool want_x = so.fit_x_model;
    so.fit_x_model = false;
    const RegressionFit s = fit_s_regression(X, y, so);
    const Matrix D = design(X, so.intercept);
    const double c = std::abs(o.efficiency - 0.95) < 1e-12 ? 4.685 : bisquare_efficiency_constant(o.efficiency);
    const LossFunction loss = LossFunction::bisquare(c);
    const double scale = s.residual_scale;

    RegressionFit fit = s;
    fit.method = RegMethod::mm;
    fit.raw_coefficients = s.coefficients;
    fit.raw_intercept = s.intercept;
    fit.raw_scale = scale;
    Vector beta(D.cols());
    if (so.intercept) {
        beta(0) = s.intercept;
        beta.tail(D.cols() - 1) = s.coefficients;
    } else {
        beta = s.coefficients;
    }
    if (!(scale > 0.0)) {
        fit.objective = fit.start_objective = 0.0;
        attach_x_model(X, want_x, fit);
        return fit;
    }
    fit.start_objective = m_objective(y - D * beta, scale, loss);
    double obj = fit.start_objective;
    fit.converged = false;
    int it = 0;
    for (; it < o.max_iterations; ++it) {
        const Vector r = y - D * beta;
        Vector w(r.size());
        for (Index i = 0; i < r.size(); ++i) w(i) = std::max(loss.weight(r(i) / scale), 1e-12);
        const auto next = weighted_least_squares(D, y, w);
        if (!next) {
            fit.warnings.push_back("IRLS design became singular");
            break;
        }
        const double step = (*next - beta).cwiseAbs().maxCoeff();
        const double next_obj = m_objective(y - D * *next, scale, loss);
        if (next_obj > obj * (1.0 + 1e-12) + 1e-300) {
            fit.warnings.push_back("IRLS step increased the objective; stopped");
            break;
        }
        beta = *next;
        obj = next_obj;
        if (step <= o.tolerance * std::max(1.0, beta.cwiseAbs().maxCoeff())) {
            fit.converged = true;
            ++it;
            break;
        }
    }
    fit.iterations = it;
    fit.objective = obj;
    unpack(beta, so.intercept, fit.coefficients, fit.intercept);
    attach_x_model(X, want_x, fit);
    return fit;
}

Vector predict(const RegressionFit& fit, const Matrix& X) {
    if (X.cols() != fit.coefficients.size()) throw InvalidArgument("column count does not match the fit");
    return (X * fit.coefficients).array() + fit.intercept;
}

OutlierMapData outlier_map_data(const RegressionFit& fit, const Matrix& X, const Vector& y) {
    if (!fit.x_model) throw InvalidArgument("fit has no predictor model");
    if (X.rows() != y.size()) throw InvalidArgument("X and y have different row counts");
    if (!(fit.residual_scale > 0.0)) throw Error("zero residual scale");
    OutlierMapData om;
    om.std_residuals = (y - predict(fit, X)) / fit.residual_scale;
    om.x_distances = robust_distances(*fit.x_model, X);
    om.h_threshold = std::sqrt(chi2_quantile(0.975, static_cast<double>(X.cols())));
    om.classes.resize(static_cast<std::size_t>(y.size()));
    for (Index i = 0; i < y.size(); ++i) {
        const bool vert = std::abs(om.std_residuals(i)) > om.v_threshold;
        const bool lev = om.x_distances(i) > om.h_threshold;
        om.classes[static_cast<std::size_t>(i)] =
            lev ? (vert ? PointClass::bad_leverage : PointClass::good_leverage)
                : (vert ? PointClass::vertical : PointClass::regular);
    }
    return om;
}

}  // namespace robustats
