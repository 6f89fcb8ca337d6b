// Copyright 2026 The robustats Authors
// SPDX-License-Identifier: Apache-2.0

#include "robustats/covariance.hpp"

#include "robustats/kernel.hpp"
#include "robustats/univariate.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace robustats {

std::string to_string(CovMethod m) {
    switch (m) {
    case CovMethod::fastmcd: return "fastmcd";
    case CovMethod::detmcd: return "detmcd";
    case CovMethod::ogk: return "ogk";
    case CovMethod::kendall: return "kendall";
    case CovMethod::wrapping: return "wrapping";
    }
    return "fastmcd";
}

CovMethod parse_cov_method(const std::string& name) {
    if (name == "fastmcd") return CovMethod::fastmcd;
    if (name == "detmcd") return CovMethod::detmcd;
    if (name == "ogk") return CovMethod::ogk;
    if (name == "kendall") return CovMethod::kendall;
    if (name == "wrapping") return CovMethod::wrapping;
    throw InvalidArgument("unknown covariance method: " + name);
}

Index mcd_h(Index n, Index p, double alpha) {
    if (!(alpha >= 0.5 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in [0.5, 1]");
    const auto a = static_cast<Index>(std::floor(alpha * static_cast<double>(n)));
    return std::min(n, std::max(a, (n + p + 1) / 2));
}

namespace {

std::span<const double> col_span(const Matrix& M, Index j) {
    return {M.col(j).data(), static_cast<std::size_t>(M.rows())};
}

struct Candidate {
    std::vector<Index> idx;
    Vector mu;
    Matrix cov;
    double det = 0.0;
    bool singular = true;
};

Candidate subset_fit(const Matrix& X, std::vector<Index> idx) {
    std::sort(idx.begin(), idx.end());
    const Index p = X.cols();
    const auto m = static_cast<Index>(idx.size());
    Matrix S(m, p);
    for (Index r = 0; r < m; ++r) S.row(r) = X.row(idx[static_cast<std::size_t>(r)]);
    Candidate c;
    c.idx = std::move(idx);
    c.mu = S.colwise().mean().transpose();
    S.rowwise() -= c.mu.transpose();
    c.cov = (S.transpose() * S) / static_cast<double>(m - 1);
    Eigen::LLT<Matrix> llt(c.cov);
    if (llt.info() == Eigen::Success) {
        const Vector d = llt.matrixLLT().diagonal();
        if (d.minCoeff() > 1e-10 * d.maxCoeff()) {
            c.singular = false;
            c.det = d.array().square().prod();
        }
    }
    return c;
}

// Squared distances; singular scatters are floored at 1e-12 trace / p.
Vector squared_distances(const Matrix& X, const Vector& mu, const Matrix& cov, bool singular) {
    Matrix C = (X.rowwise() - mu.transpose()).transpose();
    if (!singular) {
        Eigen::LLT<Matrix> llt(cov);
        llt.matrixL().solveInPlace(C);
        return C.colwise().squaredNorm().transpose();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
    const double floor = std::max(1e-12 * cov.trace() / static_cast<double>(cov.rows()),
                                  std::numeric_limits<double>::min());
    const Vector ev = es.eigenvalues().cwiseMax(floor);
    const Matrix R = es.eigenvectors().transpose() * C;
    return (ev.cwiseInverse().asDiagonal() * R.cwiseAbs2()).colwise().sum().transpose();
}

std::vector<Index> smallest(const Vector& d, Index h) {
    std::vector<std::pair<double, Index>> order(static_cast<std::size_t>(d.size()));
    for (Index i = 0; i < d.size(); ++i) order[static_cast<std::size_t>(i)] = {d(i), i};
    std::partial_sort(order.begin(), order.begin() + h, order.end());
    std::vector<Index> idx(static_cast<std::size_t>(h));
    for (Index i = 0; i < h; ++i) idx[static_cast<std::size_t>(i)] = order[static_cast<std::size_t>(i)].second;
    return idx;
}

Candidate c_step(const Matrix& X, const Candidate& c, Index h) {
    return subset_fit(X, smallest(squared_distances(X, c.mu, c.cov, c.singular), h));
}

// C-steps until the subset repeats or the determinant stops decreasing.
Candidate concentrate(const Matrix& X, Candidate c, Index h) {
    for (int it = 0; it < 1000; ++it) {
        Candidate next = c_step(X, c, h);
        if (next.idx == c.idx) break;
        if (!c.singular && !(next.det < c.det) && !next.singular) break;
        if (c.singular && next.singular) break;
        c = std::move(next);
    }
    return c;
}

bool better(const Candidate& a, const Candidate& b) {
    if (a.singular != b.singular) return !a.singular;
    return a.det < b.det;
}

[[noreturn]] void exact_fit(const Matrix& X, const Candidate& c) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(c.cov);
    const Vector a = es.eigenvectors().col(0);
    const double rhs = a.dot(c.mu);
    const Vector proj = X * a;
    Index on = 0;
    for (Index i = 0; i < X.rows(); ++i) on += std::abs(proj(i) - rhs) <= 1e-8 * (1.0 + std::abs(rhs));
    std::ostringstream ss;
    ss << "exact-fit or degenerate data: " << on << " points satisfy a'x = " << rhs << " with a = [";
    for (Index j = 0; j < a.size(); ++j) ss << (j ? ", " : "") << a(j);
    ss << "]";
    throw Error(ss.str());
}

void check_matrix(const Matrix& X) {
    if (X.rows() == 0 || X.cols() == 0) throw InvalidArgument("empty data");
    if (!X.allFinite()) throw InvalidArgument("data contains missing or infinite values");
}

// Consistency factors, reweighting and bookkeeping shared by both MCD variants.
void finish_mcd(const Matrix& X, const Candidate& best, Index h, bool consistency, bool reweighting,
                LocationScatter& fit) {
    const Index n = X.rows();
    const auto p = static_cast<double>(X.cols());
    if (best.singular) exact_fit(X, best);
    fit.h = h;
    fit.objective = best.det;
    fit.subset = best.idx;
    fit.raw_location = best.mu;
    if (consistency && h < n) {
        const double frac = static_cast<double>(h) / static_cast<double>(n);
        fit.raw_consistency = frac / chi2_cdf(chi2_quantile(frac, p), p + 2.0);
    }
    fit.raw_scatter = best.cov * fit.raw_consistency;
    fit.location = fit.raw_location;
    fit.scatter = fit.raw_scatter;
    if (!reweighting) return;
    const double cut2 = chi2_quantile(0.975, p);
    const Vector d2 = squared_distances(X, fit.raw_location, fit.raw_scatter, false);
    fit.weights = (d2.array() <= cut2);
    std::vector<Index> keep;
    for (Index i = 0; i < n; ++i) {
        if (fit.weights(i)) keep.push_back(i);
    }
    if (static_cast<double>(keep.size()) <= p) {
        fit.warnings.push_back("too few points kept by reweighting; raw estimate returned");
        return;
    }
    const Candidate rw = subset_fit(X, keep);
    if (consistency) fit.reweighted_consistency = 0.975 / chi2_cdf(cut2, p + 2.0);
    fit.location = rw.mu;
    fit.scatter = rw.cov * fit.reweighted_consistency;
}

}  // namespace

LocationScatter fit_fast_mcd(const Matrix& X, const FastMcdOptions& opt) {
    check_matrix(X);
    const Index n = X.rows();
    const Index p = X.cols();
    if (n <= 2 * p) throw InvalidArgument("fast MCD needs n > 2p");
    const Index h = mcd_h(n, p, opt.alpha);
    LocationScatter fit;
    fit.method = CovMethod::fastmcd;
    fit.alpha = opt.alpha;
    fit.seed = opt.seed;
    if (h == n) {
        std::vector<Index> all(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
        finish_mcd(X, subset_fit(X, all), h, opt.consistency, opt.reweighting, fit);
        return fit;
    }
    const Index m = std::max<Index>(1, opt.n_initial_subsets);
    std::vector<Candidate> starts(static_cast<std::size_t>(m));
    const bool parallel = opt.exec == Exec::parallel;
#pragma omp parallel for schedule(static) if (parallel)
    for (Index k = 0; k < m; ++k) {
        Rng rng(derive_seed(opt.seed, static_cast<std::uint64_t>(k)));
        std::vector<Index> idx = sample_indices(rng, n, p + 1);
        Candidate c = subset_fit(X, idx);
        // Grow a singular start with further random points.
        while (c.singular && static_cast<Index>(idx.size()) < h) {
            Index j;
            do {
                j = static_cast<Index>(rng.below(static_cast<std::size_t>(n)));
            } while (std::find(idx.begin(), idx.end(), j) != idx.end());
            idx.push_back(j);
            c = subset_fit(X, idx);
        }
        for (int s = 0; s < opt.n_initial_c_steps; ++s) c = c_step(X, c, h);
        starts[static_cast<std::size_t>(k)] = std::move(c);
    }
    std::vector<Index> order(static_cast<std::size_t>(m));
    for (Index k = 0; k < m; ++k) order[static_cast<std::size_t>(k)] = k;
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        return better(starts[static_cast<std::size_t>(a)], starts[static_cast<std::size_t>(b)]);
    });
    const Index kbest = std::min(m, std::max<Index>(1, opt.n_best_subsets));
    std::vector<Candidate> finals(static_cast<std::size_t>(kbest));
#pragma omp parallel for schedule(static) if (parallel)
    for (Index k = 0; k < kbest; ++k) {
        finals[static_cast<std::size_t>(k)] =
            concentrate(X, starts[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])], h);
    }
    const Candidate* best = &finals[0];
    for (const auto& c : finals) {
        if (better(c, *best)) best = &c;
    }
    finish_mcd(X, *best, h, opt.consistency, opt.reweighting, fit);
    return fit;
}

namespace {

double qn_scale(std::span<const double> x) { return fit_qn(x).scale; }

double tau_scale_or_zero(std::span<const double> x) {
    try {
        return fit_tau(x).scale;
    } catch (const Error&) {
        return 0.0;
    }
}

double tau_location(std::span<const double> x) {
    try {
        return fit_tau(x).location;
    } catch (const Error&) {
        return median(x);
    }
}

using ScaleFn = double (*)(std::span<const double>);

// Orthogonalized pairwise scatter; returns location and scatter in X units.
std::pair<Vector, Matrix> ogk_core(const Matrix& X, ScaleFn scale, ScaleFn location, int iterations,
                                   Exec exec) {
    const Index n = X.rows();
    const Index p = X.cols();
    Matrix Z = X;
    std::vector<Matrix> transforms;
    for (int it = 0; it < iterations; ++it) {
        Vector s(p);
        for (Index j = 0; j < p; ++j) {
            s(j) = scale(col_span(Z, j));
            if (!(s(j) > 0.0)) throw Error("degenerate column " + std::to_string(j));
        }
        const Matrix Y = Z * s.cwiseInverse().asDiagonal();
        Matrix U = Matrix::Identity(p, p);
        const bool parallel = exec == Exec::parallel;
#pragma omp parallel for schedule(dynamic) if (parallel)
        for (Index j = 1; j < p; ++j) {
            Vector sum(n), diff(n);
            for (Index k = 0; k < j; ++k) {
                sum = Y.col(j) + Y.col(k);
                diff = Y.col(j) - Y.col(k);
                const double a = scale(as_span(sum));
                const double b = scale(as_span(diff));
                U(j, k) = U(k, j) = 0.25 * (a * a - b * b);
            }
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(U);
        const Matrix E = es.eigenvectors().rowwise().reverse();
        Z = Y * E;
        transforms.push_back(s.asDiagonal() * E);
    }
    Vector mu(p);
    Vector var(p);
    for (Index j = 0; j < p; ++j) {
        mu(j) = location(col_span(Z, j));
        const double v = scale(col_span(Z, j));
        var(j) = v * v;
    }
    Matrix S = var.asDiagonal();
    for (auto t = transforms.rbegin(); t != transforms.rend(); ++t) {
        mu = *t * mu;
        S = *t * S * t->transpose();
    }
    return {mu, 0.5 * (S + S.transpose())};
}

double median_location(std::span<const double> x) { return median(x); }

double qn_scale_or_zero(std::span<const double> x) {
    try {
        return qn_scale(x);
    } catch (const std::exception&) {
        return 0.0;
    }
}

Matrix correlation_of(const Matrix& A) {
    const Matrix C = covariance(A);
    const Vector d = C.diagonal().cwiseSqrt().cwiseMax(std::numeric_limits<double>::min());
    return d.cwiseInverse().asDiagonal() * C * d.cwiseInverse().asDiagonal();
}

// Average ranks (1-based) of each column.
Matrix column_ranks(const Matrix& Z) {
    const Index n = Z.rows();
    Matrix R(n, Z.cols());
    std::vector<Index> ord(static_cast<std::size_t>(n));
    for (Index j = 0; j < Z.cols(); ++j) {
        for (Index i = 0; i < n; ++i) ord[static_cast<std::size_t>(i)] = i;
        std::stable_sort(ord.begin(), ord.end(), [&](Index a, Index b) { return Z(a, j) < Z(b, j); });
        for (Index a = 0; a < n;) {
            Index b = a;
            while (b + 1 < n && Z(ord[static_cast<std::size_t>(b + 1)], j) == Z(ord[static_cast<std::size_t>(a)], j)) ++b;
            const double r = 0.5 * static_cast<double>(a + b) + 1.0;
            for (Index k = a; k <= b; ++k) R(ord[static_cast<std::size_t>(k)], j) = r;
            a = b + 1;
        }
    }
    return R;
}

}  // namespace

LocationScatter fit_det_mcd(const Matrix& X, const DetMcdOptions& opt) {
    check_matrix(X);
    const Index n = X.rows();
    const Index p = X.cols();
    if (n <= 2 * p) throw InvalidArgument("DetMCD needs n > 2p");
    const Index h = mcd_h(n, p, opt.alpha);
    LocationScatter fit;
    fit.method = CovMethod::detmcd;
    fit.alpha = opt.alpha;
    if (h == n) {
        std::vector<Index> all(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
        finish_mcd(X, subset_fit(X, all), h, opt.consistency, opt.reweighting, fit);
        return fit;
    }
    Matrix Z(n, p);
    for (Index j = 0; j < p; ++j) {
        const double med = median(col_span(X, j));
        const double s = qn_scale(col_span(X, j));
        if (!(s > 0.0)) throw Error("degenerate column " + std::to_string(j));
        Z.col(j) = (X.col(j).array() - med) / s;
    }

    std::vector<Matrix> S;
    S.push_back(correlation_of(Z.array().tanh().matrix()));
    const Matrix R = column_ranks(Z);
    S.push_back(correlation_of(R));
    Matrix NS = R;
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < p; ++j) {
            NS(i, j) = normal_quantile((R(i, j) - 1.0 / 3.0) / (static_cast<double>(n) + 1.0 / 3.0));
        }
    }
    S.push_back(correlation_of(NS));
    const Vector norms = Z.rowwise().norm();
    Matrix K = Z;
    for (Index i = 0; i < n; ++i) {
        if (norms(i) > 0.0) K.row(i) /= norms(i);
    }
    S.push_back(K.transpose() * K / static_cast<double>(n));
    const Index half = (n + 1) / 2;
    {
        std::vector<Index> idx = smallest(norms, half);
        Matrix Zh(half, p);
        for (Index r = 0; r < half; ++r) Zh.row(r) = Z.row(idx[static_cast<std::size_t>(r)]);
        S.push_back(covariance(Zh));
    }
    S.push_back(ogk_core(Z, qn_scale_or_zero, median_location, 2, Exec::serial).second);

    std::vector<Candidate> finals(S.size());
    const bool parallel = opt.exec == Exec::parallel;
    const auto m = static_cast<Index>(S.size());
#pragma omp parallel for schedule(static) if (parallel)
    for (Index k = 0; k < m; ++k) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(S[static_cast<std::size_t>(k)]);
        const Matrix E = es.eigenvectors().rowwise().reverse();
        const Matrix B = Z * E;
        Vector l(p);
        for (Index j = 0; j < p; ++j) {
            const double q = qn_scale_or_zero(col_span(B, j));
            l(j) = q * q;
        }
        const double floor = std::max(1e-12 * l.sum() / static_cast<double>(p),
                                      std::numeric_limits<double>::min());
        const Vector lf = l.cwiseMax(floor);
        const Matrix cov = E * lf.asDiagonal() * E.transpose();
        const Matrix root = E * lf.cwiseSqrt().asDiagonal() * E.transpose();
        const Matrix inv_root = E * lf.cwiseSqrt().cwiseInverse().asDiagonal() * E.transpose();
        const Matrix W = Z * inv_root;
        Vector med(p);
        for (Index j = 0; j < p; ++j) med(j) = median(col_span(W, j));
        const Vector mu = root * med;
        const Vector d2 = squared_distances(Z, mu, cov, true);
        Candidate c = subset_fit(X, smallest(d2, half));
        c = c_step(X, c, h);
        finals[static_cast<std::size_t>(k)] = concentrate(X, std::move(c), h);
    }
    const Candidate* best = &finals[0];
    for (const auto& c : finals) {
        if (better(c, *best)) best = &c;
    }
    finish_mcd(X, *best, h, opt.consistency, opt.reweighting, fit);
    return fit;
}

LocationScatter fit_ogk(const Matrix& X) {
    check_matrix(X);
    if (X.rows() < 3) throw InvalidArgument("OGK needs at least 3 rows");
    auto [mu, S] = ogk_core(X, tau_scale_or_zero, tau_location, 1, Exec::parallel);
    LocationScatter fit;
    fit.method = CovMethod::ogk;
    fit.location = fit.raw_location = mu;
    fit.scatter = fit.raw_scatter = S;
    return fit;
}

namespace {

double kendall_tau_b(const double* x, const double* y, Index n) {
    double conc = 0.0, disc = 0.0, tx = 0.0, ty = 0.0, pairs = 0.0;
    for (Index i = 1; i < n; ++i) {
        for (Index j = 0; j < i; ++j) {
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            pairs += 1.0;
            if (dx == 0.0) tx += 1.0;
            if (dy == 0.0) ty += 1.0;
            const double s = dx * dy;
            if (s > 0.0) conc += 1.0;
            else if (s < 0.0) disc += 1.0;
        }
    }
    const double den = std::sqrt((pairs - tx) * (pairs - ty));
    return den > 0.0 ? (conc - disc) / den : 0.0;
}

}  // namespace

LocationScatter fit_kendall_tau_cov(const Matrix& X) {
    check_matrix(X);
    const Index n = X.rows();
    const Index p = X.cols();
    if (n < 2) throw InvalidArgument("Kendall covariance needs at least 2 rows");
    Vector s(p), med(p);
    for (Index j = 0; j < p; ++j) {
        s(j) = qn_scale(col_span(X, j));
        if (!(s(j) > 0.0)) throw Error("degenerate column " + std::to_string(j));
        med(j) = median(col_span(X, j));
    }
    Matrix S(p, p);
#pragma omp parallel for schedule(dynamic)
    for (Index j = 0; j < p; ++j) {
        S(j, j) = s(j) * s(j);
        for (Index k = 0; k < j; ++k) {
            const double tau = kendall_tau_b(X.col(j).data(), X.col(k).data(), n);
            const double r = std::sin(std::numbers::pi / 2.0 * tau);
            S(j, k) = S(k, j) = r * s(j) * s(k);
        }
    }
    LocationScatter fit;
    fit.method = CovMethod::kendall;
    fit.location = fit.raw_location = med;
    fit.scatter = fit.raw_scatter = S;
    if (Eigen::SelfAdjointEigenSolver<Matrix>(S, Eigen::EigenvaluesOnly).eigenvalues().minCoeff() < 0.0) {
        fit.warnings.push_back("scatter is not positive semidefinite");
    }
    return fit;
}

WrappingConstants wrapping_constants(double b, double c) {
    if (!(b > 0.0 && c > b)) throw InvalidArgument("wrapping needs 0 < b < c");
    using boost::math::quadrature::gauss_kronrod;
    auto residual = [&](double q2) {
        const double q1 = b / std::tanh(q2 * (c - b));
        auto psi2 = [&](double z) {
            const double t = q1 * std::tanh(q2 * (c - z));
            return t * t * normal_pdf(z);
        };
        auto dpsi = [&](double z) {
            const double ch = std::cosh(q2 * (c - z));
            return -q1 * q2 / (ch * ch) * normal_pdf(z);
        };
        const double inner2 = (normal_cdf(b) - 0.5) - b * normal_pdf(b);
        const double A = 2.0 * (inner2 + gauss_kronrod<double, 61>::integrate(psi2, b, c));
        const double B = 2.0 * ((normal_cdf(b) - 0.5) + gauss_kronrod<double, 61>::integrate(dpsi, b, c));
        return 2.0 * A * q2 - q1 * B;
    };
    // Scan for the sign change, then refine.
    double lo = 0.05, flo = residual(lo);
    double hi = lo;
    bool found = false;
    for (int i = 0; i < 400 && !found; ++i) {
        hi = lo * 1.05;
        const double fhi = residual(hi);
        if ((flo < 0.0) != (fhi < 0.0)) {
            found = true;
        } else {
            lo = hi;
            flo = fhi;
        }
    }
    if (!found) throw Error("no wrapping constants for these cutoffs");
    boost::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(
        residual, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
    WrappingConstants k;
    k.b = b;
    k.c = c;
    k.q2 = 0.5 * (r.first + r.second);
    k.q1 = b / std::tanh(k.q2 * (c - b));
    return k;
}

double wrapping_psi(double z, const WrappingConstants& k) {
    const double a = std::abs(z);
    if (a <= k.b) return z;
    if (a >= k.c) return 0.0;
    return std::copysign(k.q1 * std::tanh(k.q2 * (k.c - a)), z);
}

LocationScatter fit_wrapping_cov(const Matrix& X, double b, double c) {
    check_matrix(X);
    const Index n = X.rows();
    const Index p = X.cols();
    if (n < 2) throw InvalidArgument("wrapping covariance needs at least 2 rows");
    const WrappingConstants k = wrapping_constants(b, c);
    Vector med(p), s(p);
    Matrix W(n, p);
    for (Index j = 0; j < p; ++j) {
        med(j) = median(col_span(X, j));
        s(j) = mad(col_span(X, j), true);
        if (!(s(j) > 0.0)) throw Error("zero scale in column " + std::to_string(j));
        for (Index i = 0; i < n; ++i) W(i, j) = wrapping_psi((X(i, j) - med(j)) / s(j), k);
    }
    const Vector m = column_means(W);
    LocationScatter fit;
    fit.method = CovMethod::wrapping;
    fit.location = med + s.cwiseProduct(m);
    fit.scatter = s.asDiagonal() * covariance(W, m) * s.asDiagonal();
    fit.raw_location = fit.location;
    fit.raw_scatter = fit.scatter;
    return fit;
}

Vector robust_distances(const LocationScatter& fit, const Matrix& X) {
    return mahalanobis_distances(X, fit.location, fit.scatter);
}

DDPlotData distance_distance_data(const LocationScatter& fit, const Matrix& X) {
    if (X.rows() <= X.cols()) throw InvalidArgument("distance-distance data needs n > p");
    DDPlotData dd;
    dd.classical_distances = mahalanobis_distances(X, column_means(X), covariance(X));
    dd.robust_distances = robust_distances(fit, X);
    dd.cutoff = std::sqrt(chi2_quantile(0.975, static_cast<double>(X.cols())));
    dd.flags = dd.robust_distances.array() > dd.cutoff;
    return dd;
}

LocationScatter fit_covariance(const Matrix& X, CovMethod method, double alpha, std::uint64_t seed,
                               Exec exec) {
    switch (method) {
    case CovMethod::fastmcd: {
        FastMcdOptions o;
        o.alpha = alpha;
        o.seed = seed;
        o.exec = exec;
        return fit_fast_mcd(X, o);
    }
    case CovMethod::detmcd: {
        DetMcdOptions o;
        o.alpha = alpha;
        o.exec = exec;
        return fit_det_mcd(X, o);
    }
    case CovMethod::ogk: return fit_ogk(X);
    case CovMethod::kendall: return fit_kendall_tau_cov(X);
    case CovMethod::wrapping: return fit_wrapping_cov(X);
    }
    throw InvalidArgument("unknown covariance method");
}

}  // namespace robustats
