// Copyright 2026 The robustats Authors
// SPDX-License-Identifier: Apache-2.0

#include "robustats/pca.hpp"

#include "robustats/covariance.hpp"
#include "robustats/kernel.hpp"
#include "robustats/univariate.hpp"

#include <algorithm>
#include <cmath>

namespace robustats {

std::string to_string(PCAMethod m) {
    return m == PCAMethod::robpca ? "robpca" : "spherical";
}

PCAMethod parse_pca_method(const std::string& name) {
    if (name == "robpca") return PCAMethod::robpca;
    if (name == "spherical") return PCAMethod::spherical;
    throw InvalidArgument("unknown PCA method: " + name);
}

std::string to_string(PCAClass c) {
    switch (c) {
    case PCAClass::regular: return "regular";
    case PCAClass::orthogonal: return "orthogonal";
    case PCAClass::good_leverage: return "good_leverage";
    case PCAClass::bad_leverage: return "bad_leverage";
    }
    return "regular";
}

namespace {

struct Eigen_ {
    Vector values;  // nonincreasing
    Matrix vectors;
};

Eigen_ sorted_eigen(const Matrix& S) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(S);
    if (es.info() != Eigen::Success) throw Error("eigen decomposition failed");
    const Index p = S.rows();
    Eigen_ e{Vector(p), Matrix(p, p)};
    for (Index j = 0; j < p; ++j) {
        e.values(j) = std::max(es.eigenvalues()(p - 1 - j), 0.0);
        e.vectors.col(j) = es.eigenvectors().col(p - 1 - j);
    }
    return e;
}

// Sign convention: the largest-magnitude entry of each loading is positive.
void fix_signs(Matrix& L) {
    for (Index j = 0; j < L.cols(); ++j) {
        Index i;
        L.col(j).cwiseAbs().maxCoeff(&i);
        if (L(i, j) < 0.0) L.col(j) = -L.col(j);
    }
}

Index choose_q(const Vector& cumulative, double k_min) {
    for (Index j = 0; j < cumulative.size(); ++j) {
        if (cumulative(j) >= k_min - 1e-12) return j + 1;
    }
    return cumulative.size();
}

void check_input(const Matrix& X) {
    if (X.rows() < 10) throw InvalidArgument("PCA needs at least 10 rows");
    if (!X.allFinite()) throw InvalidArgument("data contains missing or infinite values");
}

}  // namespace

double od_cutoff(const Vector& od) {
    if (od.size() == 0) return 0.0;
    if (od.maxCoeff() <= 1e-10) return od.maxCoeff();
    std::vector<double> t(static_cast<std::size_t>(od.size()));
    for (Index i = 0; i < od.size(); ++i) t[static_cast<std::size_t>(i)] = std::pow(od(i), 2.0 / 3.0);
    const UnivariateFit f = fit_univariate_mcd(t);
    const double v = f.location + f.scale * normal_quantile(0.975);
    return v > 0.0 ? std::pow(v, 1.5) : 0.0;
}

PCAFit fit_robpca(const Matrix& X, const RobpcaOptions& opt) {
    check_input(X);
    if (!(opt.alpha >= 0.5 && opt.alpha <= 1.0)) throw InvalidArgument("alpha must lie in [0.5, 1]");
    const Index n = X.rows();
    const Vector mean = column_means(X);
    const Matrix C = X.rowwise() - mean.transpose();

    // Reduce to the affine span of the data.
    Eigen::BDCSVD<Matrix> svd(C, Eigen::ComputeThinV);
    const Vector sv = svd.singularValues();
    const double tol = std::max(C.rows(), C.cols()) * sv(0) * std::numeric_limits<double>::epsilon();
    Index r = 0;
    while (r < sv.size() && sv(r) > tol) ++r;
    if (r == 0) throw Error("exact-fit or degenerate data: all rows coincide");
    const Matrix V = svd.matrixV().leftCols(r);
    const Matrix Z = C * V;
    if (opt.n_components && (*opt.n_components < 1 || *opt.n_components > r)) {
        throw InvalidArgument("n_components exceeds the rank of the data");
    }

    // h least outlying points.
    const Index qh = opt.n_components ? *opt.n_components : std::min<Index>(10, r);
    const Index h = std::min(n, std::max(static_cast<Index>(std::floor(opt.alpha * static_cast<double>(n))),
                                         (n + qh + 1) / 2));
    DirectionSampler sampler;
    sampler.seed = opt.seed;
    const Vector out = stahel_donoho(Z, sampler, opt.exec);
    std::vector<Index> order(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return out(a) < out(b); });
    Matrix Zh(h, r);
    for (Index i = 0; i < h; ++i) Zh.row(i) = Z.row(order[static_cast<std::size_t>(i)]);
    const Vector mh = column_means(Zh);
    const Eigen_ eh = sorted_eigen(covariance(Zh, mh));
    const double total = eh.values.sum();
    if (!(total > 0.0)) throw Error("exact-fit or degenerate data: h-subset has zero variance");
    Vector cum(r);
    double acc = 0.0;
    for (Index j = 0; j < r; ++j) {
        acc += eh.values(j);
        cum(j) = acc / total;
    }
    const Index q = opt.n_components ? *opt.n_components : choose_q(cum, opt.k_min_var_explained);
    if (eh.values(q - 1) <= 1e-12 * total) throw InvalidArgument("n_components exceeds the rank of the h-subset");

    // Reweighted MCD on the q-variate scores.
    const Matrix P = eh.vectors.leftCols(q);
    const Matrix T = (Z.rowwise() - mh.transpose()) * P;
    FastMcdOptions mo;
    mo.alpha = opt.alpha;
    mo.seed = opt.seed;
    mo.exec = opt.exec;
    const LocationScatter mcd = fit_fast_mcd(T, mo);
    const Eigen_ em = sorted_eigen(mcd.scatter);

    PCAFit fit;
    fit.method = PCAMethod::robpca;
    fit.h = h;
    fit.seed = opt.seed;
    fit.center = mean + V * (mh + P * mcd.location);
    fit.loadings = V * P * em.vectors;
    fix_signs(fit.loadings);
    fit.eigenvalues = em.values;
    fit.explained_variance_ratio = cum.head(q);
    fit.sd_cutoff = std::sqrt(chi2_quantile(0.975, static_cast<double>(q)));
    const Matrix R = C.rowwise() + (mean - fit.center).transpose();
    const Matrix resid = R - (R * fit.loadings) * fit.loadings.transpose();
    fit.od_cutoff = od_cutoff(resid.rowwise().norm());
    for (const auto& w : mcd.warnings) fit.warnings.push_back(w);
    return fit;
}

PCAFit fit_spherical_pca(const Matrix& X, const SphericalPcaOptions& opt) {
    check_input(X);
    const Index n = X.rows();
    const Index p = X.cols();
    PCAFit fit;
    fit.method = PCAMethod::spherical;
    fit.center = l1median(X);
    Matrix S = Matrix::Zero(p, p);
    Index dropped = 0;
    for (Index i = 0; i < n; ++i) {
        const Vector u = X.row(i).transpose() - fit.center;
        const double nrm = u.squaredNorm();
        if (nrm <= 0.0) {
            ++dropped;
            continue;
        }
        S.noalias() += u * u.transpose() / nrm;
    }
    if (dropped == n) throw Error("exact-fit or degenerate data: all rows coincide");
    if (dropped > 0) fit.warnings.push_back(std::to_string(dropped) + " row(s) at the spatial median dropped");
    S /= static_cast<double>(n - 1);
    const Eigen_ e = sorted_eigen(S);

    // Robust score variances replace the spherical eigenvalues.
    const Matrix T = (X.rowwise() - fit.center.transpose()) * e.vectors;
    Vector var(p);
    for (Index j = 0; j < p; ++j) {
        const Vector t = T.col(j);
        const double s = fit_univariate_mcd(as_span(t)).scale;
        var(j) = s * s;
    }
    std::vector<Index> order(static_cast<std::size_t>(p));
    for (Index j = 0; j < p; ++j) order[static_cast<std::size_t>(j)] = j;
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return var(a) > var(b); });
    const double total = var.sum();
    if (!(total > 0.0)) throw Error("exact-fit or degenerate data: zero robust score variance");
    Vector cum(p);
    double acc = 0.0;
    for (Index j = 0; j < p; ++j) {
        acc += var(order[static_cast<std::size_t>(j)]);
        cum(j) = acc / total;
    }
    if (opt.n_components && (*opt.n_components < 1 || *opt.n_components > p)) {
        throw InvalidArgument("n_components exceeds the number of variables");
    }
    const Index q = opt.n_components ? *opt.n_components : choose_q(cum, opt.k_min_var_explained);
    fit.loadings.resize(p, q);
    fit.eigenvalues.resize(q);
    for (Index j = 0; j < q; ++j) {
        fit.loadings.col(j) = e.vectors.col(order[static_cast<std::size_t>(j)]);
        fit.eigenvalues(j) = var(order[static_cast<std::size_t>(j)]);
    }
    if (!(fit.eigenvalues(q - 1) > 0.0)) throw Error("exact-fit or degenerate data: zero robust score variance");
    fix_signs(fit.loadings);
    fit.explained_variance_ratio = cum.head(q);
    fit.sd_cutoff = std::sqrt(chi2_quantile(0.975, static_cast<double>(q)));
    const Matrix R = X.rowwise() - fit.center.transpose();
    const Matrix resid = R - (R * fit.loadings) * fit.loadings.transpose();
    fit.od_cutoff = od_cutoff(resid.rowwise().norm());
    return fit;
}

Matrix scores(const PCAFit& fit, const Matrix& X) {
    if (X.cols() != fit.center.size()) throw InvalidArgument("column count does not match the fit");
    return (X.rowwise() - fit.center.transpose()) * fit.loadings;
}

Matrix project(const PCAFit& fit, const Matrix& X) {
    const Matrix P = scores(fit, X) * fit.loadings.transpose();
    return P.rowwise() + fit.center.transpose();
}

PCAOutlierMapData pca_outlier_map_data(const PCAFit& fit, const Matrix& X) {
    const Matrix T = scores(fit, X);
    PCAOutlierMapData m;
    m.orthogonal_distances = (X - project(fit, X)).rowwise().norm();
    m.score_distances = (T.array().square().rowwise() / fit.eigenvalues.transpose().array()).rowwise().sum().sqrt();
    m.sd_cutoff = fit.sd_cutoff;
    m.od_cutoff = fit.od_cutoff;
    m.classes.resize(static_cast<std::size_t>(X.rows()));
    for (Index i = 0; i < X.rows(); ++i) {
        const bool far = m.score_distances(i) > m.sd_cutoff;
        const bool off = m.orthogonal_distances(i) > m.od_cutoff;
        m.classes[static_cast<std::size_t>(i)] =
            off ? (far ? PCAClass::bad_leverage : PCAClass::orthogonal)
                : (far ? PCAClass::good_leverage : PCAClass::regular);
    }
    return m;
}

}  // namespace robustats
