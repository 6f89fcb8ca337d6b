// Copyright 2026 The robustats Authors
// SPDX-License-Identifier: Apache-2.0

#include "robustats/kernel.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace robustats {

namespace {

std::vector<double> sorted_copy(std::span<const double> x) {
    std::vector<double> v(x.begin(), x.end());
    std::sort(v.begin(), v.end());
    return v;
}

double median_inplace(std::vector<double>& v) {
    const std::size_t n = v.size();
    const std::size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double hi = v[mid];
    if (n % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

}  // namespace

double median(std::span<const double> x) {
    if (x.empty()) throw InvalidArgument("empty sample");
    std::vector<double> v(x.begin(), x.end());
    return median_inplace(v);
}

double mad(std::span<const double> x, bool consistent) {
    if (x.empty()) throw InvalidArgument("empty sample");
    const double m = median(x);
    std::vector<double> dev(x.size());
    std::transform(x.begin(), x.end(), dev.begin(), [m](double v) { return std::abs(v - m); });
    const double raw = median_inplace(dev);
    return consistent ? kMadConsistency * raw : raw;
}

double weighted_median(std::span<const double> x, std::span<const double> w) {
    if (x.size() != w.size()) throw InvalidArgument("length mismatch");
    if (x.empty()) throw InvalidArgument("empty sample");
    for (double wi : w) {
        if (!(wi > 0.0)) throw InvalidArgument("nonpositive weight");
    }
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    double cum = 0.0;
    for (std::size_t k : order) {
        cum += w[k];
        if (2.0 * cum >= total) return x[k];
    }
    return x[order.back()];
}

// Kernel h(xi, xj) = ((xj - m) - (m - xi)) / (xj - xi) over xi <= m <= xj. A point is
// never paired with itself. When k points tie with the median, each ordered pair of two
// distinct tied points gets sign(plus-count - minus-count), which over the k(k-1) pairs
// gives k(k-1)/2 values of +1 and as many of -1.
double medcouple(std::span<const double> x) {
    if (x.size() < 3) throw InvalidArgument("medcouple needs at least 3 points");
    const std::vector<double> s = sorted_copy(x);
    if (s.front() == s.back()) throw Error("degenerate medcouple");
    const std::size_t n = s.size();
    const double m = (n % 2 == 1) ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);

    std::vector<double> lower, upper;
    std::size_t ties = 0;
    for (double v : s) {
        const double z = v - m;
        if (z < 0.0) {
            lower.push_back(z);
        } else if (z > 0.0) {
            upper.push_back(z);
        } else {
            ++ties;
        }
    }
    std::vector<double> h;
    h.reserve((lower.size() + ties) * (upper.size() + ties));
    for (double u : upper) {
        for (double l : lower) h.push_back((u + l) / (u - l));
        h.insert(h.end(), ties, 1.0);
    }
    for (std::size_t t = 0; t < ties; ++t) h.insert(h.end(), lower.size(), -1.0);
    const std::size_t tie_pairs = ties * (ties > 0 ? ties - 1 : 0) / 2;
    h.insert(h.end(), tie_pairs, 1.0);
    h.insert(h.end(), tie_pairs, -1.0);
    return median_inplace(h);
}

double quantile(std::span<const double> x, double prob) {
    if (x.empty()) throw InvalidArgument("empty sample");
    if (!(prob >= 0.0 && prob <= 1.0)) throw InvalidArgument("probability outside [0, 1]");
    const std::vector<double> s = sorted_copy(x);
    const double pos = prob * static_cast<double>(s.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    if (lo + 1 >= s.size()) return s.back();
    return s[lo] + (pos - static_cast<double>(lo)) * (s[lo + 1] - s[lo]);
}

double mean(std::span<const double> x) {
    if (x.empty()) throw InvalidArgument("empty sample");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double stddev(std::span<const double> x, int ddof) {
    const double mu = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - mu) * (v - mu);
    const double denom = static_cast<double>(x.size()) - ddof;
    if (denom <= 0.0) throw InvalidArgument("too few points for standard deviation");
    return std::sqrt(ss / denom);
}

Vector column_medians(const Matrix& X) {
    Vector m(X.cols());
    for (Index j = 0; j < X.cols(); ++j) {
        const Vector col = X.col(j);
        m(j) = median(as_span(col));
    }
    return m;
}

Vector column_means(const Matrix& X) { return X.colwise().mean().transpose(); }

Matrix covariance(const Matrix& X, const Vector& center) {
    if (X.rows() < 2) throw InvalidArgument("covariance needs at least 2 rows");
    const Matrix C = X.rowwise() - center.transpose();
    Matrix S = (C.transpose() * C) / static_cast<double>(X.rows() - 1);
    return 0.5 * (S + S.transpose());
}

Matrix covariance(const Matrix& X) { return covariance(X, column_means(X)); }

Vector mahalanobis_distances(const Matrix& X, const Vector& mu, const Matrix& Sigma) {
    const Index p = Sigma.rows();
    if (Sigma.cols() != p || mu.size() != p || X.cols() != p) {
        throw InvalidArgument("dimension mismatch in mahalanobis_distances");
    }
    Eigen::LLT<Matrix> llt(Sigma);
    if (llt.info() != Eigen::Success) throw Error("singular scatter");
    const Vector diag = llt.matrixL().toDenseMatrix().diagonal();
    const double dmax = diag.cwiseAbs().maxCoeff();
    if (!(diag.minCoeff() > 1e-10 * dmax)) throw Error("singular scatter");
    Matrix C = (X.rowwise() - mu.transpose()).transpose();
    llt.matrixL().solveInPlace(C);
    return C.colwise().norm().transpose();
}

Vector l1median(const Matrix& X, double tol, int max_iter) {
    const Index n = X.rows();
    if (n < 1) throw InvalidArgument("empty sample");
    Vector y = column_medians(X);
    for (int iter = 0; iter < max_iter; ++iter) {
        const Vector d = (X.rowwise() - y.transpose()).rowwise().norm();
        const double anchor_eps = 1e-12 * (1.0 + y.norm());
        Vector T = Vector::Zero(X.cols());
        Vector R = Vector::Zero(X.cols());
        double wsum = 0.0;
        Index eta = 0;
        for (Index i = 0; i < n; ++i) {
            if (d(i) <= anchor_eps) {
                ++eta;
                continue;
            }
            const double w = 1.0 / d(i);
            T += w * X.row(i).transpose();
            R += w * (X.row(i).transpose() - y);
            wsum += w;
        }
        if (wsum == 0.0) return y;
        T /= wsum;
        Vector next = T;
        if (eta > 0) {
            const double r = R.norm();
            const double gamma = r > 0.0 ? std::min(1.0, static_cast<double>(eta) / r) : 1.0;
            next = (1.0 - gamma) * T + gamma * y;
        }
        const double step = (next - y).norm();
        y = next;
        if (step <= tol * (1.0 + y.norm())) return y;
    }
    throw L1MedianError("l1median did not converge", y);
}

Index default_direction_count(Index p) { return std::min<Index>(250 * p, 2500); }

Matrix DirectionSampler::directions(const Matrix& X) const {
    const Index n = X.rows();
    const Index p = X.cols();
    const Index m = n_directions > 0 ? n_directions : default_direction_count(p);
    Matrix A(p, m);
    Rng rng(seed);
    Index filled = 0;
    for (Index k = 0; k < m; ++k) {
        bool found = false;
        for (int attempt = 0; attempt < 100 && !found && n >= 2; ++attempt) {
            const auto pair = sample_indices(rng, n, 2);
            const Vector diff = X.row(pair[1]).transpose() - X.row(pair[0]).transpose();
            const double norm = diff.norm();
            if (norm > 0.0) {
                A.col(filled++) = diff / norm;
                found = true;
            }
        }
    }
    return A.leftCols(filled);
}

Vector stahel_donoho_directions(const Matrix& X, const Matrix& A, Exec exec) {
    const Index n = X.rows();
    const Index m = A.cols();
    Vector out = Vector::Zero(n);
    int used = 0;
    const bool parallel = exec == Exec::parallel;
#pragma omp parallel if (parallel)
    {
        Vector local = Vector::Zero(n);
        int local_used = 0;
#pragma omp for schedule(static)
        for (Index k = 0; k < m; ++k) {
            const Vector proj = X * A.col(k);
            const double med = median(as_span(proj));
            const double s = mad(as_span(proj), false);
            if (!(s > 0.0)) continue;
            ++local_used;
            for (Index i = 0; i < n; ++i) {
                local(i) = std::max(local(i), std::abs(proj(i) - med) / s);
            }
        }
#pragma omp critical
        {
            out = out.cwiseMax(local);
            used += local_used;
        }
    }
    if (used == 0) throw Error("directionally degenerate data");
    return out;
}

Vector stahel_donoho(const Matrix& X, const DirectionSampler& sampler, Exec exec) {
    if (X.rows() <= X.cols()) throw InvalidArgument("stahel_donoho needs n > p");
    return stahel_donoho_directions(X, sampler.directions(X), exec);
}

double LossFunction::rho(double u) const {
    const double a = std::abs(u);
    if (kind == Kind::huber) {
        return a <= tuning ? 0.5 * u * u : tuning * a - 0.5 * tuning * tuning;
    }
    if (a >= tuning) return 1.0;
    const double t = 1.0 - (u / tuning) * (u / tuning);
    return 1.0 - t * t * t;
}

double LossFunction::psi(double u) const {
    if (kind == Kind::huber) return std::clamp(u, -tuning, tuning);
    if (std::abs(u) >= tuning) return 0.0;
    const double t = 1.0 - (u / tuning) * (u / tuning);
    return u * t * t;
}

double LossFunction::weight(double u) const {
    const double a = std::abs(u);
    if (kind == Kind::huber) return a <= tuning ? 1.0 : tuning / a;
    if (a >= tuning) return 0.0;
    const double t = 1.0 - (u / tuning) * (u / tuning);
    return t * t;
}

double loss_eval(const LossFunction& f, double u, LossEval which) {
    if (!(f.tuning > 0.0)) throw InvalidArgument("loss tuning constant must be positive");
    switch (which) {
    case LossEval::rho: return f.rho(u);
    case LossEval::psi: return f.psi(u);
    case LossEval::weight: return f.weight(u);
    }
    return 0.0;
}

double chi2_quantile(double prob, double df) {
    if (!(prob > 0.0 && prob < 1.0)) throw InvalidArgument("probability outside (0, 1)");
    if (!(df > 0.0)) throw InvalidArgument("degrees of freedom must be positive");
    return boost::math::quantile(boost::math::chi_squared_distribution<double>(df), prob);
}

double chi2_cdf(double x, double df) {
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return boost::math::cdf(boost::math::chi_squared_distribution<double>(df), x);
}

double normal_quantile(double prob) {
    if (!(prob > 0.0 && prob < 1.0)) throw InvalidArgument("probability outside (0, 1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), prob);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double normal_pdf(double x) {
    static const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * M_PI);
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double propagation_fraction(double eps, int p) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw InvalidArgument("eps outside [0, 1]");
    if (p < 1) throw InvalidArgument("p must be positive");
    return 1.0 - std::pow(1.0 - eps, p);
}

}  // namespace robustats
