// Copyright 2026 The robustats Authors
// SPDX-License-Identifier: Apache-2.0

#include "robustats/cellwise.hpp"

#include "robustats/covariance.hpp"
#include "robustats/kernel.hpp"
#include "robustats/univariate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace robustats {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const double kLog2Pi = std::log(2.0 * std::numbers::pi);

std::vector<double> observed(const Matrix& X, Index j) {
    std::vector<double> v;
    for (Index i = 0; i < X.rows(); ++i) {
        if (!std::isnan(X(i, j))) v.push_back(X(i, j));
    }
    return v;
}

// Standardized DDC quantities for a matrix in the model's column order.
struct DdcPass {
    Matrix Z;
    Matrix U;
    Matrix Zhat;
    /// Cells of connected columns whose predictors are all unusable; judged on the column scale.
    BoolMatrix unpredicted;
};

DdcPass ddc_pass(const DdcModel& m, const Matrix& X) {
    const Index n = X.rows();
    const Index p = X.cols();
    DdcPass s;
    s.Z = (X.rowwise() - m.location.transpose()).array().rowwise() / m.scale.transpose().array();
    s.U = s.Z;
    for (Index j = 0; j < p; ++j) {
        for (Index i = 0; i < n; ++i) {
            if (std::abs(s.U(i, j)) > m.cutoff) s.U(i, j) = kNaN;
        }
    }
    s.Zhat = Matrix::Zero(n, p);
    s.unpredicted = BoolMatrix::Constant(n, p, false);
    const bool parallel = m.options.exec == Exec::parallel;
#pragma omp parallel for schedule(static) if (parallel)
    for (Index j = 0; j < p; ++j) {
        const auto& conn = m.connected[static_cast<std::size_t>(j)];
        for (Index i = 0; i < n; ++i) {
            double num = 0.0, den = 0.0;
            for (Index k : conn) {
                const double u = s.U(i, k);
                if (std::isnan(u)) continue;
                const double w = std::abs(m.correlation(j, k));
                num += w * m.slopes(j, k) * u;
                den += w;
            }
            s.Zhat(i, j) = den > 0.0 ? num / den : 0.0;
            s.unpredicted(i, j) = !conn.empty() && !(den > 0.0);
        }
    }
    return s;
}

CellFlags ddc_flags(const DdcModel& m, const Frame& frame, const Matrix& X, const DdcPass& s) {
    const Index n = X.rows();
    const Index p = X.cols();
    CellFlags f;
    f.columns = m.columns;
    f.row_ids = frame.row_ids();
    for (Index i = 0; i < n; ++i) f.row_names.push_back(frame.row_name(i));
    f.cutoff = m.cutoff;
    f.missing = X.array().isNaN();
    f.std_residuals = (s.Z - s.Zhat).array().rowwise() / m.residual_scale.transpose().array();
    for (Index j = 0; j < p; ++j) {
        for (Index i = 0; i < n; ++i) {
            if (s.unpredicted(i, j)) f.std_residuals(i, j) = s.Z(i, j);
        }
    }
    f.predictions = (s.Zhat.array().rowwise() * m.scale.transpose().array()).rowwise() + m.location.transpose().array();
    f.flags = f.std_residuals.array().abs() > m.cutoff && !f.missing;
    f.row_scores.resize(n);
    f.row_flags.resize(n);
    for (Index i = 0; i < n; ++i) {
        double acc = 0.0;
        Index cnt = 0;
        for (Index j = 0; j < p; ++j) {
            if (f.missing(i, j)) continue;
            acc += f.std_residuals(i, j) * f.std_residuals(i, j);
            ++cnt;
        }
        f.row_scores(i) = cnt > 0 ? acc / static_cast<double>(cnt) : kNaN;
        f.row_flags(i) = cnt > 0 && acc > chi2_quantile(m.options.cell_cutoff_prob, static_cast<double>(cnt));
    }
    return f;
}

Matrix model_matrix(const DdcModel& m, const Frame& frame) {
    for (const auto& c : m.columns) {
        if (!frame.has_column(c)) throw InvalidArgument("missing column: " + c);
    }
    Matrix X = frame.numeric_matrix(m.columns);
    for (Index i = 0; i < X.rows(); ++i) {
        for (Index j = 0; j < X.cols(); ++j) {
            if (!std::isfinite(X(i, j))) X(i, j) = kNaN;
        }
    }
    return X;
}

}  // namespace

DdcModel fit_ddc(const Frame& frame, const DdcOptions& opt) {
    if (!(opt.cell_cutoff_prob > 0.0 && opt.cell_cutoff_prob < 1.0)) {
        throw InvalidArgument("cell_cutoff_prob must lie in (0, 1)");
    }
    DdcModel m;
    m.options = opt;
    m.cutoff = std::sqrt(chi2_quantile(opt.cell_cutoff_prob, 1.0));
    const OneStepSpec spec = cellwise_one_step_spec();
    std::vector<double> loc, scl;
    for (const auto& name : frame.numeric_column_names()) {
        const Matrix c = frame.numeric_matrix({name});
        const auto v = observed(c, 0);
        try {
            if (v.size() < 3) throw Error("too few values");
            const UnivariateFit u = fit_one_step_m(v, spec);
            if (!(u.scale > 0.0) || !std::isfinite(u.scale)) throw Error("zero scale");
            m.columns.push_back(name);
            loc.push_back(u.location);
            scl.push_back(u.scale);
        } catch (const Error&) {
            m.dropped_columns.push_back(name);
        }
    }
    const auto p = static_cast<Index>(m.columns.size());
    if (p < 2) throw InvalidArgument("DDC needs at least 2 usable numeric columns");
    m.location = Eigen::Map<Vector>(loc.data(), p);
    m.scale = Eigen::Map<Vector>(scl.data(), p);

    const Matrix X = model_matrix(m, frame);
    const Index n = X.rows();
    Matrix U = (X.rowwise() - m.location.transpose()).array().rowwise() / m.scale.transpose().array();
    const WrappingConstants wc = wrapping_constants();
    Matrix Psi(n, p);
    for (Index j = 0; j < p; ++j) {
        for (Index i = 0; i < n; ++i) {
            if (std::abs(U(i, j)) > m.cutoff) U(i, j) = kNaN;
            Psi(i, j) = std::isnan(U(i, j)) ? kNaN : wrapping_psi(U(i, j), wc);
        }
    }

    // Wrapped correlation and slope for every ordered column pair.
    m.correlation = Matrix::Identity(p, p);
    m.slopes = Matrix::Zero(p, p);
    const bool parallel = opt.exec == Exec::parallel;
#pragma omp parallel for schedule(static) if (parallel)
    for (Index j = 0; j < p; ++j) {
        for (Index k = 0; k < p; ++k) {
            if (k == j) continue;
            double sa = 0.0, sb = 0.0, cnt = 0.0;
            for (Index i = 0; i < n; ++i) {
                if (std::isnan(Psi(i, j)) || std::isnan(Psi(i, k))) continue;
                sa += Psi(i, j);
                sb += Psi(i, k);
                cnt += 1.0;
            }
            if (cnt < 3.0) continue;
            const double ma = sa / cnt, mb = sb / cnt;
            double cab = 0.0, caa = 0.0, cbb = 0.0;
            for (Index i = 0; i < n; ++i) {
                if (std::isnan(Psi(i, j)) || std::isnan(Psi(i, k))) continue;
                const double a = Psi(i, j) - ma, b = Psi(i, k) - mb;
                cab += a * b;
                caa += a * a;
                cbb += b * b;
            }
            if (!(caa > 0.0 && cbb > 0.0)) continue;
            m.correlation(j, k) = cab / std::sqrt(caa * cbb);
            m.slopes(j, k) = cab / cbb;
        }
    }
    m.connected.resize(static_cast<std::size_t>(p));
    for (Index j = 0; j < p; ++j) {
        auto& conn = m.connected[static_cast<std::size_t>(j)];
        for (Index k = 0; k < p; ++k) {
            if (k != j && std::abs(m.correlation(j, k)) >= opt.corr_lim) conn.push_back(k);
        }
        std::stable_sort(conn.begin(), conn.end(), [&](Index a, Index b) {
            return std::abs(m.correlation(j, a)) > std::abs(m.correlation(j, b));
        });
        if (static_cast<Index>(conn.size()) > opt.max_predictors) {
            conn.resize(static_cast<std::size_t>(std::max<Index>(0, opt.max_predictors)));
        }
    }

    m.residual_scale = Vector::Ones(p);
    const DdcPass s = ddc_pass(m, X);
    for (Index j = 0; j < p; ++j) {
        std::vector<double> r;
        for (Index i = 0; i < n; ++i) {
            if (!std::isnan(s.Z(i, j)) && !s.unpredicted(i, j)) r.push_back(s.Z(i, j) - s.Zhat(i, j));
        }
        try {
            const double sc = fit_one_step_m(r, spec).scale;
            if (sc > 0.0 && std::isfinite(sc)) m.residual_scale(j) = sc;
        } catch (const std::exception&) {
            // Exactly predicted column: keep unit residual scale.
        }
    }
    m.training = ddc_flags(m, frame, X, s);
    return m;
}

CellFlags ddc_predict(const DdcModel& model, const Frame& frame) {
    const Matrix X = model_matrix(model, frame);
    return ddc_flags(model, frame, X, ddc_pass(model, X));
}

Frame ddc_impute(const DdcModel& model, const Frame& frame) {
    const CellFlags f = ddc_predict(model, frame);
    Frame out = frame;
    for (std::size_t j = 0; j < model.columns.size(); ++j) {
        std::vector<double> v = frame.column(model.columns[j]).values;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const auto ii = static_cast<Index>(i);
            const auto jj = static_cast<Index>(j);
            if (f.flags(ii, jj) || f.missing(ii, jj)) v[i] = f.predictions(ii, jj);
        }
        out.set_numeric_column(model.columns[j], std::move(v));
    }
    return out;
}

int cell_color(double r, bool missing, double cutoff, int bins, double saturation) {
    if (missing || std::isnan(r)) return kCellMissing;
    const double a = std::abs(r);
    if (a <= cutoff) return 0;
    const double t = saturation > cutoff ? (a - cutoff) / (saturation - cutoff) : 1.0;
    const int k = std::clamp(static_cast<int>(std::ceil(t * bins)), 1, bins);
    return r > 0.0 ? k : -k;
}

std::string cell_color_name(int code) {
    if (code == kCellMissing) return "missing";
    if (code == 0) return "inlier";
    if (code > 0) return "pos_" + std::to_string(code);
    return "neg_" + std::to_string(-code);
}

CellmapGrid cellmap_data(const CellFlags& flags, const std::optional<std::vector<std::int64_t>>& rows,
                         const std::optional<std::vector<std::string>>& columns, int bins) {
    if (bins < 1) throw InvalidArgument("bins must be positive");
    std::vector<Index> ri, ci;
    if (rows) {
        for (auto id : *rows) {
            const auto it = std::find(flags.row_ids.begin(), flags.row_ids.end(), id);
            if (it == flags.row_ids.end()) throw InvalidArgument("unknown row id: " + std::to_string(id));
            ri.push_back(static_cast<Index>(it - flags.row_ids.begin()));
        }
    } else {
        for (std::size_t i = 0; i < flags.row_ids.size(); ++i) ri.push_back(static_cast<Index>(i));
    }
    if (columns) {
        for (const auto& c : *columns) {
            const auto it = std::find(flags.columns.begin(), flags.columns.end(), c);
            if (it == flags.columns.end()) throw InvalidArgument("unknown column: " + c);
            ci.push_back(static_cast<Index>(it - flags.columns.begin()));
        }
    } else {
        for (std::size_t j = 0; j < flags.columns.size(); ++j) ci.push_back(static_cast<Index>(j));
    }
    CellmapGrid g;
    g.bins = bins;
    g.cutoff = flags.cutoff;
    g.codes.resize(static_cast<Index>(ri.size()), static_cast<Index>(ci.size()));
    g.std_residuals.resize(g.codes.rows(), g.codes.cols());
    for (Index i : ri) {
        g.row_ids.push_back(flags.row_ids[static_cast<std::size_t>(i)]);
        g.row_labels.push_back(flags.row_names[static_cast<std::size_t>(i)]);
    }
    for (Index j : ci) g.column_labels.push_back(flags.columns[static_cast<std::size_t>(j)]);
    for (std::size_t a = 0; a < ri.size(); ++a) {
        for (std::size_t b = 0; b < ci.size(); ++b) {
            const Index i = ri[a], j = ci[b];
            const double r = flags.std_residuals(i, j);
            const bool miss = flags.missing(i, j);
            // Unflagged observed cells are inliers whatever their residual.
            const int code = miss ? kCellMissing : (flags.flags(i, j) ? cell_color(r, false, flags.cutoff, bins, g.saturation) : 0);
            g.codes(static_cast<Index>(a), static_cast<Index>(b)) = code;
            g.std_residuals(static_cast<Index>(a), static_cast<Index>(b)) = r;
        }
    }
    return g;
}

namespace {

// Gaussian conditional mean and variance of coordinate j given the coordinates in S.
std::pair<double, double> conditional(const Vector& mu, const Matrix& S, const std::vector<Index>& given,
                                      const Eigen::RowVectorXd& x, Index j) {
    if (given.empty()) return {mu(j), S(j, j)};
    const auto m = static_cast<Index>(given.size());
    Matrix Soo(m, m);
    Vector soj(m), d(m);
    for (Index a = 0; a < m; ++a) {
        const Index ka = given[static_cast<std::size_t>(a)];
        soj(a) = S(ka, j);
        d(a) = x(ka) - mu(ka);
        for (Index b = 0; b < m; ++b) Soo(a, b) = S(ka, given[static_cast<std::size_t>(b)]);
    }
    const Eigen::LLT<Matrix> llt(Soo);
    const Vector beta = llt.solve(soj);
    return {mu(j) + beta.dot(d), std::max(S(j, j) - beta.dot(soj), 1e-300)};
}

std::vector<Index> others(const BoolMatrix& W, Index i, Index j) {
    std::vector<Index> s;
    for (Index k = 0; k < W.cols(); ++k) {
        if (k != j && W(i, k)) s.push_back(k);
    }
    return s;
}

void floor_eigenvalues(Matrix& S) {
    const Index p = S.rows();
    Eigen::SelfAdjointEigenSolver<Matrix> es(S);
    const double fl = 1e-6 * S.trace() / static_cast<double>(p);
    Vector ev = es.eigenvalues().cwiseMax(fl);
    S = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
    S = 0.5 * (S + S.transpose()).eval();
}

double cellmcd_objective(const Matrix& Z, const BoolMatrix& W, const Vector& mu, const Matrix& S, const Vector& q) {
    const Index n = Z.rows(), p = Z.cols();
    double obj = 0.0;
    for (Index i = 0; i < n; ++i) {
        std::vector<Index> o;
        for (Index k = 0; k < p; ++k) {
            if (W(i, k)) o.push_back(k);
        }
        if (o.empty()) continue;
        const auto m = static_cast<Index>(o.size());
        Matrix Soo(m, m);
        Vector d(m);
        for (Index a = 0; a < m; ++a) {
            d(a) = Z(i, o[static_cast<std::size_t>(a)]) - mu(o[static_cast<std::size_t>(a)]);
            for (Index b = 0; b < m; ++b) Soo(a, b) = S(o[static_cast<std::size_t>(a)], o[static_cast<std::size_t>(b)]);
        }
        const Eigen::LLT<Matrix> llt(Soo);
        const Matrix L = llt.matrixL();
        obj += 2.0 * L.diagonal().array().log().sum() + d.dot(llt.solve(d)) + static_cast<double>(m) * kLog2Pi;
    }
    for (Index j = 0; j < p; ++j) obj += q(j) * static_cast<double>(n - W.col(j).count());
    return obj;
}

}  // namespace

CellMCDFit fit_cellmcd(const Matrix& X, const CellMcdOptions& opt) {
    const Index n = X.rows();
    const Index p = X.cols();
    if (!(opt.alpha >= 0.5 && opt.alpha <= 1.0)) throw InvalidArgument("alpha must lie in [0.5, 1]");
    if (!(opt.cutoff_prob > 0.0 && opt.cutoff_prob < 1.0)) throw InvalidArgument("cutoff_prob must lie in (0, 1)");
    if (p < 1 || n <= 5 * p) throw InvalidArgument("cellwise MCD needs n > 5p");
    const Index h = static_cast<Index>(std::floor(opt.alpha * static_cast<double>(n)));
    CellMCDFit fit;
    fit.h = h;
    fit.cutoff_prob = opt.cutoff_prob;
    fit.cutoff = std::sqrt(chi2_quantile(opt.cutoff_prob, 1.0));
    fit.data = X;
    fit.missing = X.array().isNaN() || !X.array().isFinite();

    // Robust standardization.
    Vector loc(p), scl(p);
    const OneStepSpec spec = cellwise_one_step_spec();
    for (Index j = 0; j < p; ++j) {
        const auto v = observed(X, j);
        if (static_cast<Index>(v.size()) < h) {
            throw InvalidArgument("column " + std::to_string(j) + " has fewer than h observed cells");
        }
        UnivariateFit u;
        try {
            u = fit_one_step_m(v, spec);
        } catch (const Error&) {
            throw Error("zero robust scale in column " + std::to_string(j));
        }
        loc(j) = u.location;
        scl(j) = u.scale;
    }
    Matrix Z = (X.rowwise() - loc.transpose()).array().rowwise() / scl.transpose().array();
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < p; ++j) {
            if (fit.missing(i, j)) Z(i, j) = kNaN;
        }
    }

    // Start: DetMCD on the DDC-imputed standardized data.
    Vector mu;
    Matrix S;
    {
        std::vector<std::string> names;
        for (Index j = 0; j < p; ++j) names.push_back("v" + std::to_string(j));
        const Frame zf = Frame::from_matrix(Z, names);
        DdcOptions dopt;
        dopt.cell_cutoff_prob = opt.cutoff_prob;
        dopt.exec = opt.exec;
        Matrix Zi;
        if (p >= 2) {
            const DdcModel ddc = fit_ddc(zf, dopt);
            if (ddc.columns.size() != static_cast<std::size_t>(p)) throw Error("exact-fit or degenerate data: unusable column");
            Zi = ddc_impute(ddc, zf).numeric_matrix(names);
        } else {
            Zi = Z;
            for (Index i = 0; i < n; ++i) {
                if (std::isnan(Zi(i, 0))) Zi(i, 0) = 0.0;
            }
        }
        DetMcdOptions mo;
        mo.alpha = opt.alpha;
        mo.exec = opt.exec;
        const LocationScatter init = fit_det_mcd(Zi, mo);
        mu = init.location;
        S = init.scatter;
        floor_eigenvalues(S);
    }
    const Matrix P0 = S.inverse();
    fit.penalties.resize(p);
    for (Index j = 0; j < p; ++j) {
        fit.penalties(j) = chi2_quantile(opt.cutoff_prob, 1.0) + kLog2Pi - std::log(P0(j, j));
    }
    const Vector& q = fit.penalties;

    BoolMatrix W = !fit.missing;
    double obj = cellmcd_objective(Z, W, mu, S, q);
    fit.objective_trace.push_back(obj);
    const bool parallel = opt.exec == Exec::parallel;
    std::vector<Index> col_order(static_cast<std::size_t>(p));
    fit.converged = false;
    for (int it = 0; it < opt.max_iterations; ++it) {
        // W-step, column by column, fewest unflagged cells first.
        BoolMatrix Wn = W;
        for (Index j = 0; j < p; ++j) col_order[static_cast<std::size_t>(j)] = j;
        std::stable_sort(col_order.begin(), col_order.end(),
                         [&](Index a, Index b) { return Wn.col(a).count() < Wn.col(b).count(); });
        for (Index j : col_order) {
            Vector delta(n);
#pragma omp parallel for schedule(static) if (parallel)
            for (Index i = 0; i < n; ++i) {
                if (fit.missing(i, j)) {
                    delta(i) = std::numeric_limits<double>::infinity();
                    continue;
                }
                const auto [m, v] = conditional(mu, S, others(Wn, i, j), Z.row(i), j);
                const double r = Z(i, j) - m;
                delta(i) = r * r / v + std::log(v) + kLog2Pi;
            }
            Index good = 0;
            for (Index i = 0; i < n; ++i) good += delta(i) <= q(j) ? 1 : 0;
            if (good >= h) {
                for (Index i = 0; i < n; ++i) Wn(i, j) = delta(i) <= q(j);
            } else {
                std::vector<Index> order(static_cast<std::size_t>(n));
                for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
                std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return delta(a) < delta(b); });
                Wn.col(j).setConstant(false);
                for (Index k = 0; k < h; ++k) Wn(order[static_cast<std::size_t>(k)], j) = true;
            }
        }
        // M-step: conditional imputation with the conditional covariance correction.
        Matrix Zi = Z;
        Matrix bias = Matrix::Zero(p, p);
        for (Index i = 0; i < n; ++i) {
            std::vector<Index> o, mis;
            for (Index k = 0; k < p; ++k) (Wn(i, k) ? o : mis).push_back(k);
            if (mis.empty()) continue;
            if (o.empty()) {
                Zi.row(i) = mu.transpose();
                bias += S;
                continue;
            }
            const auto mo = static_cast<Index>(o.size()), mm = static_cast<Index>(mis.size());
            Matrix Soo(mo, mo), Smo(mm, mo), Smm(mm, mm);
            Vector d(mo);
            for (Index a = 0; a < mo; ++a) {
                d(a) = Z(i, o[static_cast<std::size_t>(a)]) - mu(o[static_cast<std::size_t>(a)]);
                for (Index b = 0; b < mo; ++b) Soo(a, b) = S(o[static_cast<std::size_t>(a)], o[static_cast<std::size_t>(b)]);
            }
            for (Index a = 0; a < mm; ++a) {
                for (Index b = 0; b < mo; ++b) Smo(a, b) = S(mis[static_cast<std::size_t>(a)], o[static_cast<std::size_t>(b)]);
                for (Index b = 0; b < mm; ++b) Smm(a, b) = S(mis[static_cast<std::size_t>(a)], mis[static_cast<std::size_t>(b)]);
            }
            const Eigen::LLT<Matrix> llt(Soo);
            const Vector pred = Smo * llt.solve(d);
            const Matrix cond = Smm - Smo * llt.solve(Smo.transpose());
            for (Index a = 0; a < mm; ++a) {
                const Index ja = mis[static_cast<std::size_t>(a)];
                Zi(i, ja) = mu(ja) + pred(a);
                for (Index b = 0; b < mm; ++b) bias(ja, mis[static_cast<std::size_t>(b)]) += cond(a, b);
            }
        }
        const Vector mun = column_means(Zi);
        const Matrix C = Zi.rowwise() - mun.transpose();
        Matrix Sn = (C.transpose() * C + bias) / static_cast<double>(n);
        floor_eigenvalues(Sn);
        const double objn = cellmcd_objective(Z, Wn, mun, Sn, q);
        if (objn > obj) {
            fit.warnings.push_back("objective increased at iteration " + std::to_string(it + 1) + "; previous iterate kept");
            fit.converged = true;
            break;
        }
        const double change = std::abs(obj - objn) / std::max(std::abs(obj), 1e-300);
        W = std::move(Wn);
        mu = mun;
        S = Sn;
        obj = objn;
        fit.objective_trace.push_back(obj);
        if (change < opt.tolerance) {
            fit.converged = true;
            break;
        }
    }
    if (!fit.converged) fit.warnings.push_back("cellwise MCD did not converge");

    // Conditional predictions of every cell given the other unflagged cells of its row.
    Matrix pred(n, p), sd(n, p);
#pragma omp parallel for schedule(static) if (parallel)
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < p; ++j) {
            const auto [m, v] = conditional(mu, S, others(W, i, j), Z.row(i), j);
            pred(i, j) = m;
            sd(i, j) = std::sqrt(v);
        }
    }
    fit.W = W;
    fit.location = loc + scl.cwiseProduct(mu);
    fit.scatter = scl.asDiagonal() * S * scl.asDiagonal();
    fit.predictions = (pred.array().rowwise() * scl.transpose().array()).rowwise() + loc.transpose().array();
    fit.conditional_sd = sd.array().rowwise() * scl.transpose().array();
    fit.std_residuals = (Z - pred).array() / sd.array();
    fit.imputed = X;
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < p; ++j) {
            if (!W(i, j)) fit.imputed(i, j) = fit.predictions(i, j);
            if (fit.missing(i, j)) fit.std_residuals(i, j) = kNaN;
        }
    }
    return fit;
}

std::string to_string(CellMcdPlot t) {
    switch (t) {
    case CellMcdPlot::indexplot: return "indexplot";
    case CellMcdPlot::residuals_vs_variable: return "residuals_vs_variable";
    case CellMcdPlot::residuals_vs_predictions: return "residuals_vs_predictions";
    case CellMcdPlot::variable_vs_predictions: return "variable_vs_predictions";
    case CellMcdPlot::bivariate: return "bivariate";
    }
    return "indexplot";
}

CellMcdPlot parse_cellmcd_plot(const std::string& name) {
    for (auto t : {CellMcdPlot::indexplot, CellMcdPlot::residuals_vs_variable, CellMcdPlot::residuals_vs_predictions,
                   CellMcdPlot::variable_vs_predictions, CellMcdPlot::bivariate}) {
        if (to_string(t) == name) return t;
    }
    throw InvalidArgument("unknown plot type: " + name);
}

Matrix tolerance_ellipse(const Vector& center, const Matrix& S, double prob, int points) {
    if (center.size() != 2 || S.rows() != 2 || S.cols() != 2) throw InvalidArgument("ellipse needs a 2 x 2 scatter");
    if (points < 3) throw InvalidArgument("ellipse needs at least 3 points");
    const Eigen::LLT<Matrix> llt(S);
    if (llt.info() != Eigen::Success) throw Error("singular scatter");
    const Matrix L = llt.matrixL();
    const double r = std::sqrt(chi2_quantile(prob, 2.0));
    Matrix E(2, points);
    for (int k = 0; k < points; ++k) {
        const double t = 2.0 * std::numbers::pi * k / (points - 1);
        Vector u(2);
        u << r * std::cos(t), r * std::sin(t);
        E.col(k) = center + L * u;
    }
    return E;
}

CellMcdPlotData cellmcd_plot_data(const CellMCDFit& fit, CellMcdPlot type, Index v, std::optional<Index> w,
                                  double annotation_quantile) {
    const Index n = fit.data.rows();
    const Index p = fit.data.cols();
    if (v < 0 || v >= p) throw InvalidArgument("variable index out of range");
    if (type == CellMcdPlot::bivariate) {
        if (!w) throw InvalidArgument("bivariate plot needs a second variable");
        if (*w < 0 || *w >= p || *w == v) throw InvalidArgument("second variable index out of range");
    }
    if (!(annotation_quantile > 0.0 && annotation_quantile < 1.0)) throw InvalidArgument("annotation_quantile must lie in (0, 1)");
    CellMcdPlotData d;
    d.type = type;
    const double c = fit.cutoff;
    const double ac = std::sqrt(chi2_quantile(annotation_quantile, 1.0));
    auto band = [&](Index j, double k) {
        const double s = std::sqrt(fit.scatter(j, j));
        return std::vector<double>{fit.location(j) - k * s, fit.location(j) + k * s};
    };
    auto outside = [](double x, const std::vector<double>& lim) {
        return lim.size() == 2 && (x < lim[0] || x > lim[1]);
    };
    const Vector res = fit.std_residuals.col(v);
    switch (type) {
    case CellMcdPlot::indexplot:
        d.x = Vector::LinSpaced(n, 1.0, static_cast<double>(n));
        d.y = res;
        d.hlines = {-c, c};
        for (Index i = 0; i < n; ++i) {
            if (std::abs(d.y(i)) > ac) d.annotated.push_back(i);
        }
        break;
    case CellMcdPlot::residuals_vs_variable:
    case CellMcdPlot::residuals_vs_predictions: {
        d.x = type == CellMcdPlot::residuals_vs_variable ? Vector(fit.data.col(v)) : Vector(fit.predictions.col(v));
        d.y = res;
        d.hlines = {-c, c};
        d.vlines = band(v, c);
        const auto va = band(v, ac);
        for (Index i = 0; i < n; ++i) {
            if (std::abs(d.y(i)) > ac || outside(d.x(i), va)) d.annotated.push_back(i);
        }
        break;
    }
    case CellMcdPlot::variable_vs_predictions: {
        d.x = fit.predictions.col(v);
        d.y = fit.data.col(v);
        d.hlines = band(v, c);
        d.vlines = band(v, c);
        const auto va = band(v, ac);
        for (Index i = 0; i < n; ++i) {
            if (outside(d.y(i), va) || outside(d.x(i), va)) d.annotated.push_back(i);
        }
        break;
    }
    case CellMcdPlot::bivariate: {
        const Index u = *w;
        d.x = fit.data.col(v);
        d.y = fit.data.col(u);
        d.vlines = band(v, c);
        d.hlines = band(u, c);
        Vector m(2);
        m << fit.location(v), fit.location(u);
        Matrix S2(2, 2);
        S2 << fit.scatter(v, v), fit.scatter(v, u), fit.scatter(u, v), fit.scatter(u, u);
        d.ellipse = tolerance_ellipse(m, S2, fit.cutoff_prob);
        const Matrix P = S2.inverse();
        const double lim = chi2_quantile(annotation_quantile, 2.0);
        for (Index i = 0; i < n; ++i) {
            Vector z(2);
            z << d.x(i) - m(0), d.y(i) - m(1);
            if (z.allFinite() && z.dot(P * z) > lim) d.annotated.push_back(i);
        }
        break;
    }
    }
    return d;
}

}  // namespace robustats
