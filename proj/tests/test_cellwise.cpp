// Copyright 2026 The robustats Authors
// SPDX-License-Identifier: Apache-2.0

#include "checks.hpp"
#include "robustats/cellwise.hpp"
#include "robustats/kernel.hpp"

#include "doctest.h"

#include <cmath>

using namespace robustats;
using namespace robustats::checks;

namespace {

// Correlated columns (pairwise correlation about 0.8) with planted cells.
Matrix correlated(std::uint64_t seed, Index n, Index p) {
    Rng rng(seed);
    const Vector f = normal_vector(rng, n);
    Matrix X = 0.5 * normal_matrix(rng, n, p);
    X.colwise() += f;
    for (Index j = 0; j < p; ++j) X.col(j) = X.col(j) * (j + 1.0) + Vector::Constant(n, 10.0 * j);
    return X;
}

const std::vector<std::pair<Index, Index>> kPlanted = {{3, 0}, {10, 2}, {25, 4}, {40, 1}};

Matrix with_planted(Matrix X) {
    for (const auto& [i, j] : kPlanted) X(i, j) += 8.0 * (j + 1.0);
    X(7, 3) = std::nan("");
    return X;
}

}  // namespace

TEST_SUITE("cellwise") {

TEST_CASE("cell color bins") {
    CHECK(cell_color(0.5, true, 2.0) == kCellMissing);
    CHECK(cell_color(std::nan(""), false, 2.0) == kCellMissing);
    CHECK(cell_color(-2.0, false, 2.0) == 0);
    CHECK(cell_color(2.1, false, 2.0) == 1);
    CHECK(cell_color(2.4, false, 2.0) == 1);
    CHECK(cell_color(2.41, false, 2.0) == 2);
    CHECK(cell_color(-3.9, false, 2.0) == -5);
    CHECK(cell_color(100.0, false, 2.0) == 5);
    CHECK(cell_color(3.0, false, 2.0, 2) == 1);
    CHECK(cell_color_name(kCellMissing) == "missing");
    CHECK(cell_color_name(0) == "inlier");
    CHECK(cell_color_name(3) == "pos_3");
    CHECK(cell_color_name(-2) == "neg_2");
}

TEST_CASE("DDC finds planted cells") {
    const Matrix X = with_planted(correlated(1, 80, 5));
    const Frame f = Frame::from_matrix(X, {"a", "b", "c", "d", "e"});
    const DdcModel m = fit_ddc(f);
    CHECK(m.cutoff == doctest::Approx(std::sqrt(chi2_quantile(0.99, 1.0))).epsilon(1e-12));
    const CellFlags& c = m.training;
    for (const auto& [i, j] : kPlanted) {
        CHECK(c.flags(i, j));
        CHECK(std::abs(c.std_residuals(i, j)) > c.cutoff);
    }
    CHECK(c.missing(7, 3));
    CHECK(!c.flags(7, 3));
    CHECK(std::isnan(c.std_residuals(7, 3)));
    CHECK(c.flags.count() <= 12);
    for (Index i = 0; i < c.flags.rows(); ++i) {
        for (Index j = 0; j < c.flags.cols(); ++j) {
            if (!c.missing(i, j)) CHECK(c.flags(i, j) == (std::abs(c.std_residuals(i, j)) > c.cutoff));
        }
    }
    const Frame imp = ddc_impute(m, f);
    CHECK(imp.column("d").values[7] == c.predictions(7, 3));
    CHECK(imp.column("a").values[3] == c.predictions(3, 0));
    CHECK(imp.column("a").values[0] == X(0, 0));
    const CellFlags again = ddc_predict(m, f);
    CHECK(rel_diff(again.predictions, c.predictions) < 1e-12);
}

TEST_CASE("cellmap grid") {
    const Matrix X = with_planted(correlated(2, 60, 5));
    const Frame f = Frame::from_matrix(X, {"a", "b", "c", "d", "e"},
                                       [] { std::vector<std::int64_t> v; for (int i = 0; i < 60; ++i) v.push_back(100 + i); return v; }());
    const DdcModel m = fit_ddc(f);
    const CellmapGrid g = cellmap_data(m.training, std::vector<std::int64_t>{103, 107}, std::vector<std::string>{"a", "d"}, 4);
    CHECK(g.codes.rows() == 2);
    CHECK(g.codes.cols() == 2);
    CHECK(g.row_ids == std::vector<std::int64_t>{103, 107});
    CHECK(g.codes(0, 0) > 0);
    CHECK(g.codes(1, 1) == kCellMissing);
    CHECK(g.bins == 4);
    CHECK_THROWS_AS(cellmap_data(m.training, std::vector<std::int64_t>{5}), InvalidArgument);
    CHECK_THROWS_AS(cellmap_data(m.training, std::nullopt, std::vector<std::string>{"zz"}), InvalidArgument);
    const CellmapGrid all = cellmap_data(m.training);
    CHECK(all.codes.rows() == 60);
    CHECK(all.codes.cols() == 5);
}

TEST_CASE("cellwise MCD finds planted cells") {
    const Matrix X = with_planted(correlated(3, 120, 5));
    const CellMCDFit fit = fit_cellmcd(X);
    CHECK(fit.converged);
    const BoolMatrix fl = fit.flags();
    for (const auto& [i, j] : kPlanted) CHECK(fl(i, j));
    CHECK(fit.missing(7, 3));
    CHECK(!fit.W(7, 3));
    CHECK(fl.count() <= 20);
    for (std::size_t k = 1; k < fit.objective_trace.size(); ++k) {
        CHECK(fit.objective_trace[k] <= fit.objective_trace[k - 1] + 1e-8 * std::abs(fit.objective_trace[k - 1]));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(fit.scatter);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    CHECK(std::isfinite(fit.imputed(7, 3)));
    CHECK(fit.imputed(0, 0) == X(0, 0));
}

TEST_CASE("tolerance ellipse") {
    Vector m(2);
    m << 1.0, -2.0;
    Matrix S(2, 2);
    S << 4.0, 1.0, 1.0, 2.0;
    const Matrix E = tolerance_ellipse(m, S, 0.975, 73);
    CHECK(E.cols() == 73);
    const Matrix P = S.inverse();
    for (Index k = 0; k < E.cols(); ++k) {
        const Vector z = E.col(k) - m;
        CHECK(z.dot(P * z) == doctest::Approx(7.377758908227871).epsilon(1e-10));
    }
    CHECK(rel_diff(E.col(0), E.col(72)) < 1e-12);
    CHECK_THROWS_AS(tolerance_ellipse(m, S, 0.975, 2), InvalidArgument);
}

TEST_CASE("cellwise MCD plot data") {
    const Matrix X = with_planted(correlated(4, 80, 3));
    const CellMCDFit fit = fit_cellmcd(X);
    const CellMcdPlotData idx = cellmcd_plot_data(fit, CellMcdPlot::indexplot, 0);
    CHECK(idx.x(0) == 1.0);
    CHECK(idx.hlines == std::vector<double>{-fit.cutoff, fit.cutoff});
    bool found = false;
    for (Index i : idx.annotated) found = found || i == 3;
    CHECK(found);
    const CellMcdPlotData bi = cellmcd_plot_data(fit, CellMcdPlot::bivariate, 0, 1);
    CHECK(bi.ellipse.rows() == 2);
    CHECK(bi.x.size() == 80);
    CHECK_THROWS_AS(cellmcd_plot_data(fit, CellMcdPlot::bivariate, 0), InvalidArgument);
    CHECK_THROWS_AS(cellmcd_plot_data(fit, CellMcdPlot::indexplot, 5), InvalidArgument);
    CHECK(parse_cellmcd_plot("residuals_vs_variable") == CellMcdPlot::residuals_vs_variable);
    CHECK(to_string(CellMcdPlot::variable_vs_predictions) == "variable_vs_predictions");
}

}

TEST_SUITE("cellwise") {

TEST_CASE("DDC flags exactly one planted cell") {
    Rng rng(51);
    const Vector a = normal_vector(rng, 200);
    const Vector e = normal_vector(rng, 200);
    Matrix X(200, 2);
    X.col(0) = a;
    X.col(1) = 0.95 * a + std::sqrt(1.0 - 0.95 * 0.95) * e;
    X(17, 1) += 10.0;
    DdcOptions o;
    o.cell_cutoff_prob = 0.9999;
    const DdcModel m = fit_ddc(Frame::from_matrix(X, {"A", "B"}), o);
    CHECK(m.training.flags.count() == 1);
    CHECK(m.training.flags(17, 1));
    CHECK(m.training.std_residuals(17, 1) > 0.0);
}

TEST_CASE("DDC on new rows") {
    const Matrix X = with_planted(correlated(52, 80, 5));
    const Frame f = Frame::from_matrix(X, {"a", "b", "c", "d", "e"});
    const DdcModel m = fit_ddc(f);
    const CellFlags one = ddc_predict(m, f.select_rows({3}));
    CHECK((one.flags.row(0) == m.training.flags.row(3)).all());
    Matrix med = m.location.transpose();
    const CellFlags central = ddc_predict(m, Frame::from_matrix(med, {"a", "b", "c", "d", "e"}));
    CHECK(central.flags.count() == 0);
    Matrix planted = med;
    planted(0, 2) += 8.0 * m.scale(2);
    const CellFlags single = ddc_predict(m, Frame::from_matrix(planted, {"a", "b", "c", "d", "e"}));
    CHECK(single.flags.count() == 1);
    CHECK(single.flags(0, 2));
    CHECK_THROWS(ddc_predict(m, Frame::from_matrix(med, {"a", "b", "c", "d", "zz"})));
}

TEST_CASE("DDC imputation") {
    const Matrix clean = correlated(53, 80, 4);
    const Frame cf = Frame::from_matrix(clean, {"a", "b", "c", "d"});
    const DdcModel cm = fit_ddc(cf);
    const Frame same = ddc_impute(cm, cf);
    for (Index i = 0; i < 80; ++i) {
        for (Index j = 0; j < 4; ++j) {
            if (!cm.training.flags(i, j)) CHECK(same.numeric_matrix()(i, j) == clean(i, j));
        }
    }
    const Matrix X = with_planted(correlated(53, 80, 5));
    const Frame f = Frame::from_matrix(X, {"a", "b", "c", "d", "e"});
    const DdcModel m = fit_ddc(f);
    const Frame imp = ddc_impute(m, f);
    CHECK(std::isfinite(imp.column("d").values[7]));
    const CellFlags after = ddc_predict(m, imp);
    CHECK(std::abs(after.std_residuals(3, 0)) < after.cutoff);
    CHECK(std::abs(imp.column("a").values[3] - m.training.predictions(3, 0)) < std::abs(X(3, 0) - m.training.predictions(3, 0)));
}

TEST_CASE("DDC flags are invariant under column rescaling") {
    const Matrix X = with_planted(correlated(54, 80, 5));
    Matrix Y = X;
    for (Index j = 0; j < 5; ++j) Y.col(j) = Y.col(j) * (j % 2 ? -3.0 : 0.25) + Vector::Constant(80, 7.0 * j);
    const DdcModel a = fit_ddc(Frame::from_matrix(X));
    const DdcModel b = fit_ddc(Frame::from_matrix(Y));
    CHECK((a.training.flags == b.training.flags).all());
}

TEST_CASE("cell color is a function of flag, sign, size and missingness") {
    for (int k = -400; k <= 400; ++k) {
        const double r = k / 40.0;
        const int c = cell_color(r, false, 2.5);
        if (std::abs(r) <= 2.5) {
            CHECK(c == 0);
        } else {
            CHECK((c > 0) == (r > 0));
            CHECK(std::abs(c) >= 1);
            CHECK(std::abs(c) <= 5);
        }
        CHECK(cell_color(r, true, 2.5) == kCellMissing);
    }
    CHECK(cell_color(10.0, false, 2.5) == 5);
}

TEST_CASE("cellwise MCD on clean Gaussian data") {
    Rng rng(55);
    Matrix X = normal_matrix(rng, 500, 4);
    X.col(1) += 0.6 * X.col(0);
    const CellMCDFit fit = fit_cellmcd(X);
    CHECK(static_cast<double>(fit.flags().count()) / 2000.0 < 0.03);
    CHECK(rel_diff(fit.location, column_means(X)) < 0.1);
    const Matrix C = covariance(X);
    CHECK((fit.scatter - C).norm() / C.norm() < 0.1);
    for (Index j = 0; j < 4; ++j) CHECK(fit.W.col(j).count() >= fit.h);
}

TEST_CASE("cellwise MCD flags exactly one planted cell") {
    Rng rng(56);
    Matrix X = normal_matrix(rng, 300, 3);
    X.col(2) += 0.7 * X.col(1);
    CellMcdOptions o;
    o.cutoff_prob = 0.9999;
    X(40, 1) += 10.0;
    const CellMCDFit fit = fit_cellmcd(X, o);
    CHECK(fit.flags().count() == 1);
    CHECK(fit.flags()(40, 1));
}

TEST_CASE("bivariate ellipse of the identity") {
    const Matrix E = tolerance_ellipse(Vector::Zero(2), Matrix::Identity(2, 2), 0.99);
    for (Index k = 0; k < E.cols(); ++k) CHECK(E.col(k).norm() == doctest::Approx(3.0348542587702925).epsilon(1e-10));
}

}
