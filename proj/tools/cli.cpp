// Copyright 2026 The robustats Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include "robustats/cellwise.hpp"
#include "robustats/covariance.hpp"
#include "robustats/frame.hpp"
#include "robustats/kernel.hpp"
#include "robustats/pca.hpp"
#include "robustats/preprocessing.hpp"
#include "robustats/regression.hpp"
#include "robustats/univariate.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>

namespace robustats::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string input;
    std::string dataset;
    std::string out = ".";
    std::string label_column;
    std::vector<std::string> na_markers;
    int threads = 0;
    bool svg = false;
    std::uint64_t seed = 0;
};

/// Collects artifacts, warnings and the summary of one run.
struct Context {
    Common common;
    std::string command;
    json parameters = json::object();
    json summary = json::object();
    std::vector<std::string> outputs;
    std::vector<std::string> warnings;
    bool uses_seed = false;

    fs::path path(const std::string& name) const { return fs::path(common.out) / name; }

    void write_text(const std::string& name, const std::string& content) {
        std::ofstream f(path(name), std::ios::binary);
        if (!f) throw Error("cannot write " + path(name).string());
        f << content;
        if (!f) throw Error("cannot write " + path(name).string());
        outputs.push_back(name);
    }

    void write_frame(const std::string& name, const Frame& frame, bool ids = true) {
        write_text(name, format_csv(frame, ids, ids));
    }

    void write_json(const std::string& name, const json& j) { write_text(name, j.dump(2) + "\n"); }

    /// Plot CSV plus sidecar, and the SVG rendering when requested.
    void write_plot(const std::string& stem, const std::string& kind, const Frame& frame, json sidecar) {
        json side;
        side["kind"] = kind;
        for (auto& [k, v] : sidecar.items()) side[k] = v;
        write_frame(stem + ".csv", frame);
        write_json(stem + ".json", side);
        if (common.svg) write_text(stem + ".svg", render_svg(path(stem + ".csv").string(), kind));
    }

    void add_warnings(const std::vector<std::string>& w) {
        warnings.insert(warnings.end(), w.begin(), w.end());
    }
};

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

json to_json(const Matrix& M) {
    json rows = json::array();
    for (Index i = 0; i < M.rows(); ++i) rows.push_back(to_std(M.row(i).transpose()));
    return rows;
}

Column numeric_column(const std::string& name, const Vector& v) {
    return Column::numeric(name, to_std(v));
}

Column text_column(const std::string& name, std::vector<std::string> cells) {
    std::vector<std::uint8_t> na(cells.size(), 0);
    return Column::textual(name, std::move(cells), std::move(na));
}

Frame promote_labels(const Frame& f, const std::string& name) {
    std::vector<Column> cols;
    std::vector<std::string> labels;
    for (const auto& c : f.columns()) {
        if (c.name != name) {
            cols.push_back(c);
            continue;
        }
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c.missing(i)) labels.emplace_back();
            else if (c.kind == ColumnKind::text) labels.push_back(c.text[i]);
            else labels.push_back(format_double(c.values[i]));
        }
    }
    return Frame(std::move(cols), f.row_ids(), std::move(labels));
}

Frame load_input(const Common& c) {
    if (!c.dataset.empty()) {
        if (!c.input.empty()) throw UsageError("give either an input CSV or --dataset, not both");
        return load_dataset(c.dataset).data;
    }
    if (c.input.empty()) throw UsageError("an input CSV or --dataset is required");
    CsvOptions o;
    if (!c.na_markers.empty()) o.na_markers = c.na_markers;
    o.id_column = "row_id";
    Frame f = read_csv(c.input, o);
    const std::string label = c.label_column.empty() ? "row_label" : c.label_column;
    if (f.has_column(label)) return promote_labels(f, label);
    if (!c.label_column.empty()) throw InvalidArgument("unknown label column: " + c.label_column);
    return f;
}

std::vector<std::string> numeric_names(const Frame& f, const std::vector<std::string>& requested) {
    if (requested.empty()) return f.numeric_column_names();
    for (const auto& name : requested) {
        if (!f.has_column(name)) throw InvalidArgument("unknown column: " + name);
        if (f.column(name).kind != ColumnKind::numeric) {
            throw InvalidArgument("column is not numeric: " + name);
        }
    }
    return requested;
}

struct Selection {
    Frame rows;
    std::vector<std::string> names;
    Matrix X;
};

/// Complete cases of the numeric columns.
Selection complete_cases(Context& ctx, const Frame& f, const std::vector<std::string>& requested) {
    Selection s;
    s.names = numeric_names(f, requested);
    if (s.names.empty()) throw InvalidArgument("no numeric columns");
    s.rows = f.drop_missing_rows(s.names);
    const Index dropped = f.n_rows() - s.rows.n_rows();
    if (dropped > 0) {
        ctx.warnings.push_back("dropped " + std::to_string(dropped) + " rows with missing values");
    }
    s.X = s.rows.numeric_matrix(s.names);
    return s;
}

Frame row_frame(const Frame& rows, std::vector<Column> cols) {
    return Frame(std::move(cols), rows.row_ids(), rows.row_labels());
}

json row_ref(const Frame& f, Index i) {
    json j;
    j["row_id"] = f.row_ids()[static_cast<std::size_t>(i)];
    j["label"] = f.row_name(i);
    return j;
}

std::vector<std::int64_t> ids_where(const Frame& f, const std::vector<bool>& mask) {
    std::vector<std::int64_t> ids;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) ids.push_back(f.row_ids()[i]);
    }
    return ids;
}

// Subcommands

struct CleanArgs {
    CleanThresholds t;
};

void run_clean(Context& ctx, const CleanArgs& a) {
    ctx.parameters["frac_na_row"] = a.t.frac_na_row;
    ctx.parameters["frac_na_col"] = a.t.frac_na_col;
    ctx.parameters["min_unique"] = a.t.min_unique;
    const Frame f = load_input(ctx.common);
    const CleanResult r = clean_dataset(f, a.t);
    ctx.write_frame("cleaned.csv", r.data);
    ctx.summary = json::parse(r.report.to_json());
    ctx.summary["n_rows"] = r.data.n_rows();
    ctx.summary["n_cols"] = r.data.n_cols();
}

struct TransformArgs {
    std::vector<std::string> columns;
    std::string method = "auto";
    std::string suffix;
    bool no_standardize = false;
};

void run_transform(Context& ctx, const TransformArgs& a) {
    ctx.parameters["columns"] = a.columns;
    ctx.parameters["method"] = a.method;
    ctx.parameters["suffix"] = a.suffix;
    ctx.parameters["standardize"] = !a.no_standardize;
    const PowerMethod method = parse_power_method(a.method);
    Frame f = load_input(ctx.common);
    const auto names = numeric_names(f, a.columns);
    PowerTransformOptions opts;
    opts.standardize = !a.no_standardize;
    json cols = json::object();
    for (const auto& name : names) {
        const Column& c = f.column(name);
        std::vector<double> obs;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (!c.missing(i)) obs.push_back(c.values[i]);
        }
        const PowerTransform t = fit_power_transform(obs, method, opts);
        auto values = apply_power_transform(t, c.values);
        f.set_numeric_column(name + a.suffix, std::move(values));
        json j;
        j["method"] = to_string(t.method);
        j["lambda_raw"] = t.lambda_raw;
        j["lambda_rew"] = t.lambda_rew;
        j["pre_location"] = t.pre_location;
        j["pre_scale"] = t.pre_scale;
        j["post_location"] = t.post_location;
        j["post_scale"] = t.post_scale;
        j["output_column"] = name + a.suffix;
        cols[name] = j;
    }
    ctx.write_frame("transformed.csv", f);
    ctx.summary["columns"] = cols;
}

struct ScaleArgs {
    std::vector<std::string> columns;
    std::string method = "umcd";
    bool no_centering = false;
    bool no_scaling = false;
};

void run_scale(Context& ctx, const ScaleArgs& a) {
    ctx.parameters["columns"] = a.columns;
    ctx.parameters["method"] = a.method;
    ctx.parameters["with_centering"] = !a.no_centering;
    ctx.parameters["with_scaling"] = !a.no_scaling;
    const UnivariateMethod method = parse_univariate_method(a.method);
    Frame f = load_input(ctx.common);
    const auto names = numeric_names(f, a.columns);
    const ScaleResult r = robust_scale(f.select_columns(names), method, !a.no_centering, !a.no_scaling);
    json params = json::array();
    for (const auto& p : r.parameters) {
        f.set_numeric_column(p.column, r.data.column(p.column).values);
        params.push_back({{"column", p.column}, {"location", p.location}, {"scale", p.scale}});
    }
    ctx.write_frame("scaled.csv", f);
    ctx.summary["parameters"] = params;
}

struct CovArgs {
    std::vector<std::string> columns;
    std::string method = "fastmcd";
    double alpha = 0.75;
};

void run_cov(Context& ctx, const CovArgs& a) {
    ctx.parameters["columns"] = a.columns;
    ctx.parameters["method"] = a.method;
    ctx.parameters["alpha"] = a.alpha;
    const CovMethod method = parse_cov_method(a.method);
    ctx.uses_seed = method == CovMethod::fastmcd;
    const Frame f = load_input(ctx.common);
    const Selection s = complete_cases(ctx, f, a.columns);
    const LocationScatter fit = fit_covariance(s.X, method, a.alpha, ctx.common.seed);
    ctx.add_warnings(fit.warnings);
    const DDPlotData dd = distance_distance_data(fit, s.X);
    std::vector<double> flag(static_cast<std::size_t>(s.X.rows()));
    std::vector<bool> mask(flag.size());
    for (std::size_t i = 0; i < flag.size(); ++i) {
        mask[i] = dd.flags(static_cast<Index>(i));
        flag[i] = mask[i] ? 1.0 : 0.0;
    }
    ctx.write_plot("ddplot", "ddplot",
                   row_frame(s.rows, {numeric_column("md", dd.classical_distances),
                                      numeric_column("rd", dd.robust_distances),
                                      Column::numeric("flagged", flag)}),
                   {{"cutoff", dd.cutoff}, {"method", to_string(fit.method)}});
    Index imax = 0;
    dd.robust_distances.maxCoeff(&imax);
    ctx.summary["method"] = to_string(fit.method);
    ctx.summary["columns"] = s.names;
    ctx.summary["n"] = s.X.rows();
    ctx.summary["h"] = fit.h;
    ctx.summary["location"] = to_std(fit.location);
    ctx.summary["scatter"] = to_json(fit.scatter);
    ctx.summary["objective"] = fit.objective;
    ctx.summary["cutoff"] = dd.cutoff;
    ctx.summary["n_flagged"] = std::count(mask.begin(), mask.end(), true);
    ctx.summary["flagged_rows"] = ids_where(s.rows, mask);
    json top = row_ref(s.rows, imax);
    top["rd"] = dd.robust_distances(imax);
    top["md"] = dd.classical_distances(imax);
    ctx.summary["max_robust_distance"] = top;
}

struct RegArgs {
    std::vector<std::string> columns;
    std::string response;
    std::string method = "mm";
    double alpha = 0.5;
    double efficiency = 0.95;
};

void run_reg(Context& ctx, const RegArgs& a) {
    ctx.parameters["columns"] = a.columns;
    ctx.parameters["response"] = a.response;
    ctx.parameters["method"] = a.method;
    ctx.parameters["alpha"] = a.alpha;
    ctx.parameters["efficiency"] = a.efficiency;
    const RegMethod method = parse_reg_method(a.method);
    ctx.uses_seed = true;
    const Frame f = load_input(ctx.common);
    if (!f.has_column(a.response)) throw InvalidArgument("unknown response column: " + a.response);
    std::vector<std::string> predictors = a.columns;
    if (predictors.empty()) {
        for (const auto& n : f.numeric_column_names()) {
            if (n != a.response) predictors.push_back(n);
        }
    }
    if (std::find(predictors.begin(), predictors.end(), a.response) != predictors.end()) {
        throw UsageError("the response cannot also be a predictor");
    }
    auto all = predictors;
    all.push_back(a.response);
    const Selection s = complete_cases(ctx, f, all);
    const Matrix X = s.X.leftCols(s.X.cols() - 1);
    const Vector y = s.X.col(s.X.cols() - 1);
    RegressionFit fit;
    switch (method) {
    case RegMethod::lts: {
        LtsOptions o;
        o.alpha = a.alpha;
        o.seed = ctx.common.seed;
        fit = fit_fast_lts(X, y, o);
        break;
    }
    case RegMethod::s: {
        SOptions o;
        o.seed = ctx.common.seed;
        fit = fit_s_regression(X, y, o);
        break;
    }
    case RegMethod::mm: {
        MMOptions o;
        o.efficiency = a.efficiency;
        o.s.seed = ctx.common.seed;
        fit = fit_mm_regression(X, y, o);
        break;
    }
    }
    ctx.add_warnings(fit.warnings);
    const OutlierMapData m = outlier_map_data(fit, X, y);
    std::vector<std::string> cls;
    std::map<std::string, int> counts = {{"regular", 0}, {"vertical", 0}, {"good_leverage", 0}, {"bad_leverage", 0}};
    std::vector<bool> bad;
    for (PointClass c : m.classes) {
        cls.push_back(to_string(c));
        ++counts[cls.back()];
        bad.push_back(c == PointClass::bad_leverage);
    }
    ctx.write_plot("outlier_map", "outlier_map",
                   row_frame(s.rows, {numeric_column("std_residual", m.std_residuals),
                                      numeric_column("x_distance", m.x_distances),
                                      text_column("class", cls)}),
                   {{"v_threshold", m.v_threshold}, {"h_threshold", m.h_threshold}});
    ctx.summary["method"] = to_string(fit.method);
    ctx.summary["response"] = a.response;
    ctx.summary["predictors"] = predictors;
    ctx.summary["n"] = X.rows();
    ctx.summary["intercept"] = fit.intercept;
    ctx.summary["coefficients"] = to_std(fit.coefficients);
    ctx.summary["residual_scale"] = fit.residual_scale;
    ctx.summary["objective"] = fit.objective;
    ctx.summary["converged"] = fit.converged;
    ctx.summary["iterations"] = fit.iterations;
    ctx.summary["h"] = fit.h;
    ctx.summary["class_counts"] = counts;
    ctx.summary["bad_leverage_rows"] = ids_where(s.rows, bad);
}

struct PcaArgs {
    std::vector<std::string> columns;
    std::string method = "robpca";
    int n_components = 0;
    double k_min = 0.8;
    double alpha = 0.75;
};

void run_pca(Context& ctx, const PcaArgs& a) {
    ctx.parameters["columns"] = a.columns;
    ctx.parameters["method"] = a.method;
    ctx.parameters["n_components"] = a.n_components > 0 ? json(a.n_components) : json(nullptr);
    ctx.parameters["k_min_var_explained"] = a.k_min;
    ctx.parameters["alpha"] = a.alpha;
    const PCAMethod method = parse_pca_method(a.method);
    ctx.uses_seed = method == PCAMethod::robpca;
    const Frame f = load_input(ctx.common);
    const Selection s = complete_cases(ctx, f, a.columns);
    std::optional<Index> q;
    if (a.n_components > 0) q = a.n_components;
    PCAFit fit;
    if (method == PCAMethod::robpca) {
        RobpcaOptions o;
        o.n_components = q;
        o.k_min_var_explained = a.k_min;
        o.alpha = a.alpha;
        o.seed = ctx.common.seed;
        fit = fit_robpca(s.X, o);
    } else {
        SphericalPcaOptions o;
        o.n_components = q;
        o.k_min_var_explained = a.k_min;
        fit = fit_spherical_pca(s.X, o);
    }
    ctx.add_warnings(fit.warnings);
    const PCAOutlierMapData m = pca_outlier_map_data(fit, s.X);
    std::vector<std::string> cls;
    std::map<std::string, int> counts = {{"regular", 0}, {"orthogonal", 0}, {"good_leverage", 0}, {"bad_leverage", 0}};
    std::vector<bool> bad;
    for (PCAClass c : m.classes) {
        cls.push_back(to_string(c));
        ++counts[cls.back()];
        bad.push_back(c == PCAClass::bad_leverage);
    }
    ctx.write_plot("pca_map", "pca_map",
                   row_frame(s.rows, {numeric_column("sd", m.score_distances),
                                      numeric_column("od", m.orthogonal_distances),
                                      text_column("class", cls)}),
                   {{"sd_cutoff", m.sd_cutoff}, {"od_cutoff", m.od_cutoff}});
    const Matrix T = scores(fit, s.X);
    std::vector<Column> score_cols;
    std::vector<Column> loading_cols = {text_column("variable", s.names)};
    for (Index k = 0; k < fit.n_components(); ++k) {
        const std::string name = "PC" + std::to_string(k + 1);
        score_cols.push_back(numeric_column(name, T.col(k)));
        loading_cols.push_back(numeric_column(name, fit.loadings.col(k)));
    }
    ctx.write_frame("scores.csv", row_frame(s.rows, std::move(score_cols)));
    std::vector<std::int64_t> var_ids(s.names.size());
    for (std::size_t j = 0; j < var_ids.size(); ++j) var_ids[j] = static_cast<std::int64_t>(j);
    ctx.write_frame("loadings.csv", Frame(std::move(loading_cols), var_ids), false);
    ctx.summary["method"] = to_string(fit.method);
    ctx.summary["columns"] = s.names;
    ctx.summary["n"] = s.X.rows();
    ctx.summary["n_components"] = fit.n_components();
    ctx.summary["h"] = fit.h;
    ctx.summary["center"] = to_std(fit.center);
    ctx.summary["eigenvalues"] = to_std(fit.eigenvalues);
    ctx.summary["explained_variance_ratio"] = to_std(fit.explained_variance_ratio);
    ctx.summary["sd_cutoff"] = fit.sd_cutoff;
    ctx.summary["od_cutoff"] = fit.od_cutoff;
    ctx.summary["class_counts"] = counts;
    ctx.summary["bad_leverage_rows"] = ids_where(s.rows, bad);
}

/// Wide grid of color codes; missing cells stay empty.
void write_cellmap(Context& ctx, const CellFlags& flags, const std::vector<std::int64_t>& rows, int bins) {
    std::optional<std::vector<std::int64_t>> subset;
    if (!rows.empty()) subset = rows;
    const CellmapGrid g = cellmap_data(flags, subset, std::nullopt, bins);
    std::vector<Column> cols;
    for (std::size_t j = 0; j < g.column_labels.size(); ++j) {
        std::vector<double> v(g.row_ids.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const int code = g.codes(static_cast<Index>(i), static_cast<Index>(j));
            v[i] = code == kCellMissing ? std::nan("") : code;
        }
        cols.push_back(Column::numeric(g.column_labels[j], std::move(v)));
    }
    ctx.write_plot("cellmap", "cellmap", Frame(std::move(cols), g.row_ids, g.row_labels),
                   {{"columns", g.column_labels},
                    {"bins", g.bins},
                    {"cutoff", g.cutoff},
                    {"saturation", g.saturation}});
}

/// One line per model cell in row-major order.
void write_cells(Context& ctx, const CellFlags& flags, const Matrix& values, int bins) {
    std::vector<double> ids, value, pred, res, flag;
    std::vector<std::string> labels, column, color;
    for (Index i = 0; i < flags.flags.rows(); ++i) {
        for (Index j = 0; j < flags.flags.cols(); ++j) {
            const bool miss = flags.missing(i, j);
            const bool flagged = flags.flags(i, j);
            ids.push_back(static_cast<double>(flags.row_ids[static_cast<std::size_t>(i)]));
            labels.push_back(flags.row_names[static_cast<std::size_t>(i)]);
            column.push_back(flags.columns[static_cast<std::size_t>(j)]);
            value.push_back(values(i, j));
            pred.push_back(flags.predictions(i, j));
            res.push_back(flags.std_residuals(i, j));
            flag.push_back(flagged ? 1.0 : 0.0);
            const int code = miss ? kCellMissing
                                  : (flagged ? cell_color(flags.std_residuals(i, j), false, flags.cutoff, bins) : 0);
            color.push_back(cell_color_name(code));
        }
    }
    std::vector<std::int64_t> pos(ids.size());
    for (std::size_t k = 0; k < pos.size(); ++k) pos[k] = static_cast<std::int64_t>(k);
    Frame f({Column::numeric("row_id", ids), text_column("row_label", labels),
             text_column("column", column), Column::numeric("value", value),
             Column::numeric("prediction", pred), Column::numeric("std_residual", res),
             Column::numeric("flag", flag), text_column("color_bin", color)},
            pos);
    ctx.write_frame("cells.csv", f, false);
}

json flag_counts(const CellFlags& flags) {
    json j = json::object();
    for (std::size_t c = 0; c < flags.columns.size(); ++c) {
        j[flags.columns[c]] = flags.flags.col(static_cast<Index>(c)).count();
    }
    return j;
}

struct DdcArgs {
    std::vector<std::string> columns;
    std::vector<std::int64_t> rows;
    DdcOptions o;
    int bins = 5;
};

void run_ddc(Context& ctx, const DdcArgs& a) {
    ctx.parameters["columns"] = a.columns;
    ctx.parameters["cell_cutoff_prob"] = a.o.cell_cutoff_prob;
    ctx.parameters["corr_lim"] = a.o.corr_lim;
    ctx.parameters["max_predictors"] = a.o.max_predictors;
    ctx.parameters["rows"] = a.rows;
    ctx.parameters["bins"] = a.bins;
    const Frame f = load_input(ctx.common);
    const Frame sub = f.select_columns(numeric_names(f, a.columns));
    const DdcModel model = fit_ddc(sub, a.o);
    const CellFlags& flags = model.training;
    write_cellmap(ctx, flags, a.rows, a.bins);
    write_cells(ctx, flags, sub.numeric_matrix(flags.columns), a.bins);
    ctx.write_frame("imputed.csv", ddc_impute(model, sub));
    std::vector<bool> row_mask;
    for (Index i = 0; i < flags.row_flags.size(); ++i) row_mask.push_back(flags.row_flags(i));
    ctx.summary["columns"] = model.columns;
    ctx.summary["dropped_columns"] = model.dropped_columns;
    ctx.summary["n"] = sub.n_rows();
    ctx.summary["cutoff"] = model.cutoff;
    ctx.summary["location"] = to_std(model.location);
    ctx.summary["scale"] = to_std(model.scale);
    ctx.summary["n_flagged_cells"] = flags.flags.count();
    ctx.summary["n_missing_cells"] = flags.missing.count();
    ctx.summary["flagged_cells_per_column"] = flag_counts(flags);
    ctx.summary["flagged_rows"] = ids_where(sub, row_mask);
}

struct CellMcdArgs {
    std::vector<std::string> columns;
    std::vector<std::int64_t> rows;
    CellMcdOptions o;
    std::vector<std::string> plots = {"indexplot"};
    std::string variable;
    std::string second_variable;
    double annotation_quantile = 0.99;
    int bins = 5;
};

Index variable_index(const std::vector<std::string>& names, const std::string& name) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw UsageError("unknown variable: " + name);
    return static_cast<Index>(it - names.begin());
}

void run_cellmcd(Context& ctx, const CellMcdArgs& a) {
    ctx.parameters["columns"] = a.columns;
    ctx.parameters["alpha"] = a.o.alpha;
    ctx.parameters["cutoff_prob"] = a.o.cutoff_prob;
    ctx.parameters["max_iterations"] = a.o.max_iterations;
    ctx.parameters["tolerance"] = a.o.tolerance;
    ctx.parameters["plots"] = a.plots;
    ctx.parameters["variable"] = a.variable;
    ctx.parameters["second_variable"] = a.second_variable;
    ctx.parameters["annotation_quantile"] = a.annotation_quantile;
    ctx.parameters["rows"] = a.rows;
    ctx.parameters["bins"] = a.bins;
    std::vector<CellMcdPlot> plots;
    for (const auto& p : a.plots) plots.push_back(parse_cellmcd_plot(p));
    const Frame f = load_input(ctx.common);
    const auto names = numeric_names(f, a.columns);
    const Frame sub = f.select_columns(names);
    const Matrix X = sub.numeric_matrix(names);
    const Index v = a.variable.empty() ? 0 : variable_index(names, a.variable);
    std::optional<Index> w;
    if (!a.second_variable.empty()) w = variable_index(names, a.second_variable);
    for (CellMcdPlot p : plots) {
        if (p == CellMcdPlot::bivariate && !w) throw UsageError("bivariate plot needs --second-variable");
    }
    const CellMCDFit fit = fit_cellmcd(X, a.o);
    ctx.add_warnings(fit.warnings);

    CellFlags flags;
    flags.columns = names;
    flags.row_ids = sub.row_ids();
    for (Index i = 0; i < sub.n_rows(); ++i) flags.row_names.push_back(sub.row_name(i));
    flags.flags = fit.flags();
    flags.missing = fit.missing;
    flags.std_residuals = fit.std_residuals;
    flags.predictions = fit.predictions;
    flags.cutoff = fit.cutoff;
    write_cellmap(ctx, flags, a.rows, a.bins);
    write_cells(ctx, flags, X, a.bins);
    std::vector<Column> imputed;
    for (std::size_t j = 0; j < names.size(); ++j) {
        imputed.push_back(numeric_column(names[j], fit.imputed.col(static_cast<Index>(j))));
    }
    ctx.write_frame("imputed.csv", row_frame(sub, std::move(imputed)));

    for (CellMcdPlot p : plots) {
        const CellMcdPlotData d = cellmcd_plot_data(fit, p, v, w, a.annotation_quantile);
        std::vector<double> ann(static_cast<std::size_t>(d.x.size()), 0.0);
        for (Index i : d.annotated) ann[static_cast<std::size_t>(i)] = 1.0;
        const std::string& vn = names[static_cast<std::size_t>(v)];
        json side;
        side["variable"] = vn;
        side["title"] = "cellMCD " + to_string(p);
        switch (p) {
        case CellMcdPlot::indexplot:
            side["xlabel"] = "index";
            side["ylabel"] = "standardized residual of " + vn;
            break;
        case CellMcdPlot::residuals_vs_variable:
            side["xlabel"] = vn;
            side["ylabel"] = "standardized residual of " + vn;
            break;
        case CellMcdPlot::residuals_vs_predictions:
            side["xlabel"] = "prediction of " + vn;
            side["ylabel"] = "standardized residual of " + vn;
            break;
        case CellMcdPlot::variable_vs_predictions:
            side["xlabel"] = "prediction of " + vn;
            side["ylabel"] = vn;
            break;
        case CellMcdPlot::bivariate:
            side["second_variable"] = names[static_cast<std::size_t>(*w)];
            side["xlabel"] = vn;
            side["ylabel"] = names[static_cast<std::size_t>(*w)];
            break;
        }
        side["hlines"] = d.hlines;
        side["vlines"] = d.vlines;
        if (d.ellipse.size() > 0) {
            side["ellipse_x"] = to_std(d.ellipse.row(0).transpose());
            side["ellipse_y"] = to_std(d.ellipse.row(1).transpose());
        }
        const std::string stem = "cellmcd_" + to_string(p);
        ctx.write_plot(stem, stem,
                       row_frame(sub, {numeric_column("x", d.x), numeric_column("y", d.y),
                                       Column::numeric("annotated", ann)}),
                       side);
    }
    ctx.summary["columns"] = names;
    ctx.summary["n"] = X.rows();
    ctx.summary["h"] = fit.h;
    ctx.summary["location"] = to_std(fit.location);
    ctx.summary["scatter"] = to_json(fit.scatter);
    ctx.summary["cutoff"] = fit.cutoff;
    ctx.summary["converged"] = fit.converged;
    ctx.summary["iterations"] = fit.objective_trace.size();
    ctx.summary["objective"] = fit.objective_trace.empty() ? json(nullptr) : json(fit.objective_trace.back());
    ctx.summary["n_flagged_cells"] = flags.flags.count();
    ctx.summary["n_missing_cells"] = flags.missing.count();
    ctx.summary["flagged_cells_per_column"] = flag_counts(flags);
}

struct BoxplotArgs {
    std::vector<std::string> columns;
};

void run_boxplot(Context& ctx, const BoxplotArgs& a) {
    ctx.parameters["columns"] = a.columns;
    const Frame f = load_input(ctx.common);
    const auto names = numeric_names(f, a.columns);
    std::vector<double> n, q1, med, q3, mc, lo, hi, wlo, whi, nout;
    std::vector<double> out_ids, out_values;
    std::vector<std::string> out_labels, out_cols;
    json outliers = json::object();
    json cols = json::object();
    for (const auto& name : names) {
        const Column& c = f.column(name);
        std::vector<double> obs;
        std::vector<std::size_t> pos;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c.missing(i)) continue;
            obs.push_back(c.values[i]);
            pos.push_back(i);
        }
        if (obs.empty()) throw InvalidArgument("column has no observed values: " + name);
        const BoxplotFences b = adjusted_boxplot_fences(obs);
        double lw = std::numeric_limits<double>::infinity();
        double hw = -lw;
        std::vector<double> flagged;
        for (std::size_t k = 0; k < obs.size(); ++k) {
            if (b.outlier_flags(static_cast<Index>(k))) {
                flagged.push_back(obs[k]);
                out_ids.push_back(static_cast<double>(f.row_ids()[pos[k]]));
                out_labels.push_back(f.row_name(static_cast<Index>(pos[k])));
                out_cols.push_back(name);
                out_values.push_back(obs[k]);
            } else {
                lw = std::min(lw, obs[k]);
                hw = std::max(hw, obs[k]);
            }
        }
        if (!std::isfinite(lw)) lw = hw = median(obs);
        n.push_back(static_cast<double>(obs.size()));
        q1.push_back(b.q1);
        med.push_back(median(obs));
        q3.push_back(b.q3);
        mc.push_back(b.mc);
        lo.push_back(b.lower);
        hi.push_back(b.upper);
        wlo.push_back(lw);
        whi.push_back(hw);
        nout.push_back(static_cast<double>(flagged.size()));
        outliers[name] = flagged;
        cols[name] = {{"q1", b.q1}, {"q3", b.q3}, {"mc", b.mc}, {"lower", b.lower},
                      {"upper", b.upper}, {"n_outliers", flagged.size()}};
    }
    std::vector<std::int64_t> pos(names.size());
    for (std::size_t j = 0; j < pos.size(); ++j) pos[j] = static_cast<std::int64_t>(j);
    Frame stats({text_column("column", names), Column::numeric("n", n), Column::numeric("q1", q1),
                 Column::numeric("median", med), Column::numeric("q3", q3), Column::numeric("mc", mc),
                 Column::numeric("lower", lo), Column::numeric("upper", hi),
                 Column::numeric("whisker_low", wlo), Column::numeric("whisker_high", whi),
                 Column::numeric("n_outliers", nout)},
                pos);
    json side;
    side["kind"] = "boxplot";
    side["outliers"] = outliers;
    ctx.write_text("boxplot.csv", format_csv(stats));
    ctx.write_json("boxplot.json", side);
    if (ctx.common.svg) ctx.write_text("boxplot.svg", render_svg(ctx.path("boxplot.csv").string(), "boxplot"));
    std::vector<std::int64_t> opos(out_ids.size());
    for (std::size_t k = 0; k < opos.size(); ++k) opos[k] = static_cast<std::int64_t>(k);
    ctx.write_frame("boxplot_outliers.csv",
                    Frame({Column::numeric("row_id", out_ids), text_column("row_label", out_labels),
                           text_column("column", out_cols), Column::numeric("value", out_values)},
                          opos),
                    false);
    ctx.summary["columns"] = cols;
}

struct DatasetsArgs {
    bool list = false;
    std::string load;
};

void run_datasets(Context& ctx, const DatasetsArgs& a, std::ostream& out) {
    ctx.parameters["list"] = a.list;
    ctx.parameters["load"] = a.load;
    if (a.list == !a.load.empty()) throw UsageError("give exactly one of --list or --load NAME");
    if (a.list) {
        json sets = json::array();
        for (const auto& name : dataset_names()) {
            const DatasetRecord r = load_dataset(name);
            out << name << '\n';
            sets.push_back({{"name", name},
                            {"n", r.data.n_rows()},
                            {"p", r.feature_names.size()},
                            {"description", r.description}});
        }
        ctx.summary["datasets"] = sets;
        return;
    }
    const DatasetRecord r = load_dataset(a.load);
    ctx.write_frame(a.load + ".csv", r.data);
    ctx.summary["name"] = a.load;
    ctx.summary["n"] = r.data.n_rows();
    ctx.summary["p"] = r.feature_names.size();
    ctx.summary["feature_names"] = r.feature_names;
    ctx.summary["description"] = r.description;
}

void add_common(CLI::App* sub, Common& c, bool input = true) {
    if (input) {
        sub->add_option("input", c.input, "Input CSV (row_id and row_label columns are recognized)");
        sub->add_option("--dataset", c.dataset, "Bundled dataset instead of an input CSV");
        sub->add_option("--na-marker", c.na_markers, "Cell text read as missing (repeatable)");
        sub->add_option("--label-column", c.label_column, "Column holding row labels");
        sub->add_option("--seed", c.seed, "Seed for randomized estimators");
        sub->add_option("--threads", c.threads, "OpenMP threads (0 = runtime default)")
            ->check(CLI::NonNegativeNumber);
        sub->add_flag("--svg", c.svg, "Also render plot data to SVG");
    }
    sub->add_option("--out", c.out, "Output directory");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Robust statistics toolkit"};
    app.name("robustats");
    app.require_subcommand(1);
    Common common;

    CleanArgs clean;
    auto* c_clean = app.add_subcommand("clean", "Drop unusable columns and rows");
    add_common(c_clean, common);
    c_clean->add_option("--frac-na-row", clean.t.frac_na_row, "Row missing fraction dropping a row");
    c_clean->add_option("--frac-na-col", clean.t.frac_na_col, "Column missing fraction dropping a column");
    c_clean->add_option("--min-unique", clean.t.min_unique, "Minimum distinct values per column");

    TransformArgs transform;
    auto* c_transform = app.add_subcommand("transform", "Robust Box-Cox / Yeo-Johnson transform");
    add_common(c_transform, common);
    c_transform->add_option("--column,--columns", transform.columns, "Columns to transform")->required();
    c_transform->add_option("--method", transform.method, "auto, boxcox or yeojohnson");
    c_transform->add_option("--suffix", transform.suffix, "Write to <column><suffix> instead of in place");
    c_transform->add_flag("--no-standardize", transform.no_standardize, "Skip pre/post standardization");

    ScaleArgs scale;
    auto* c_scale = app.add_subcommand("scale", "Robust centering and scaling");
    add_common(c_scale, common);
    c_scale->add_option("--column,--columns", scale.columns, "Columns (default all numeric)");
    c_scale->add_option("--method", scale.method, "umcd, onestep_m, qn, tau or median_mad");
    c_scale->add_flag("--no-centering", scale.no_centering, "Keep locations");
    c_scale->add_flag("--no-scaling", scale.no_scaling, "Keep scales");

    CovArgs cov;
    auto* c_cov = app.add_subcommand("cov", "Robust location and scatter");
    add_common(c_cov, common);
    c_cov->add_option("--column,--columns", cov.columns, "Columns (default all numeric)");
    c_cov->add_option("--method", cov.method, "fastmcd, detmcd, ogk, kendall or wrapping");
    c_cov->add_option("--alpha", cov.alpha, "MCD subset fraction");

    RegArgs reg;
    auto* c_reg = app.add_subcommand("reg", "Robust linear regression");
    add_common(c_reg, common);
    c_reg->add_option("--response", reg.response, "Response column")->required();
    c_reg->add_option("--column,--columns", reg.columns, "Predictors (default all other numeric)");
    c_reg->add_option("--method", reg.method, "lts, s or mm");
    c_reg->add_option("--alpha", reg.alpha, "LTS subset fraction");
    c_reg->add_option("--efficiency", reg.efficiency, "MM normal efficiency");

    PcaArgs pca;
    auto* c_pca = app.add_subcommand("pca", "Robust principal components");
    add_common(c_pca, common);
    c_pca->add_option("--column,--columns", pca.columns, "Columns (default all numeric)");
    c_pca->add_option("--method", pca.method, "robpca or spherical");
    c_pca->add_option("--n-components", pca.n_components, "Components (default by --k-min)");
    c_pca->add_option("--k-min", pca.k_min, "Explained variance target");
    c_pca->add_option("--alpha", pca.alpha, "Subset fraction");

    DdcArgs ddc;
    auto* c_ddc = app.add_subcommand("ddc", "Detect deviating cells");
    add_common(c_ddc, common);
    c_ddc->add_option("--column,--columns", ddc.columns, "Columns (default all numeric)");
    c_ddc->add_option("--rows", ddc.rows, "Row ids shown in the cell map");
    c_ddc->add_option("--cutoff-prob", ddc.o.cell_cutoff_prob, "Cell cutoff probability");
    c_ddc->add_option("--corr-lim", ddc.o.corr_lim, "Minimum |correlation| of predictors");
    c_ddc->add_option("--max-predictors", ddc.o.max_predictors, "Predictors per column");
    c_ddc->add_option("--bins", ddc.bins, "Color bins per sign");

    CellMcdArgs cellmcd;
    auto* c_cellmcd = app.add_subcommand("cellmcd", "Cellwise MCD");
    add_common(c_cellmcd, common);
    c_cellmcd->add_option("--column,--columns", cellmcd.columns, "Columns (default all numeric)");
    c_cellmcd->add_option("--rows", cellmcd.rows, "Row ids shown in the cell map");
    c_cellmcd->add_option("--alpha", cellmcd.o.alpha, "Unflagged fraction per column");
    c_cellmcd->add_option("--cutoff-prob", cellmcd.o.cutoff_prob, "Cell cutoff probability");
    c_cellmcd->add_option("--max-iter", cellmcd.o.max_iterations, "Iteration limit");
    c_cellmcd->add_option("--tol", cellmcd.o.tolerance, "Relative objective tolerance");
    c_cellmcd->add_option("--plot", cellmcd.plots, "indexplot, residuals_vs_variable, residuals_vs_predictions, variable_vs_predictions or bivariate");
    c_cellmcd->add_option("--variable", cellmcd.variable, "Plotted variable (default first)");
    c_cellmcd->add_option("--second-variable", cellmcd.second_variable, "Second variable of the bivariate plot");
    c_cellmcd->add_option("--annotation-quantile", cellmcd.annotation_quantile, "Annotation probability");
    c_cellmcd->add_option("--bins", cellmcd.bins, "Color bins per sign");

    BoxplotArgs box;
    auto* c_box = app.add_subcommand("boxplot", "Adjusted boxplot fences");
    add_common(c_box, common);
    c_box->add_option("--column,--columns", box.columns, "Columns (default all numeric)");

    DatasetsArgs datasets;
    auto* c_datasets = app.add_subcommand("datasets", "List or export bundled datasets");
    add_common(c_datasets, common, false);
    c_datasets->add_flag("--list", datasets.list, "Print dataset names");
    c_datasets->add_option("--load", datasets.load, "Write NAME.csv to --out");

    std::vector<std::string> argv_store = {"robustats"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    Context ctx;
    ctx.common = common;
    CLI::App* sub = app.get_subcommands().front();
    ctx.command = sub->get_name();
    ctx.parameters["input"] = common.input.empty() ? json(nullptr) : json(common.input);
    ctx.parameters["dataset"] = common.dataset.empty() ? json(nullptr) : json(common.dataset);
    ctx.parameters["threads"] = common.threads;
    ctx.parameters["svg"] = common.svg;
    if (!common.na_markers.empty()) ctx.parameters["na_markers"] = common.na_markers;
    if (!common.label_column.empty()) ctx.parameters["label_column"] = common.label_column;
    try {
        if (common.threads > 0) omp_set_num_threads(common.threads);
        fs::create_directories(common.out);
        const auto start = std::chrono::steady_clock::now();
        if (sub == c_clean) run_clean(ctx, clean);
        else if (sub == c_transform) run_transform(ctx, transform);
        else if (sub == c_scale) run_scale(ctx, scale);
        else if (sub == c_cov) run_cov(ctx, cov);
        else if (sub == c_reg) run_reg(ctx, reg);
        else if (sub == c_pca) run_pca(ctx, pca);
        else if (sub == c_ddc) run_ddc(ctx, ddc);
        else if (sub == c_cellmcd) run_cellmcd(ctx, cellmcd);
        else if (sub == c_box) run_boxplot(ctx, box);
        else run_datasets(ctx, datasets, out);
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        json report;
        report["schema_version"] = kSchemaVersion;
        report["command"] = ctx.command;
        report["parameters"] = ctx.parameters;
        report["seed"] = ctx.uses_seed ? json(common.seed) : json(nullptr);
        report["timing"] = {{"seconds", seconds}};
        ctx.outputs.push_back("report.json");
        report["outputs"] = ctx.outputs;
        report["summary"] = ctx.summary;
        report["warnings"] = ctx.warnings;
        std::ofstream f(ctx.path("report.json"), std::ios::binary);
        f << report.dump(2) << '\n';
        if (!f) throw Error("cannot write " + ctx.path("report.json").string());
    } catch (const UsageError& e) {
        err << "robustats " << ctx.command << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "robustats " << ctx.command << ": " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace robustats::cli
