// Copyright 2026 The robustats Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "checks.hpp"
#include "cli.hpp"
#include "robustats/cellwise.hpp"
#include "robustats/covariance.hpp"
#include "robustats/pca.hpp"
#include "robustats/preprocessing.hpp"
#include "robustats/regression.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

using namespace robustats;
using namespace robustats::checks;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kLambdaTarget = -0.4235;
constexpr double kLambdaTol = 0.02;
constexpr double kLambdaSeconds = 1.0;
constexpr double kMcdMinRd = 60.0;
constexpr double kMcdMinMd = 12.0;
constexpr int kMcdSeeds = 10;
constexpr double kPcaRatio1 = 0.7566;
constexpr double kPcaRatio2 = 0.8725;
constexpr double kPcaRatioTol = 0.03;
constexpr int kPcaMaxMissing = 1;
constexpr double kPcaSeconds = 10.0;
constexpr double kMmCoefTarget = 0.2713;
constexpr double kMmCoefTol = 0.05;
constexpr int kMmMinMatches = 4;
constexpr int kOracleInstances = 50;
constexpr double kObjectiveTol = 1e-9;
constexpr double kQnTol = 1e-12;
constexpr double kMedcoupleTol = 1e-12;
constexpr int kTransforms = 100;
constexpr double kEquivarianceTol = 1e-6;
constexpr Index kConsistencyN = 1000;
constexpr int kConsistencyReplicates = 200;
constexpr double kConsistencyTol = 0.03;
constexpr double kConstraintTol = 1e-6;

// TopGear row ids.
constexpr std::int64_t kI3 = 41;
const std::vector<std::int64_t> kPcaBad = {41, 49, 124, 135, 164, 196};
const std::vector<std::int64_t> kMmBad = {2, 5, 164, 222, 223, 253};
const std::vector<std::int64_t> kZeroAcceleration = {219, 234};

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string join_ids(const std::vector<std::int64_t>& ids) {
    std::string s = "{";
    for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? "," : "") + std::to_string(ids[i]);
    return s + "}";
}

Frame mcd_frame() { return topgear_transformed().drop_columns({"Verdict"}).drop_missing_rows(); }

void criterion1() {
    const Frame f = clean_dataset(load_dataset("topgear").data).data;
    const Column& c = f.column("Price");
    std::vector<double> v;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!c.missing(i)) v.push_back(c.values[i]);
    }
    const auto t0 = std::chrono::steady_clock::now();
    const PowerTransform t = fit_power_transform(v);
    const double secs = seconds_since(t0);
    const bool pass = t.method == PowerMethod::boxcox && std::abs(t.lambda_rew - kLambdaTarget) <= kLambdaTol &&
                      secs < kLambdaSeconds;
    report(1, pass, "Price " + to_string(t.method) + " lambda_rew " + fmt("%.4f", t.lambda_rew) + " in " +
                        fmt("%.3f", secs) + " s");
}

void criterion2() {
    const CleanResult r = clean_dataset(load_dataset("topgear").data);
    const bool pass = r.report.rows_missings == std::vector<std::int64_t>{69, 95} &&
                      r.report.cols_bad_scale == std::vector<std::string>{"Cylinders"};
    std::string bad;
    for (const auto& s : r.report.cols_bad_scale) bad += s + " ";
    report(2, pass, "dropped rows " + join_ids(r.report.rows_missings) + ", bad scale: " + bad);
}

void criterion3() {
    const Frame f = mcd_frame().drop_columns({"Price"});
    const Matrix X = f.numeric_matrix();
    bool pass = true;
    double min_rd = INFINITY, min_md = INFINITY;
    for (int seed = 0; seed < kMcdSeeds; ++seed) {
        FastMcdOptions o;
        o.seed = static_cast<std::uint64_t>(seed);
        const LocationScatter fit = fit_fast_mcd(X, o);
        const DDPlotData dd = distance_distance_data(fit, X);
        Index i = 0;
        const double rd = dd.robust_distances.maxCoeff(&i);
        pass = pass && f.row_ids()[static_cast<std::size_t>(i)] == kI3 && rd > kMcdMinRd &&
               dd.classical_distances(i) > kMcdMinMd;
        min_rd = std::min(min_rd, rd);
        min_md = std::min(min_md, dd.classical_distances(i));
    }
    report(3, pass, "max RD row is BMW i3 for " + std::to_string(kMcdSeeds) + " seeds, min RD " +
                        fmt("%.1f", min_rd) + ", min MD " + fmt("%.1f", min_md));
}

int count_in(const std::vector<std::int64_t>& want, const std::set<std::int64_t>& got) {
    int k = 0;
    for (auto id : want) k += got.count(id) ? 1 : 0;
    return k;
}

void criterion4() {
    const Frame f = robust_scale(mcd_frame().drop_columns({"Price"}), UnivariateMethod::umcd, false, true).data;
    const Matrix X = f.numeric_matrix();
    const auto t0 = std::chrono::steady_clock::now();
    RobpcaOptions o;
    o.n_components = 2;
    const PCAFit fit = fit_robpca(X, o);
    const PCAOutlierMapData m = pca_outlier_map_data(fit, X);
    const double secs = seconds_since(t0);
    std::set<std::int64_t> bad;
    for (std::size_t i = 0; i < m.classes.size(); ++i) {
        if (m.classes[i] == PCAClass::bad_leverage) bad.insert(f.row_ids()[i]);
    }
    const int found = count_in(kPcaBad, bad);
    const double r1 = fit.explained_variance_ratio(0), r2 = fit.explained_variance_ratio(1);
    const bool ratios = std::abs(r1 - kPcaRatio1) <= kPcaRatioTol && std::abs(r2 - kPcaRatio2) <= kPcaRatioTol;
    const bool set_ok = static_cast<int>(kPcaBad.size()) - found <= kPcaMaxMissing;
    report(4, ratios && set_ok && secs < kPcaSeconds,
           "ratios [" + fmt("%.4f", r1) + ", " + fmt("%.4f", r2) + "] " + (ratios ? "ok" : "off") + ", " +
               std::to_string(found) + "/6 listed vehicles in bad-leverage set of " + std::to_string(bad.size()) +
               ", " + fmt("%.2f", secs) + " s");
}

void criterion5() {
    const Frame f = mcd_frame();
    const Frame xf = f.drop_columns({"Price", "Price_transformed"});
    const Matrix X = xf.numeric_matrix();
    const Vector y = f.numeric_matrix({"Price_transformed"}).col(0);
    const RegressionFit fit = fit_mm_regression(X, y);
    const OutlierMapData om = outlier_map_data(fit, X, y);
    std::set<std::int64_t> bad;
    for (std::size_t i = 0; i < om.classes.size(); ++i) {
        if (om.classes[i] == PointClass::bad_leverage) bad.insert(xf.row_ids()[i]);
    }
    const int found = count_in(kMmBad, bad);
    const double c0 = fit.coefficients(0);
    const bool coef = std::abs(c0 - kMmCoefTarget) <= kMmCoefTol;
    report(5, coef && found >= kMmMinMatches,
           "leading coefficient " + fmt("%.4f", c0) + (coef ? " ok" : " off") + ", " + std::to_string(found) +
               "/6 listed cars in bad-leverage set");
}

void criterion6() {
    const Frame f = topgear_log();
    const auto names = f.numeric_column_names();
    const CellMCDFit fit = fit_cellmcd(f.numeric_matrix(names));
    const auto j = static_cast<Index>(std::find(names.begin(), names.end(), "Acceleration") - names.begin());
    const BoolMatrix flags = fit.flags();
    bool pass = j < static_cast<Index>(names.size());
    std::string detail;
    for (auto id : kZeroAcceleration) {
        const Index i = f.row_position(id);
        const bool ok = pass && i >= 0 && fit.data(i, j) == 0.0 && flags(i, j);
        pass = pass && ok;
        detail += f.row_name(i) + (ok ? " flagged; " : " not flagged; ");
    }
    report(6, pass, "zero Acceleration cells: " + detail);
}

void criterion7() {
    const DdcModel m = fit_ddc(topgear_transformed().drop_columns({"Price"}));
    const Index i = m.training.row_ids.empty() ? -1
                    : static_cast<Index>(std::find(m.training.row_ids.begin(), m.training.row_ids.end(), kI3) -
                                         m.training.row_ids.begin());
    auto col = [&](const std::string& n) {
        return static_cast<Index>(std::find(m.columns.begin(), m.columns.end(), n) - m.columns.begin());
    };
    const Index d = col("Displacement"), g = col("MPG");
    const double rd = m.training.std_residuals(i, d), rg = m.training.std_residuals(i, g);
    const bool pass = m.training.flags(i, d) && rd < 0.0 && m.training.flags(i, g) && rg > 0.0;
    report(7, pass, "BMW i3 Displacement residual " + fmt("%.2f", rd) + ", MPG residual " + fmt("%.2f", rg));
}

void criterion8() {
    const OracleSummary mcd = mcd_oracle(kOracleInstances, 8);
    const OracleSummary lts = lts_oracle(kOracleInstances, 8);
    const OracleSummary qn = qn_oracle(200, 8);
    const OracleSummary mc = medcouple_oracle(200, 8);
    const bool pass = mcd.max_rel_diff <= kObjectiveTol && lts.max_rel_diff <= kObjectiveTol &&
                      qn.max_rel_diff <= kQnTol && mc.max_rel_diff <= kMedcoupleTol;
    report(8, pass, "max rel diff mcd " + fmt("%.1e", mcd.max_rel_diff) + ", lts " + fmt("%.1e", lts.max_rel_diff) +
                        ", qn " + fmt("%.1e", qn.max_rel_diff) + ", medcouple " + fmt("%.1e", mc.max_rel_diff));
}

void criterion9() {
    std::vector<EquivarianceSummary> all;
    for (const char* m : {"fastmcd", "detmcd", "ogk", "kendall", "wrapping"}) {
        all.push_back(covariance_equivariance(m, kTransforms, 9));
    }
    for (const char* m : {"lts", "s", "mm"}) all.push_back(regression_equivariance(m, kTransforms, 9));
    for (const char* m : {"robpca", "spherical"}) all.push_back(pca_equivariance(m, kTransforms, 9));
    bool pass = true;
    std::string detail;
    for (const auto& s : all) {
        pass = pass && s.transforms == kTransforms && s.max_error <= kEquivarianceTol;
        detail += s.estimator + " " + fmt("%.1e", s.max_error) + "; ";
    }
    report(9, pass, detail);
}

void criterion10() {
    bool pass = true;
    std::string detail;
    for (const char* e : {"umcd", "qn", "tau", "lts", "s"}) {
        const ConsistencySummary s = scale_consistency(e, kConsistencyN, kConsistencyReplicates, 10);
        pass = pass && std::abs(s.mean_scale - 1.0) <= kConsistencyTol;
        if (std::string(e) == "s") {
            pass = pass && s.max_constraint_residual < kConstraintTol;
            detail += "s constraint residual " + fmt("%.1e", s.max_constraint_residual) + "; ";
        }
        detail += std::string(e) + " " + fmt("%.4f", s.mean_scale) + "; ";
    }
    report(10, pass, detail);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Output files of one CLI run; report.json has its wall-clock timing removed.
std::map<std::string, std::string> run_cli(const std::vector<std::string>& args, const fs::path& out) {
    fs::remove_all(out);
    std::vector<std::string> full = args;
    full.insert(full.end(), {"--out", out.string()});
    std::ostringstream o, e;
    if (cli::run(full, o, e) != 0) throw Error("cli failed: " + e.str());
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::directory_iterator(out)) {
        std::string text = slurp(entry.path());
        if (entry.path().filename() == "report.json") {
            auto j = nlohmann::ordered_json::parse(text);
            j.erase("timing");
            text = j.dump(2);
        }
        files[entry.path().filename().string()] = text;
    }
    files["stdout"] = o.str();
    return files;
}

void criterion11() {
    bool pass = detmcd_repeatable(11);
    std::string detail = std::string("DetMCD ") + (pass ? "repeatable" : "differs");
    for (const char* e : {"stahel_donoho", "fastmcd", "detmcd", "lts", "s", "mm", "robpca", "ddc", "cellmcd"}) {
        const bool same = thread_invariance(e, 11).identical;
        pass = pass && same;
        if (!same) detail += std::string("; ") + e + " differs across threads";
    }
    const fs::path root = fs::temp_directory_path() / "robustats_acceptance";
    fs::create_directories(root);
    std::ostringstream o, e;
    cli::run({"datasets", "--load", "topgear", "--out", root.string()}, o, e);
    cli::run({"datasets", "--load", "telephone", "--out", root.string()}, o, e);
    const std::string top = (root / "topgear.csv").string();
    const std::string tel = (root / "telephone.csv").string();
    const std::vector<std::vector<std::string>> runs = {
        {"clean", top},
        {"transform", top, "--column", "Price"},
        {"scale", tel},
        {"cov", tel, "--method", "fastmcd", "--seed", "7", "--svg"},
        {"cov", tel, "--method", "detmcd", "--svg"},
        {"reg", tel, "--response", "Calls", "--method", "lts", "--seed", "3", "--svg"},
        {"reg", tel, "--response", "Calls", "--svg"},
        {"pca", top, "--columns", "Displacement", "BHP", "Torque", "TopSpeed", "Weight", "--seed", "2", "--svg"},
        {"ddc", top, "--svg"},
        {"cellmcd", top, "--columns", "Displacement", "BHP", "Torque", "TopSpeed", "Weight", "--plot", "indexplot",
         "--plot", "bivariate", "--second-variable", "BHP", "--svg"},
        {"boxplot", tel, "--svg"},
    };
    int identical = 0;
    for (const auto& args : runs) {
        const auto a = run_cli(args, root / "a");
        const auto b = run_cli(args, root / "a");
        if (a == b) {
            ++identical;
        } else {
            pass = false;
            detail += "; cli " + args[0] + " differs";
        }
    }
    fs::remove_all(root);
    detail += "; " + std::to_string(identical) + "/" + std::to_string(runs.size()) +
              " CLI runs byte-identical apart from timing; 9 estimators thread-invariant";
    report(11, pass, detail);
}

}  // namespace

int main() {
    const std::vector<void (*)()> criteria = {criterion1, criterion2, criterion3, criterion4,  criterion5, criterion6,
                                              criterion7, criterion8, criterion9, criterion10, criterion11};
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        try {
            criteria[k]();
        } catch (const std::exception& e) {
            report(static_cast<int>(k + 1), false, std::string("error: ") + e.what());
        }
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
