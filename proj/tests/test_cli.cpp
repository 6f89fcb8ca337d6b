// Copyright 2026 The robustats Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"
#include "robustats/common.hpp"
#include "robustats/frame.hpp"

#include "doctest.h"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace robustats;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream o, e;
    Result r;
    r.code = cli::run(args, o, e);
    r.out = o.str();
    r.err = e.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

// Fresh scratch directory removed at scope exit.
struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("robustats_cli_" + name)) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string operator/(const std::string& f) const { return (dir / f).string(); }
};

nlohmann::json report(const std::string& dir) { return nlohmann::json::parse(slurp(fs::path(dir) / "report.json")); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("datasets --load telephone writes 24 rows") {
    Scratch s("load");
    const Result r = run({"datasets", "--load", "telephone", "--out", s.dir.string()});
    CHECK(r.code == 0);
    CsvOptions o;
    o.id_column = "row_id";
    CHECK(read_csv(s / "telephone.csv", o).n_rows() == 24);
    const auto rep = report(s.dir.string());
    CHECK(rep["schema_version"] == cli::kSchemaVersion);
    CHECK(rep["command"] == "datasets");
    CHECK(run({"datasets", "--list", "--out", s.dir.string()}).out.find("topgear") != std::string::npos);
}

TEST_CASE("cov writes a report and distance-distance data") {
    Scratch s("cov");
    run({"datasets", "--load", "telephone", "--out", s.dir.string()});
    const std::string out = s / "run";
    const Result r = run({"cov", "--method", "fastmcd", "--alpha", "0.75", "--seed", "7", s / "telephone.csv", "--out", out});
    CHECK(r.code == 0);
    CHECK(fs::exists(fs::path(out) / "report.json"));
    CHECK(fs::exists(fs::path(out) / "ddplot.csv"));
    const auto rep = report(out);
    CHECK(rep["seed"] == 7);
    CHECK(rep["parameters"]["alpha"] == 0.75);
    CHECK(rep["outputs"].back() == "report.json");
    for (const auto& f : rep["outputs"]) CHECK(fs::exists(fs::path(out) / f.get<std::string>()));
    CHECK(rep["summary"]["h"] == 18);
    CHECK(slurp(fs::path(out) / "ddplot.csv").rfind("row_id,md,rd,flagged\n", 0) == 0);
    const Result det = run({"cov", "--method", "detmcd", s / "telephone.csv", "--out", out});
    CHECK(det.code == 0);
    CHECK(report(out)["seed"].is_null());
}

TEST_CASE("transform selects Box-Cox for Price") {
    Scratch s("transform");
    run({"datasets", "--load", "topgear", "--out", s.dir.string()});
    const Result r = run({"transform", "--column", "Price", "--method", "auto", s / "topgear.csv", "--out", s.dir.string()});
    CHECK(r.code == 0);
    const auto col = report(s.dir.string())["summary"]["columns"]["Price"];
    CHECK(col["method"] == "boxcox");
    CHECK(col["lambda_rew"].get<double>() == doctest::Approx(-0.4235).epsilon(0.05));
}

TEST_CASE("exit codes") {
    Scratch s("codes");
    CHECK(run({"cov", "--bogus", "x.csv"}).code == 2);
    CHECK(run({"nosuch"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"--help"}).code == 0);
    const Result missing = run({"cov", s / "missing.csv", "--out", s.dir.string()});
    CHECK(missing.code == 1);
    CHECK(missing.err.find("robustats cov:") != std::string::npos);
    CHECK(run({"datasets", "--out", s.dir.string()}).code == 2);
    run({"datasets", "--load", "telephone", "--out", s.dir.string()});
    CHECK(run({"cellmcd", s / "telephone.csv", "--plot", "bivariate", "--out", s.dir.string()}).code == 2);
    CHECK(run({"reg", s / "telephone.csv", "--response", "Nope", "--out", s.dir.string()}).code != 0);
}

TEST_CASE("reruns are byte-identical apart from timing") {
    Scratch s("rerun");
    run({"datasets", "--load", "topgear", "--out", s.dir.string()});
    const std::vector<std::vector<std::string>> commands = {
        {"pca", s / "topgear.csv", "--columns", "Displacement", "BHP", "Torque", "Weight", "--seed", "3", "--svg"},
        {"ddc", s / "topgear.csv", "--rows", "41", "1", "--svg"},
        {"boxplot", s / "topgear.csv", "--columns", "Price", "MPG", "--svg"},
    };
    for (const auto& cmd : commands) {
        CAPTURE(cmd[0]);
        std::map<std::string, std::string> first;
        for (int pass = 0; pass < 2; ++pass) {
            std::vector<std::string> args = cmd;
            args.insert(args.end(), {"--out", s / "out"});
            REQUIRE(run(args).code == 0);
            for (const auto& e : fs::directory_iterator(s.dir / "out")) {
                std::string text = slurp(e.path());
                if (e.path().filename() == "report.json") {
                    auto j = nlohmann::ordered_json::parse(text);
                    j.erase("timing");
                    text = j.dump();
                }
                const auto name = e.path().filename().string();
                if (pass == 0) {
                    first[name] = text;
                } else {
                    CHECK(first[name] == text);
                }
            }
        }
    }
}

TEST_CASE("SVG rendering") {
    Scratch s("svg");
    spit(s / "dd.csv", "row_id,md,rd,flagged\n0,1,1.5,0\n1,2,2.5,0\n2,3,9,1\n");
    spit(s / "dd.json", R"({"kind": "ddplot", "cutoff": 2.7})");
    const std::string svg = cli::render_svg(s / "dd.csv", "ddplot");
    CHECK(count(svg, "<circle") == 3);
    CHECK(count(svg, "<line") == 1);
    CHECK(cli::render_svg(s / "dd.csv", "ddplot") == svg);

    spit(s / "cm.csv", "row_id,row_label,a,b\n0,x,0,3\n1,y,NA,-5\n");
    spit(s / "cm.json", R"({"kind": "cellmap", "columns": ["a", "b"], "bins": 5, "cutoff": 2.5, "saturation": 4})");
    const std::string cm = cli::render_svg(s / "cm.csv", "cellmap");
    CHECK(count(cm, "<rect") == 4);
    CHECK(cm.find("#ffffff") != std::string::npos);

    CHECK_THROWS_AS(cli::render_svg(s / "dd.csv", "pie"), InvalidArgument);
    CHECK_THROWS(cli::render_svg(s / "cm.csv", "ddplot"));
    spit(s / "bad.csv", "row_id,md\n0,1\n");
    spit(s / "bad.json", R"({"kind": "ddplot", "cutoff": 1})");
    CHECK_THROWS(cli::render_svg(s / "bad.csv", "ddplot"));
}

TEST_CASE("full pipeline") {
    Scratch s("pipeline");
    const std::string d = s.dir.string();
    REQUIRE(run({"datasets", "--load", "topgear", "--out", d}).code == 0);
    REQUIRE(run({"clean", s / "topgear.csv", "--out", d}).code == 0);
    CHECK(report(d)["summary"]["dropped_rows"]["rows_missings"] == nlohmann::json::array({69, 95}));
    REQUIRE(run({"scale", s / "cleaned.csv", "--out", d}).code == 0);
    REQUIRE(run({"reg", s / "cleaned.csv", "--response", "Price", "--columns", "Displacement", "BHP", "Weight", "--svg", "--out", d}).code == 0);
    CHECK(fs::exists(s.dir / "outlier_map.svg"));
    REQUIRE(run({"cellmcd", s / "cleaned.csv", "--columns", "Displacement", "BHP", "Torque", "Weight", "--plot",
                 "residuals_vs_variable", "--variable", "BHP", "--svg", "--out", d}).code == 0);
    CHECK(fs::exists(s.dir / "cellmcd_residuals_vs_variable.svg"));
    CHECK(fs::exists(s.dir / "cells.csv"));
    CHECK(fs::exists(s.dir / "imputed.csv"));
}

}
