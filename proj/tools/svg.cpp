// Copyright 2026 The robustats Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include "robustats/cellwise.hpp"
#include "robustats/common.hpp"
#include "robustats/frame.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace robustats::cli {

namespace {

using nlohmann::json;

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr const char* kFont = "font-family=\"DejaVu Sans, sans-serif\" font-size=\"12\"";

[[noreturn]] void malformed(const std::string& what) {
    throw InvalidArgument("malformed plot data: " + what);
}

std::string num(double v) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.2f", v);
    return buf.data();
}

std::string tick(double v) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.3g", v);
    return buf.data();
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

struct PlotInput {
    Frame frame;
    json sidecar;
};

PlotInput load(const std::string& csv_path, const std::string& kind) {
    std::filesystem::path side(csv_path);
    side.replace_extension(".json");
    std::ifstream in(side);
    if (!in) malformed("cannot read sidecar " + side.string());
    PlotInput p;
    try {
        p.sidecar = json::parse(in);
    } catch (const json::exception& e) {
        malformed(std::string("sidecar is not JSON: ") + e.what());
    }
    if (p.sidecar.value("kind", std::string{}) != kind) {
        malformed("sidecar kind does not match " + kind);
    }
    p.frame = read_csv(csv_path);
    return p;
}

const Column& require(const Frame& f, const std::string& name, ColumnKind kind) {
    if (!f.has_column(name)) malformed("missing column " + name);
    const Column& c = f.column(name);
    if (c.kind != kind) malformed("column " + name + " has the wrong type");
    return c;
}

std::vector<double> numeric(const Frame& f, const std::string& name) {
    const Column& c = require(f, name, ColumnKind::numeric);
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c.missing(i)) malformed("missing value in " + name);
    }
    return c.values;
}

/// Missing cells become NaN and are skipped when drawn.
std::vector<double> numeric_or_nan(const Frame& f, const std::string& name) {
    return require(f, name, ColumnKind::numeric).values;
}

double side_number(const json& j, const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_number()) malformed("sidecar lacks " + key);
    return j.at(key).get<double>();
}

std::vector<double> side_numbers(const json& j, const std::string& key) {
    if (!j.contains(key)) return {};
    if (!j.at(key).is_array()) malformed("sidecar " + key + " is not an array");
    std::vector<double> v;
    for (const auto& e : j.at(key)) {
        if (!e.is_number()) malformed("sidecar " + key + " holds a non-number");
        v.push_back(e.get<double>());
    }
    return v;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void finish() {
        if (!std::isfinite(lo)) {
            lo = 0.0;
            hi = 1.0;
        }
        if (hi - lo <= 0.0) {
            lo -= 1.0;
            hi += 1.0;
        }
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
};

struct Scatter {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<bool> highlighted;
    std::vector<std::string> annotations;
    std::vector<double> hlines;
    std::vector<double> vlines;
    std::vector<double> curve_x;
    std::vector<double> curve_y;
};

void header(std::ostringstream& os, double width, double height) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
       << num(height) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n";
}

std::string draw_scatter(const Scatter& s) {
    Range rx, ry;
    for (double v : s.x) rx.add(v);
    for (double v : s.y) ry.add(v);
    for (double v : s.vlines) rx.add(v);
    for (double v : s.hlines) ry.add(v);
    for (double v : s.curve_x) rx.add(v);
    for (double v : s.curve_y) ry.add(v);
    rx.finish();
    ry.finish();
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    auto px = [&](double v) { return x0 + (v - rx.lo) / (rx.hi - rx.lo) * (x1 - x0); };
    auto py = [&](double v) { return y0 + (v - ry.lo) / (ry.hi - ry.lo) * (y1 - y0); };

    std::ostringstream os;
    header(os, kWidth, kHeight);
    os << "<text x=\"" << num(kWidth / 2) << "\" y=\"24.00\" text-anchor=\"middle\" " << kFont
       << ">" << escape(s.title) << "</text>\n";
    os << "<path class=\"axes\" d=\"M" << num(x0) << ' ' << num(y1) << " V" << num(y0) << " H"
       << num(x1) << "\" fill=\"none\" stroke=\"#000000\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double vx = rx.lo + (rx.hi - rx.lo) * k / 4.0;
        const double vy = ry.lo + (ry.hi - ry.lo) * k / 4.0;
        os << "<path class=\"tick\" d=\"M" << num(px(vx)) << ' ' << num(y0) << " V" << num(y0 + 5)
           << "\" stroke=\"#000000\"/>\n";
        os << "<text x=\"" << num(px(vx)) << "\" y=\"" << num(y0 + 18)
           << "\" text-anchor=\"middle\" " << kFont << ">" << tick(vx) << "</text>\n";
        os << "<path class=\"tick\" d=\"M" << num(x0 - 5) << ' ' << num(py(vy)) << " H" << num(x0)
           << "\" stroke=\"#000000\"/>\n";
        os << "<text x=\"" << num(x0 - 8) << "\" y=\"" << num(py(vy) + 4)
           << "\" text-anchor=\"end\" " << kFont << ">" << tick(vy) << "</text>\n";
    }
    os << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 15)
       << "\" text-anchor=\"middle\" " << kFont << ">" << escape(s.xlabel) << "</text>\n";
    os << "<text x=\"16.00\" y=\"" << num((y0 + y1) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16.00 "
       << num((y0 + y1) / 2) << ")\" " << kFont << ">" << escape(s.ylabel) << "</text>\n";
    for (double h : s.hlines) {
        os << "<line class=\"cutoff\" x1=\"" << num(x0) << "\" y1=\"" << num(py(h)) << "\" x2=\""
           << num(x1) << "\" y2=\"" << num(py(h))
           << "\" stroke=\"#7f7f7f\" stroke-dasharray=\"6 4\"/>\n";
    }
    for (double v : s.vlines) {
        os << "<line class=\"cutoff\" x1=\"" << num(px(v)) << "\" y1=\"" << num(y0) << "\" x2=\""
           << num(px(v)) << "\" y2=\"" << num(y1)
           << "\" stroke=\"#7f7f7f\" stroke-dasharray=\"6 4\"/>\n";
    }
    if (!s.curve_x.empty()) {
        os << "<polyline class=\"ellipse\" fill=\"none\" stroke=\"#1f77b4\" points=\"";
        for (std::size_t k = 0; k < s.curve_x.size(); ++k) {
            if (k) os << ' ';
            os << num(px(s.curve_x[k])) << ',' << num(py(s.curve_y[k]));
        }
        os << "\"/>\n";
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        const bool hl = i < s.highlighted.size() && s.highlighted[i];
        os << "<circle class=\"point\" cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
           << "\" r=\"3.00\" fill=\"" << (hl ? "#d62728" : "#1f3b5c") << "\"/>\n";
        if (i < s.annotations.size() && !s.annotations[i].empty()) {
            os << "<text class=\"annotation\" x=\"" << num(px(s.x[i]) + 5) << "\" y=\""
               << num(py(s.y[i]) - 5) << "\" " << kFont << ">" << escape(s.annotations[i])
               << "</text>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

std::vector<std::string> classes_of(const Frame& f) {
    return require(f, "class", ColumnKind::text).text;
}

std::string render_ddplot(const PlotInput& p) {
    Scatter s;
    s.title = "Distance-distance plot";
    s.xlabel = "Mahalanobis distance";
    s.ylabel = "Robust distance";
    s.x = numeric(p.frame, "md");
    s.y = numeric(p.frame, "rd");
    for (double f : numeric(p.frame, "flagged")) s.highlighted.push_back(f != 0.0);
    s.hlines = {side_number(p.sidecar, "cutoff")};
    return draw_scatter(s);
}

std::string render_outlier_map(const PlotInput& p) {
    Scatter s;
    s.title = "Regression outlier map";
    s.xlabel = "Robust distance of predictors";
    s.ylabel = "Standardized residual";
    s.x = numeric(p.frame, "x_distance");
    s.y = numeric(p.frame, "std_residual");
    for (const auto& c : classes_of(p.frame)) s.highlighted.push_back(c != "regular");
    const double v = side_number(p.sidecar, "v_threshold");
    s.hlines = {-v, v};
    s.vlines = {side_number(p.sidecar, "h_threshold")};
    return draw_scatter(s);
}

std::string render_pca_map(const PlotInput& p) {
    Scatter s;
    s.title = "PCA outlier map";
    s.xlabel = "Score distance";
    s.ylabel = "Orthogonal distance";
    s.x = numeric(p.frame, "sd");
    s.y = numeric(p.frame, "od");
    for (const auto& c : classes_of(p.frame)) s.highlighted.push_back(c != "regular");
    s.hlines = {side_number(p.sidecar, "od_cutoff")};
    s.vlines = {side_number(p.sidecar, "sd_cutoff")};
    return draw_scatter(s);
}

std::string render_cellmcd(const PlotInput& p) {
    Scatter s;
    s.title = p.sidecar.value("title", std::string{});
    s.xlabel = p.sidecar.value("xlabel", std::string{});
    s.ylabel = p.sidecar.value("ylabel", std::string{});
    s.x = numeric_or_nan(p.frame, "x");
    s.y = numeric_or_nan(p.frame, "y");
    const auto annotated = numeric(p.frame, "annotated");
    const auto& labels = p.frame.has_column("row_label") ? p.frame.column("row_label").text
                                                         : std::vector<std::string>{};
    const auto ids = numeric(p.frame, "row_id");
    for (std::size_t i = 0; i < annotated.size(); ++i) {
        const bool a = annotated[i] != 0.0;
        s.highlighted.push_back(a);
        std::string label;
        if (a) label = labels.empty() ? tick(ids[i]) : labels[i];
        s.annotations.push_back(label);
    }
    s.hlines = side_numbers(p.sidecar, "hlines");
    s.vlines = side_numbers(p.sidecar, "vlines");
    s.curve_x = side_numbers(p.sidecar, "ellipse_x");
    s.curve_y = side_numbers(p.sidecar, "ellipse_y");
    if (s.curve_x.size() != s.curve_y.size()) malformed("ellipse coordinates differ in length");
    return draw_scatter(s);
}

std::string cell_fill(int code, int bins) {
    if (code == kCellMissing) return "#ffffff";
    if (code == 0) return "#fff7a8";
    const double t = std::min(1.0, std::abs(code) / static_cast<double>(bins));
    auto mix = [&](int a, int b) {
        return static_cast<int>(std::lround(a + (b - a) * t));
    };
    std::array<char, 8> buf{};
    if (code > 0) {
        std::snprintf(buf.data(), buf.size(), "#%02x%02x%02x", mix(0xff, 0xb0), mix(0xc8, 0x00),
                      mix(0x80, 0x00));
    } else {
        std::snprintf(buf.data(), buf.size(), "#%02x%02x%02x", mix(0x90, 0x00), mix(0xc0, 0x20),
                      mix(0xff, 0xb0));
    }
    return buf.data();
}

std::string render_cellmap(const PlotInput& p) {
    const int bins = static_cast<int>(side_number(p.sidecar, "bins"));
    if (bins < 1) malformed("bins must be positive");
    if (!p.sidecar.contains("columns") || !p.sidecar.at("columns").is_array()) {
        malformed("sidecar lacks columns");
    }
    const auto columns = p.sidecar.at("columns").get<std::vector<std::string>>();
    const auto ids = numeric(p.frame, "row_id");
    std::vector<std::string> labels;
    if (p.frame.has_column("row_label")) {
        labels = require(p.frame, "row_label", ColumnKind::text).text;
    } else {
        for (double id : ids) labels.push_back(tick(id));
    }
    std::vector<const Column*> cells;
    for (const auto& c : columns) cells.push_back(&require(p.frame, c, ColumnKind::numeric));

    const double cw = 28.0, ch = 18.0, left = 160.0, top = 110.0;
    const double width = left + cw * static_cast<double>(columns.size()) + 20.0;
    const double height = top + ch * static_cast<double>(ids.size()) + 20.0;
    std::ostringstream os;
    header(os, width, height);
    os << "<text x=\"" << num(width / 2) << "\" y=\"20.00\" text-anchor=\"middle\" " << kFont
       << ">Cell map</text>\n";
    for (std::size_t j = 0; j < columns.size(); ++j) {
        const double x = left + cw * (static_cast<double>(j) + 0.5);
        os << "<text x=\"" << num(x) << "\" y=\"" << num(top - 6)
           << "\" text-anchor=\"start\" transform=\"rotate(-60 " << num(x) << ' ' << num(top - 6)
           << ")\" " << kFont << ">" << escape(columns[j]) << "</text>\n";
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const double y = top + ch * static_cast<double>(i);
        os << "<text x=\"" << num(left - 6) << "\" y=\"" << num(y + ch - 5)
           << "\" text-anchor=\"end\" " << kFont << ">" << escape(labels[i]) << "</text>\n";
        for (std::size_t j = 0; j < columns.size(); ++j) {
            const Column& c = *cells[j];
            int code = kCellMissing;
            if (!c.missing(i)) {
                const double v = c.values[i];
                if (v != std::round(v) || std::abs(v) > bins) malformed("invalid cell code");
                code = static_cast<int>(v);
            }
            os << "<rect class=\"cell\" x=\"" << num(left + cw * static_cast<double>(j))
               << "\" y=\"" << num(y) << "\" width=\"" << num(cw) << "\" height=\"" << num(ch)
               << "\" fill=\"" << cell_fill(code, bins) << "\" stroke=\"#bfbfbf\"/>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

std::string render_boxplot(const PlotInput& p) {
    const auto& names = require(p.frame, "column", ColumnKind::text).text;
    const auto q1 = numeric(p.frame, "q1");
    const auto med = numeric(p.frame, "median");
    const auto q3 = numeric(p.frame, "q3");
    const auto wlo = numeric(p.frame, "whisker_low");
    const auto whi = numeric(p.frame, "whisker_high");
    if (!p.sidecar.contains("outliers") || !p.sidecar.at("outliers").is_object()) {
        malformed("sidecar lacks outliers");
    }
    const json& outliers = p.sidecar.at("outliers");

    const double panel = 120.0;
    const double width = kLeft + panel * static_cast<double>(names.size()) + kRight;
    std::ostringstream os;
    header(os, width, kHeight);
    os << "<text x=\"" << num(width / 2) << "\" y=\"24.00\" text-anchor=\"middle\" " << kFont
       << ">Adjusted boxplot</text>\n";
    const double y0 = kHeight - kBottom, y1 = kTop;
    for (std::size_t j = 0; j < names.size(); ++j) {
        const auto out = side_numbers(outliers, names[j]);
        Range r;
        r.add(wlo[j]);
        r.add(whi[j]);
        for (double v : out) r.add(v);
        r.finish();
        auto py = [&](double v) { return y0 + (v - r.lo) / (r.hi - r.lo) * (y1 - y0); };
        const double cx = kLeft + panel * (static_cast<double>(j) + 0.5);
        const double half = panel * 0.25;
        os << "<path class=\"axes\" d=\"M" << num(cx - panel / 2 + 10) << ' ' << num(y1) << " V"
           << num(y0) << "\" stroke=\"#000000\"/>\n";
        os << "<text x=\"" << num(cx - panel / 2 + 6) << "\" y=\"" << num(y1 + 4)
           << "\" text-anchor=\"end\" " << kFont << ">" << tick(r.hi) << "</text>\n";
        os << "<text x=\"" << num(cx - panel / 2 + 6) << "\" y=\"" << num(y0 + 4)
           << "\" text-anchor=\"end\" " << kFont << ">" << tick(r.lo) << "</text>\n";
        os << "<path class=\"whisker\" d=\"M" << num(cx) << ' ' << num(py(wlo[j])) << " V"
           << num(py(q1[j])) << " M" << num(cx) << ' ' << num(py(q3[j])) << " V"
           << num(py(whi[j])) << " M" << num(cx - half / 2) << ' ' << num(py(wlo[j])) << " H"
           << num(cx + half / 2) << " M" << num(cx - half / 2) << ' ' << num(py(whi[j])) << " H"
           << num(cx + half / 2) << "\" stroke=\"#000000\" fill=\"none\"/>\n";
        os << "<rect class=\"box\" x=\"" << num(cx - half) << "\" y=\"" << num(py(q3[j]))
           << "\" width=\"" << num(2 * half) << "\" height=\"" << num(py(q1[j]) - py(q3[j]))
           << "\" fill=\"#c6dbef\" stroke=\"#000000\"/>\n";
        os << "<path class=\"median\" d=\"M" << num(cx - half) << ' ' << num(py(med[j])) << " H"
           << num(cx + half) << "\" stroke=\"#000000\" stroke-width=\"2\"/>\n";
        for (double v : out) {
            os << "<circle class=\"point\" cx=\"" << num(cx) << "\" cy=\"" << num(py(v))
               << "\" r=\"3.00\" fill=\"#d62728\"/>\n";
        }
        os << "<text x=\"" << num(cx) << "\" y=\"" << num(y0 + 20) << "\" text-anchor=\"middle\" "
           << kFont << ">" << escape(names[j]) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace

std::string render_svg(const std::string& csv_path, const std::string& kind) {
    const bool known = kind == "ddplot" || kind == "outlier_map" || kind == "pca_map" ||
                       kind == "cellmap" || kind == "boxplot" || kind.rfind("cellmcd_", 0) == 0;
    if (!known) throw InvalidArgument("unknown plot kind: " + kind);
    const PlotInput p = load(csv_path, kind);
    if (kind == "ddplot") return render_ddplot(p);
    if (kind == "outlier_map") return render_outlier_map(p);
    if (kind == "pca_map") return render_pca_map(p);
    if (kind == "cellmap") return render_cellmap(p);
    if (kind == "boxplot") return render_boxplot(p);
    return render_cellmcd(p);
}

}  // namespace robustats::cli
